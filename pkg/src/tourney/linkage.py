"""Switches, sorting-network embeddings, and k-linkage solvers.

The network linker embeds a comparator network into the tournament as a
chain of 5-vertex switches, then routes the Menger matching from the final
vertices to the targets back through the network. A greedy shortest-path
linker is also provided; it has no guarantee but works at sizes where the
network's degree requirement (3r + k + 7) is out of reach.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import permutations

from .bits import full, iter_bits, lowest, popcount, to_bits
from .connectivity import connectivity, menger_paths, reach
from .graph import Digraph, Path, path_edges
from .sorting_network import ComparatorNetwork, batcher, trace_permutation


class LinkageError(RuntimeError):
    """A linkage step failed; ``stage`` names it and ``cut`` may hold a separator."""

    def __init__(self, stage: str, detail: str, cut: set[int] | None = None):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail
        self.cut = cut


# --- switches -------------------------------------------------------------------


@dataclass(frozen=True)
class Switch:
    """Five vertices: a1 -> b or a2 -> b (orientation 1 or 2), b -> b1, b2,
    and the other entry -> b1, b2."""

    a1: int
    a2: int
    b: int
    b1: int
    b2: int
    orientation: int

    def edges(self) -> list[tuple[int, int]]:
        near, far = (self.a1, self.a2) if self.orientation == 1 else (self.a2, self.a1)
        return [(near, self.b), (self.b, self.b1), (self.b, self.b2), (far, self.b1), (far, self.b2)]

    def route(self, swap: bool) -> tuple[Path, Path]:
        """Disjoint paths from (a1, a2) to (b1, b2), or to (b2, b1) when ``swap``."""
        t1, t2 = (self.b2, self.b1) if swap else (self.b1, self.b2)
        if self.orientation == 1:
            return (self.a1, self.b, t1), (self.a2, t2)
        return (self.a1, t1), (self.a2, self.b, t2)


def check_switch(T: Digraph, sw: Switch) -> bool:
    vs = {sw.a1, sw.a2, sw.b, sw.b1, sw.b2}
    if len(vs) != 5 or sw.orientation not in (1, 2):
        return False
    if not all(T.adj[u, v] for u, v in sw.edges()):
        return False
    for swap in (False, True):
        p, q = sw.route(swap)
        if set(p) & set(q) or any(not T.adj[u, v] for u, v in path_edges(p) + path_edges(q)):
            return False
    return True


def find_switch(T: Digraph, a1: int, a2: int, alive: int | None = None) -> Switch:
    """An (a1, a2)-switch inside T[alive]; both entries need out-degree >= 7 there."""
    if a1 == a2:
        raise LinkageError("switch", "entries must differ")
    if alive is None:
        alive = full(T.n)
    alive |= (1 << a1) | (1 << a2)
    out = T.out_bits
    for a in (a1, a2):
        d = popcount(out[a] & alive)
        if d < 7:
            raise LinkageError("switch", f"out-degree of {a} is {d} < 7")
    n1 = out[a1] & alive & ~(1 << a2)
    A1 = to_bits(list(iter_bits(n1))[:3])
    n2 = out[a2] & alive & ~(1 << a1) & ~A1
    A2 = to_bits(list(iter_bits(n2))[:3])
    for b in iter_bits(A1 | A2):
        in_first = bool(A1 >> b & 1)
        cross = out[b] & (A2 if in_first else A1)
        if popcount(cross) >= 2:
            b1, b2 = list(iter_bits(cross))[:2]
            return Switch(a1, a2, b, b1, b2, 1 if in_first else 2)
    raise AssertionError("nine cross edges on six vertices always give out-degree 2")


# --- linkage structure -----------------------------------------------------------


@dataclass
class LinkageStructure:
    xs: tuple[int, ...]
    zs: tuple[int, ...]
    net: ComparatorNetwork
    switches: list[Switch]
    history: list[tuple[int, ...]]  # Z_q after each comparator, Z_0 first
    vertices: set[int] = field(default_factory=set)

    @property
    def k(self) -> int:
        return len(self.xs)

    @property
    def size(self) -> int:
        return len(self.vertices)


def build_linkage_structure(
    T: Digraph,
    xs: Sequence[int],
    net: ComparatorNetwork,
    exclude: Iterable[int] = (),
    check_degree: bool = True,
) -> LinkageStructure:
    """Embed ``net`` into T - exclude starting from the entry vertices ``xs``."""
    xs = tuple(int(x) for x in xs)
    k = len(xs)
    if len(set(xs)) != k:
        raise LinkageError("precondition", "entry vertices must be distinct")
    if net.k != k:
        raise LinkageError("precondition", f"network has {net.k} registers, got {k} entries")
    base = full(T.n) & ~to_bits(exclude)
    if any(not base >> x & 1 for x in xs):
        raise LinkageError("precondition", "entry vertex is excluded")
    r = len(net)
    if check_degree and r:
        need = 3 * r + k + 7
        have = min(popcount(T.out_bits[v] & base) for v in iter_bits(base))
        if have < need:
            raise LinkageError("precondition", f"min out-degree {have} < 3r+k+7 = {need}")
    used = to_bits(xs)
    z = list(xs)
    switches: list[Switch] = []
    history = [tuple(z)]
    for q, c in enumerate(net.comparators, start=1):
        a1, a2 = z[c.s - 1], z[c.t - 1]
        alive = (base & ~used) | (1 << a1) | (1 << a2)
        try:
            sw = find_switch(T, a1, a2, alive)
        except LinkageError as err:
            raise LinkageError("structure", f"comparator {q} ({c.s};{c.t}): {err.detail}") from None
        switches.append(sw)
        used |= (1 << sw.b) | (1 << sw.b1) | (1 << sw.b2)
        z[c.s - 1], z[c.t - 1] = sw.b1, sw.b2
        history.append(tuple(z))
    return LinkageStructure(xs, tuple(z), net, switches, history, set(iter_bits(used)))


def route(structure: LinkageStructure, pi) -> list[Path]:
    """Disjoint paths inside the structure; path i (0-based) runs x_{pi(i+1)} -> z_{i+1}."""
    tr = trace_permutation(structure.net, pi) if structure.net.k >= 1 else None
    k = structure.k
    pi = tr.perms[0]
    paths = [[structure.xs[pi[i] - 1]] for i in range(k)]
    for q, (c, sw) in enumerate(zip(structure.net.comparators, structure.switches)):
        before = tr.perms[q]
        va = before.index(c.s)  # value in register s, 0-based
        vb = before.index(c.t)
        pa, pb = sw.route(tr.swaps[q])
        paths[va].extend(pa[1:])
        paths[vb].extend(pb[1:])
    return [tuple(p) for p in paths]


def _network_for(k: int) -> ComparatorNetwork:
    return batcher(k) if k >= 2 else ComparatorNetwork(k, ())


def strict_link_threshold(k: int) -> float:
    """Connectivity sufficient for k-linkedness via the network argument: 1e4 k log k."""
    return 1e4 * k * math.log2(k) if k >= 2 else 1.0


def link(
    T: Digraph,
    pairs: Sequence[tuple[int, int]],
    exclude: Iterable[int] = (),
    mode: str = "operational",
    net: ComparatorNetwork | None = None,
) -> list[Path]:
    """Vertex-disjoint x_i -> y_i paths for 2k distinct endpoint vertices."""
    pairs = [(int(x), int(y)) for x, y in pairs]
    k = len(pairs)
    if k == 0:
        return []
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    if len(set(xs + ys)) != 2 * k:
        raise LinkageError("precondition", "endpoints must be 2k distinct vertices")
    exclude = set(exclude)
    if exclude & set(xs + ys):
        raise LinkageError("precondition", "an endpoint is excluded")
    if mode == "strict":
        need = strict_link_threshold(k)
        if T.n - len(exclude) - 1 < need or connectivity(T).kappa < need:
            raise LinkageError("precondition", f"strict mode needs connectivity >= {need:.0f}")
    net = net or _network_for(k)
    structure = build_linkage_structure(T, xs, net, exclude=exclude | set(ys))
    zs = structure.zs
    inside = structure.vertices - set(zs)
    res = menger_paths(T, zs, ys, k, exclude=exclude | inside)
    if not res.ok:
        raise LinkageError("menger", f"only {res.flow} disjoint Z->Y paths", cut=res.cut)
    # pi(i) = j when the Menger path from z_i ends at y_j (1-based)
    from_z = {p[0]: p for p in res.paths}
    pi = tuple(ys.index(from_z[z][-1]) + 1 for z in zs)
    inner = route(structure, pi)
    out: list[Path] = [()] * k
    for i in range(k):
        q = inner[i]  # x_{pi(i)} -> z_i
        out[pi[i] - 1] = q + from_z[zs[i]][1:]
    return out


# --- greedy linker ------------------------------------------------------------------


class _GreedyRouter:
    """Internally disjoint shortest paths avoiding every reserved endpoint."""

    def __init__(self, D: Digraph, alive: int, reserved: int):
        self.D = D
        self.alive = alive
        self.reserved = reserved
        self.used = 0
        self.direct: set[tuple[int, int]] = set()

    def shortest(self, x: int, y: int) -> Path | None:
        out = self.D.out_bits
        allowed = self.alive & ~self.reserved & ~self.used
        parent: dict[int, int] = {}
        frontier = out[x] & allowed
        for w in iter_bits(frontier):
            parent[w] = x
        seen = frontier
        while frontier:
            hit = -1
            for v in iter_bits(frontier):
                if out[v] >> y & 1:
                    hit = v
                    break
            if hit >= 0:
                path = [y, hit]
                while path[-1] != x:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            nxt = 0
            for v in iter_bits(frontier):
                new = out[v] & allowed & ~seen & ~nxt
                for w in iter_bits(new):
                    parent[w] = v
                nxt |= new
            seen |= nxt
            frontier = nxt
        return None

    def family(self, pairs: Sequence[tuple[int, int]]) -> list[Path] | None:
        """Route one family; on failure nothing is committed."""
        saved = (self.used, set(self.direct))
        paths: list[Path | None] = [None] * len(pairs)
        adj = self.D.adj
        for i, (x, y) in enumerate(pairs):
            if x == y:
                paths[i] = (x,)
            elif adj[x, y] and (x, y) not in self.direct:
                self.direct.add((x, y))
                paths[i] = (x, y)
        for i, (x, y) in enumerate(pairs):
            if paths[i] is not None:
                continue
            p = self.shortest(x, y)
            if p is None:
                self.used, self.direct = saved
                return None
            self.used |= to_bits(p[1:-1])
            paths[i] = p
        return paths  # type: ignore[return-value]


def _check_pairs(D: Digraph, pairs, exclude: set[int]):
    pairs = [(int(x), int(y)) for x, y in pairs]
    for x, y in pairs:
        for v in (x, y):
            if not 0 <= v < D.n:
                raise LinkageError("precondition", f"vertex {v} out of range")
            if v in exclude:
                raise LinkageError("precondition", f"endpoint {v} is excluded")
    return pairs


def link_internally_disjoint(
    D: Digraph,
    pairs: Sequence[tuple[int, int]],
    method: str = "network",
    exclude: Iterable[int] = (),
    mode: str = "operational",
) -> list[Path]:
    """Internally disjoint x_i -> y_i paths; endpoints may repeat.

    Interiors also avoid every endpoint vertex, which is slightly stronger than
    internal disjointness and lets callers concatenate paths safely. An (x, x)
    pair yields the single-vertex path (x,).
    """
    exclude = set(exclude)
    pairs = _check_pairs(D, pairs, exclude)
    reserved = {v for p in pairs for v in p}
    alive = full(D.n) & ~to_bits(exclude)
    if method == "greedy":
        paths = _GreedyRouter(D, alive, to_bits(reserved)).family(pairs)
        if paths is None:
            raise LinkageError("greedy", "no internally disjoint routing found")
        return paths
    if method != "network":
        raise ValueError(f"unknown linkage method {method!r}")
    out: list[Path | None] = [None] * len(pairs)
    claimed: set[int] = set()
    clones: set[int] = set()
    jobs = []  # (index, link source, link target, prefix, suffix)
    outb, inb = D.out_bits, D.in_bits
    blocked = to_bits(reserved) | to_bits(exclude)

    def clone(v: int, rows: list[int]) -> int:
        cand = rows[v] & ~blocked & ~to_bits(clones)
        if not cand:
            raise LinkageError("clone", f"no free neighbour to stand in for repeated endpoint {v}")
        w = lowest(cand)
        clones.add(w)
        return w

    for i, (x, y) in enumerate(pairs):
        if x == y:
            out[i] = (x,)
            continue
        if x in claimed:
            sx, pre = clone(x, outb), (x,)
        else:
            sx, pre = x, ()
            claimed.add(x)
        if y in claimed:
            ty, suf = clone(y, inb), (y,)
        else:
            ty, suf = y, ()
            claimed.add(y)
        jobs.append((i, sx, ty, pre, suf))
    if jobs:
        skip = exclude | (reserved - claimed)
        linked = link(D, [(sx, ty) for _, sx, ty, _, _ in jobs], exclude=skip, mode=mode)
        for (i, _, _, pre, suf), p in zip(jobs, linked):
            out[i] = pre + p + suf
    return out  # type: ignore[return-value]


def link_short(
    D: Digraph,
    pairs: Sequence[tuple[int, int]],
    s: int,
    method: str = "network",
    exclude: Iterable[int] = (),
    allow_partial: bool = False,
    mode: str = "operational",
) -> list[Path]:
    """Internally disjoint linkage using at most |D|/s vertices.

    Builds 2s internally disjoint families at once and returns the one with
    the fewest vertices. With ``allow_partial`` the greedy method keeps the
    families it managed to route (at least one) instead of failing.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    exclude = set(exclude)
    pairs = _check_pairs(D, pairs, exclude)
    k = len(pairs)
    if k == 0:
        return []
    copies = 2 * s
    if method == "greedy":
        alive = full(D.n) & ~to_bits(exclude)
        router = _GreedyRouter(D, alive, to_bits({v for p in pairs for v in p}))
        families = []
        for _ in range(copies):
            fam = router.family(pairs)
            if fam is None:
                if allow_partial and families:
                    break
                raise LinkageError("short", f"routed only {len(families)} of {copies} families")
            families.append(fam)
    else:
        flat = link_internally_disjoint(D, list(pairs) * copies, method, exclude, mode)
        families = [flat[j * k : (j + 1) * k] for j in range(copies)]
    best = min(families, key=lambda fam: len({v for p in fam for v in p}))
    order = len({v for p in best for v in p})
    host = D.n - len(exclude)
    if order * s > host:
        raise LinkageError("short", f"shortest family uses {order} > |D|/s = {host / s:.1f} vertices")
    return best


# --- linkage through prescribed paths -----------------------------------------------


def _chain_order(D: Digraph, start: int, paths: list[Path]) -> list[Path]:
    """Order paths so that each head tends to send an edge to the next tail."""
    rest = list(paths)
    out = []
    cur = start
    while rest:
        j = next((i for i, p in enumerate(rest) if D.adj[cur, p[0]]), 0)
        p = rest.pop(j)
        out.append(p)
        cur = p[-1]
    return out


def check_path_systems(T: Digraph, pairs, systems) -> None:
    ends = {v for p in pairs for v in p}
    seen_edges: set[tuple[int, int]] = set()
    for i, system in enumerate(systems):
        verts: set[int] = set()
        edges: set[tuple[int, int]] = set()
        for q in system:
            if not q or any(not T.adj[u, v] for u, v in path_edges(q)) or len(set(q)) != len(q):
                raise LinkageError("precondition", f"system {i} contains a non-path {q}")
            if verts & set(q):
                raise LinkageError("precondition", f"system {i} is not vertex-disjoint")
            if ends & set(q):
                raise LinkageError("precondition", f"system {i} meets an endpoint")
            verts |= set(q)
            edges |= set(path_edges(q))
        if edges & seen_edges:
            raise LinkageError("precondition", f"system {i} shares an edge with an earlier system")
        seen_edges |= edges


def link_with_paths(
    T: Digraph,
    pairs: Sequence[tuple[int, int]],
    systems: Sequence[Sequence[Path]],
    s: int,
    method: str = "network",
    exclude: Iterable[int] = (),
    allow_partial: bool = False,
    mode: str = "operational",
) -> list[Path]:
    """Edge-disjoint x_i -> y_i paths with every path of systems[i] inside P_i.

    Paths of different indices meet only inside V(systems[i]) ∩ V(systems[j]).
    """
    pairs = [(int(x), int(y)) for x, y in pairs]
    systems = [[tuple(q) for q in sys] for sys in systems]
    if len(systems) != len(pairs):
        raise LinkageError("precondition", "one path system per pair is required")
    if len({v for p in pairs for v in p}) != 2 * len(pairs):
        raise LinkageError("precondition", "endpoints must be 2k distinct vertices")
    check_path_systems(T, pairs, systems)
    qverts = {v for sys in systems for q in sys for v in q}
    qends = {v for sys in systems for q in sys for v in (q[0], q[-1])}
    single_edges = [(q[0], q[1]) for sys in systems for q in sys if len(q) == 2]
    host = T.remove_edges(single_edges) if single_edges else T
    drop = set(exclude) | (qverts - qends)
    ordered = [_chain_order(T, x, sys) for (x, _), sys in zip(pairs, systems)]
    flat: list[tuple[int, int]] = []
    owner: list[int] = []
    for i, ((x, y), sys) in enumerate(zip(pairs, ordered)):
        cur = x
        for q in sys:
            flat.append((cur, q[0]))
            owner.append(i)
            cur = q[-1]
        flat.append((cur, y))
        owner.append(i)
    segs = link_short(host, flat, s, method, drop, allow_partial, mode)
    out = []
    pos = 0
    for i, sys in enumerate(ordered):
        p = list(segs[pos])
        pos += 1
        for q in sys:
            p.extend(q[1:])
            p.extend(segs[pos][1:])
            pos += 1
        out.append(tuple(p))
    return out


def check_link_with_paths(T: Digraph, pairs, systems, paths, s: int, host_size: int | None = None) -> dict[str, bool]:
    """The four output properties: endpoints, absorption, overlap, and total order."""
    host_size = T.n if host_size is None else host_size
    ok_ends = all(
        len(p) >= 1 and p[0] == x and p[-1] == y and len(set(p)) == len(p) and all(T.adj[u, v] for u, v in path_edges(p))
        for p, (x, y) in zip(paths, pairs)
    )

    def contains(p: Path, q: Path) -> bool:
        if q[0] not in p:
            return False
        i = p.index(q[0])
        return tuple(p[i : i + len(q)]) == tuple(q)

    ok_absorb = all(contains(p, q) for p, sys in zip(paths, systems) for q in sys)
    ok_overlap = True
    edges_ok = True
    vq = [{v for q in sys for v in q} for sys in systems]
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if set(paths[i]) & set(paths[j]) - (vq[i] & vq[j]):
                ok_overlap = False
            if set(path_edges(paths[i])) & set(path_edges(paths[j])):
                edges_ok = False
    allq = set().union(*vq) if vq else set()
    total = len({v for p in paths for v in p})
    return {
        "endpoints": ok_ends,
        "absorbed": ok_absorb,
        "overlap": ok_overlap and edges_ok,
        "order": total <= host_size / s + len(allq),
    }


# --- oracle ----------------------------------------------------------------------------


def _simple_paths(D: Digraph, x: int, y: int, alive: int):
    out = D.out_bits
    stack = [(x, (x,), (1 << x))]
    while stack:
        v, path, seen = stack.pop()
        if v == y:
            yield path
            continue
        for w in iter_bits(out[v] & alive & ~seen):
            stack.append((w, path + (w,), seen | (1 << w)))


def brute_force_is_k_linked(D: Digraph, k: int) -> bool:
    """Oracle for tiny digraphs: every choice of 2k distinct endpoints links."""
    n = D.n
    if n > 10 or k > 2:
        raise ValueError("brute force linkage is guarded to n <= 10 and k <= 2")
    if n < 2 * k:
        return False
    everything = full(n)
    for ends in permutations(range(n), 2 * k):
        xs, ys = ends[:k], ends[k:]
        if k == 1:
            if not reach(D.out_bits, xs[0], everything) >> ys[0] & 1:
                return False
            continue
        others = to_bits(ends)
        ok = False
        for p in _simple_paths(D, xs[0], ys[0], everything & ~(others & ~to_bits((xs[0], ys[0])))):
            rest = everything & ~to_bits(p)
            if reach(D.out_bits, xs[1], rest | (1 << xs[1])) >> ys[1] & 1:
                ok = True
                break
        if not ok:
            return False
    return True
