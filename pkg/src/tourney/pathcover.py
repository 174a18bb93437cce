"""Gallai-Milgram path covers and head/tail extension of covers.

The extension steps reshape a path cover so that no path ends (or starts) in
a bad set I, while protected vertices J keep their role, prescribed edges F
stay on the paths, and the cover grows by at most |part1| paths.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .bits import full, iter_bits, lowest, popcount, to_bits
from .graph import Digraph, Path, path_edges


class PathExtensionError(RuntimeError):
    def __init__(self, detail: str, vertex: int | None = None):
        super().__init__(detail)
        self.detail = detail
        self.vertex = vertex


@dataclass
class CoverPartition:
    part1: list[Path]
    part2: list[Path]

    @property
    def paths(self) -> list[Path]:
        return list(self.part1) + list(self.part2)


def is_path_cover(D: Digraph, paths: Iterable[Sequence[int]], vertices: Iterable[int] | None = None) -> bool:
    want = set(range(D.n)) if vertices is None else set(vertices)
    seen: set[int] = set()
    for p in paths:
        if not p or len(set(p)) != len(p) or seen & set(p):
            return False
        if any(not D.adj[u, v] for u, v in path_edges(p)):
            return False
        seen |= set(p)
    return seen == want


# --- Gallai-Milgram ---------------------------------------------------------------


def gallai_milgram_cover(D: Digraph, vertices: Iterable[int] | None = None) -> list[Path]:
    """Path cover of D[vertices] whose heads form an independent set (or certify one).

    Starting from singletons, a path is removed whenever two heads are joined
    by an edge, using the inductive argument: drop the head v of the target
    path, reduce the rest recursively, then hang v back behind its old
    predecessor or behind the source head u. If some level finds its heads
    independent the attempt is undone; that level exhibits an independent set
    as large as the current cover, so the bound n - delta still holds.
    """
    alive = full(D.n) if vertices is None else to_bits(vertices)
    out = D.out_bits
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    heads = alive
    while True:
        stack: list[tuple[int, int, int]] = []
        cur = heads
        done = False
        while True:
            found = None
            for u in iter_bits(cur):
                c = out[u] & cur
                if c:
                    found = (u, lowest(c))
                    break
            if found is None:
                break
            u, v = found
            vp = pred.get(v, -1)
            if vp < 0:  # v is a singleton path: hang it behind u
                succ[u] = v
                pred[v] = u
                cur &= ~(1 << u)
                done = True
                break
            del succ[vp]
            del pred[v]
            stack.append((u, v, vp))
            cur = (cur & ~(1 << v)) | (1 << vp)
        if not done:
            for u, v, vp in reversed(stack):
                succ[vp] = v
                pred[v] = vp
            break
        for u, v, vp in reversed(stack):
            if cur >> vp & 1:
                succ[vp] = v
                pred[v] = vp
                cur = (cur & ~(1 << vp)) | (1 << v)
            elif cur >> u & 1:
                succ[u] = v
                pred[v] = u
                cur = (cur & ~(1 << u)) | (1 << v)
            else:  # pragma: no cover - excluded by the counting argument
                raise AssertionError("reduction lost both candidate heads")
        heads = cur
    paths = []
    for t in iter_bits(alive):
        if t in pred:
            continue
        p = [t]
        while p[-1] in succ:
            p.append(succ[p[-1]])
        paths.append(tuple(p))
    return paths


def independence_number(D: Digraph) -> int:
    """Oracle for small digraphs (n <= 16): size of a largest independent set."""
    n = D.n
    if n > 16:
        raise ValueError("independence number oracle is guarded to n <= 16")
    nb = [a | b for a, b in zip(D.out_bits, D.in_bits)]
    best = 0

    def grow(cand: int, size: int):
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if not cand:
            best = max(best, size)
            return
        v = lowest(cand)
        grow(cand & ~(1 << v) & ~nb[v], size + 1)
        grow(cand & ~(1 << v), size)

    grow(full(n), 0)
    return best


# --- extension --------------------------------------------------------------------


def _extend(
    D: Digraph,
    cover: CoverPartition,
    I: Iterable[int],
    J: Iterable[int],
    F: Iterable[tuple[int, int]],
    strengthened: bool,
    at_head: bool,
    vertices: Iterable[int] | None,
    check_degrees: bool,
    debug: bool,
) -> list[Path]:
    I, J = set(I), set(J)
    F = set(F)
    if I & J:
        raise PathExtensionError("I and J must be disjoint")
    part1 = [tuple(p) for p in cover.part1]
    part2 = [tuple(p) for p in cover.part2]
    paths = [list(p) for p in part1 + part2]
    alive = to_bits(vertices) if vertices is not None else to_bits(v for p in paths for v in p)

    def end(p):
        return p[-1] if at_head else p[0]

    if any(end(p) in I for p in part2):
        side = "head" if at_head else "tail"
        raise PathExtensionError(f"a part2 path has its {side} in I")
    cover_edges = {e for p in paths for e in path_edges(p)}
    if not F <= cover_edges:
        raise PathExtensionError("F is not contained in the cover")
    vf = to_bits(v for e in F for v in e)
    v2 = to_bits(v for p in part2 for v in p)
    rows = D.out_bits if at_head else D.in_bits
    if check_degrees:
        need = 3 * (len(I) + len(J)) + 2 * len(F) + (popcount(v2) if strengthened else 0)
        for v in sorted(I):
            d = popcount(rows[v] & alive)
            if d <= need:
                raise PathExtensionError(f"degree {d} of {v} is not above {need}", v)
    bad = to_bits(I | J)
    r = len(part1)
    for i in range(1, r + 1):
        ending = [p for p in paths if end(p) in I]
        if len(ending) <= r - i:
            continue
        P = min(ending, key=end)
        v = end(P)
        nxt: dict[int, int] = {}
        prv: dict[int, int] = {}
        for p in paths:
            for a, b in zip(p, p[1:]):
                nxt[a] = b
                prv[b] = a
        X = bad
        for x in iter_bits(bad):
            if x in nxt:
                X |= 1 << nxt[x]
            if x in prv:
                X |= 1 << prv[x]
        excluded = X | vf | (v2 if strengthened else 0)
        cand = rows[v] & alive & ~excluded
        if not cand:
            raise PathExtensionError(f"no admissible neighbour for {v} at step {i}", v)
        w = lowest(cand)
        qi = next(j for j, p in enumerate(paths) if w in p)
        Q = paths.pop(qi)
        j = Q.index(w)
        pieces = [piece for piece in (Q[:j], [w], Q[j + 1 :]) if piece]
        paths[qi:qi] = pieces
        wi = next(j for j, p in enumerate(paths) if p == [w])
        paths.pop(wi)
        star = next(p for p in paths if end(p) == v)
        if at_head:
            star.append(w)
        else:
            star.insert(0, w)
        if debug:
            left = sum(1 for p in paths if end(p) in I)
            assert left <= r - i, f"step {i}: {left} paths still end in I"
    return [tuple(p) for p in paths]


def extend_heads(
    D: Digraph,
    cover: CoverPartition,
    I: Iterable[int],
    J: Iterable[int],
    F: Iterable[tuple[int, int]] = (),
    strengthened: bool = False,
    vertices: Iterable[int] | None = None,
    check_degrees: bool = True,
    debug: bool = False,
) -> list[Path]:
    """Reshape ``cover`` so that no head lies in I, appending out-neighbours."""
    return _extend(D, cover, I, J, F, strengthened, True, vertices, check_degrees, debug)


def extend_tails(
    D: Digraph,
    cover: CoverPartition,
    I: Iterable[int],
    J: Iterable[int],
    F: Iterable[tuple[int, int]] = (),
    strengthened: bool = False,
    vertices: Iterable[int] | None = None,
    check_degrees: bool = True,
    debug: bool = False,
) -> list[Path]:
    """Mirror of :func:`extend_heads`: no tail in I, prepending in-neighbours."""
    return _extend(D, cover, I, J, F, strengthened, False, vertices, check_degrees, debug)


def check_extension(
    D: Digraph,
    before: CoverPartition,
    after: Sequence[Path],
    I: Iterable[int],
    J: Iterable[int],
    F: Iterable[tuple[int, int]] = (),
    strengthened: bool = False,
    at_head: bool = True,
) -> dict[str, bool]:
    """Postconditions (i)-(vi) of an extension step, plus cover validity."""
    I, J = set(I), set(J)
    old = before.paths
    new = [tuple(p) for p in after]
    near = (lambda ps: {p[-1] for p in ps}) if at_head else (lambda ps: {p[0] for p in ps})
    far = (lambda ps: {p[0] for p in ps}) if at_head else (lambda ps: {p[-1] for p in ps})
    part2 = [tuple(p) for p in before.part2]
    kept = sum(1 for p in part2 if p in new)
    return {
        "cover": is_path_cover(D, new, {v for p in old for v in p}),
        "i": not (near(new) & I),
        "ii": near(new) & J == near(old) & J,
        "iii": far(new) & (I | J) == far(old) & (I | J),
        "iv": set(F) <= {e for p in new for e in path_edges(p)},
        "v": len(new) <= len(old) + len(before.part1),
        "vi": kept == len(part2) if strengthened else kept >= len(part2) - len(before.part1),
    }
