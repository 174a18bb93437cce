"""Hamilton paths and cycles in tournaments, plus independent validators."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .bits import full, iter_bits
from .connectivity import strong_components
from .graph import Cycle, Digraph, Path, cycle_edges


class NotStronglyConnected(ValueError):
    """Raised with the strong components when a Hamilton cycle cannot exist."""

    def __init__(self, components: list[list[int]]):
        super().__init__(f"tournament is not strongly connected ({len(components)} components)")
        self.components = components


def hamilton_path(T: Digraph) -> Path:
    """Hamilton path of a tournament by binary-search insertion."""
    if not T.is_tournament:
        raise ValueError("hamilton_path needs a tournament")
    adj = T.adj
    path: list[int] = []
    for v in range(T.n):
        if not path or adj[v, path[0]]:
            path.insert(0, v)
        elif adj[path[-1], v]:
            path.append(v)
        else:
            # invariant: path[lo] -> v and v -> path[hi]
            lo, hi = 0, len(path) - 1
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if adj[path[mid], v]:
                    lo = mid
                else:
                    hi = mid
            path.insert(hi, v)
    return tuple(path)


def hamilton_cycle_camion(T: Digraph) -> Cycle:
    """Hamilton cycle of a strongly connected tournament (n >= 3).

    Grows a cycle: an outside vertex with both an in- and an out-neighbour on
    the cycle is inserted between a consecutive pair; otherwise an edge w -> u
    from the vertices dominated by the cycle to those dominating it lets both
    be inserted at once.
    """
    if not T.is_tournament:
        raise ValueError("hamilton_cycle_camion needs a tournament")
    comps = strong_components(T)
    if len(comps) != 1:
        raise NotStronglyConnected(comps)
    n = T.n
    if n < 3:
        raise ValueError("a Hamilton cycle needs at least 3 vertices")
    adj, outb, inb = T.adj, T.out_bits, T.in_bits
    # a 3-cycle through vertex 0: some out-neighbour beats some in-neighbour
    v0 = 0
    cyc: list[int] | None = None
    for a in iter_bits(outb[v0]):
        back = outb[a] & inb[v0]
        if back:
            cyc = [v0, a, next(iter_bits(back))]
            break
    assert cyc is not None
    on = sum(1 << v for v in cyc)
    while len(cyc) < n:
        outside = full(n) & ~on
        progressed = False
        for v in iter_bits(outside):
            if outb[v] & on and inb[v] & on:
                m = len(cyc)
                for i in range(m):
                    if adj[cyc[i], v] and adj[v, cyc[(i + 1) % m]]:
                        cyc.insert(i + 1, v)
                        break
                on |= 1 << v
                progressed = True
                break
        if progressed:
            continue
        # every outside vertex dominates the cycle (U) or is dominated by it (W)
        U = 0
        for v in iter_bits(outside):
            if outb[v] & on:
                U |= 1 << v
        W = outside & ~U
        for w in iter_bits(W):
            hits = outb[w] & U
            if hits:
                u = next(iter_bits(hits))
                cyc[1:1] = [w, u]  # cyc[0] -> w -> u -> old cyc[1]
                on |= (1 << w) | (1 << u)
                break
        else:  # pragma: no cover - excluded by strong connectivity
            raise AssertionError("no W -> U edge in a strongly connected tournament")
    return tuple(cyc)


# --- validators ---------------------------------------------------------------


def validate_path(D: Digraph, P: Sequence[int], hamiltonian: bool = False) -> bool:
    if len(P) == 0 or len(set(P)) != len(P):
        return False
    if any(not (0 <= v < D.n) for v in P):
        return False
    if any(not D.adj[P[i], P[i + 1]] for i in range(len(P) - 1)):
        return False
    return not hamiltonian or len(P) == D.n


def validate_cycle(D: Digraph, C: Sequence[int], hamiltonian: bool = True) -> bool:
    if len(C) < 2 or len(set(C)) != len(C):
        return False
    if any(not (0 <= v < D.n) for v in C):
        return False
    if any(not D.adj[u, v] for u, v in cycle_edges(C)):
        return False
    return not hamiltonian or len(C) == D.n


def edge_disjoint(cycles: Iterable[Sequence[int]]) -> bool:
    seen: set[tuple[int, int]] = set()
    for C in cycles:
        es = set(cycle_edges(C))
        if len(es) != len(C) or seen & es:
            return False
        seen |= es
    return True


def brute_force_hamilton(T: Digraph) -> Cycle | None:
    """Oracle: a Hamilton cycle via subset dynamic programming, or None."""
    n = T.n
    if n > 14:
        raise ValueError("brute force Hamiltonicity is guarded to n <= 14")
    if n < 2:
        return None
    outb = T.out_bits
    # ends[mask] = bitset of v such that a path 0 -> ... -> v covers exactly mask
    ends = [0] * (1 << n)
    ends[1] = 1
    for mask in range(1, 1 << n):
        e = ends[mask]
        if not e or not mask & 1:
            continue
        for v in iter_bits(e):
            ext = outb[v] & ~mask
            for w in iter_bits(ext):
                ends[mask | (1 << w)] |= 1 << w
    whole = (1 << n) - 1
    closing = [v for v in iter_bits(ends[whole]) if T.adj[v, 0] and v != 0]
    if not closing:
        return None
    # walk backwards through the table
    path = [closing[0]]
    mask = whole
    while len(path) < n:
        v = path[-1]
        mask &= ~(1 << v)
        prev = next(u for u in iter_bits(ends[mask]) if T.adj[u, v])
        path.append(prev)
    path.reverse()
    return tuple(path)
