"""Strong connectivity, Menger paths, and exact vertex connectivity.

Max-flow runs on the usual split graph: each vertex v becomes v_in -> v_out
with capacity 1, every edge u -> v becomes u_out -> v_in with unbounded
capacity, and a super source/sink attach to A and B with unbounded capacity.
A minimum cut therefore consists of vertex arcs only, which is exactly a
separating vertex set. Residual search uses int bitsets over the host
adjacency, so no split graph is ever materialised.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

from .bits import full, iter_bits, lowest, to_bits
from .graph import Digraph, Path


# --- reachability -----------------------------------------------------------


def reach(rows: list[int], start: int, alive: int) -> int:
    """Bitset of vertices reachable from ``start`` inside ``alive``."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= rows[v]
        nxt &= alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def is_strongly_connected(D: Digraph, alive: int | None = None) -> bool:
    """True iff D (restricted to ``alive``) is strongly connected; <= 1 vertex counts."""
    if alive is None:
        alive = full(D.n)
    if alive & (alive - 1) == 0:
        return True
    v = lowest(alive)
    return reach(D.out_bits, v, alive) == alive and reach(D.in_bits, v, alive) == alive


def strong_components(D: Digraph, alive: int | None = None) -> list[list[int]]:
    """Strong components as sorted vertex lists, ordered by lowest vertex."""
    if alive is None:
        alive = full(D.n)
    comps = []
    rest = alive
    while rest:
        v = lowest(rest)
        comp = reach(D.out_bits, v, rest) & reach(D.in_bits, v, rest)
        comps.append(list(iter_bits(comp)))
        rest &= ~comp
    return comps


# --- Menger ------------------------------------------------------------------


@dataclass
class MengerResult:
    """Either ``paths`` (success) or ``cut`` (a separator smaller than requested)."""

    paths: list[Path] | None
    cut: set[int] | None
    flow: int

    @property
    def ok(self) -> bool:
        return self.paths is not None


class _SplitFlow:
    """Unit vertex-capacity flow from A to B over a bitset digraph."""

    def __init__(self, D: Digraph, A: int, B: int, alive: int):
        self.out_rows = D.out_bits
        self.A = A & alive
        self.B = B & alive
        self.alive = alive
        self.succ: dict[int, int] = {}
        self.pred: dict[int, int] = {}
        self.starts: set[int] = set()
        self.ends: set[int] = set()
        self.used = 0
        self.value = 0
        self.reached_in = 0
        self.reached_out = 0

    def augment(self) -> bool:
        par_in: dict[int, tuple[str, int]] = {}
        par_out: dict[int, tuple[str, int]] = {}
        free_in = self.alive & ~self.A
        free_out = self.alive
        queue: deque[tuple[bool, int]] = deque()
        for a in iter_bits(self.A):
            par_in[a] = ("s", -1)
            queue.append((True, a))
        found = -1
        used, succ, pred, B, rows = self.used, self.succ, self.pred, self.B, self.out_rows
        while queue:
            is_in, v = queue.popleft()
            bit = 1 << v
            if is_in:
                if not used & bit:
                    if free_out & bit:
                        free_out &= ~bit
                        par_out[v] = ("in", v)
                        queue.append((False, v))
                else:
                    u = pred.get(v, -1)
                    if u >= 0 and free_out >> u & 1:
                        free_out &= ~(1 << u)
                        par_out[u] = ("back", v)
                        queue.append((False, u))
            else:
                if B & bit and v not in self.ends:
                    found = v
                    break
                if used & bit and free_in & bit:
                    free_in &= ~bit
                    par_in[v] = ("out", v)
                    queue.append((True, v))
                new = rows[v] & free_in
                if new:
                    free_in &= ~new
                    for w in iter_bits(new):
                        par_in[w] = ("edge", v)
                        queue.append((True, w))
        if found < 0:
            self.reached_in = to_bits(par_in)
            self.reached_out = to_bits(par_out)
            return False
        self.ends.add(found)
        is_in, v = False, found
        while True:
            if is_in:
                kind, u = par_in[v]
                if kind == "s":
                    self.starts.add(v)
                    break
                if kind == "edge":
                    self.succ[u] = v
                    self.pred[v] = u
                    is_in, v = False, u
                else:  # backward vertex arc: v leaves the flow
                    self.used &= ~(1 << v)
                    is_in, v = False, v
            else:
                kind, w = par_out[v]
                if kind == "in":
                    self.used |= 1 << v
                    is_in, v = True, v
                else:  # backward edge v -> w cancelled; v may already have a new successor
                    if self.succ.get(v) == w:
                        del self.succ[v]
                    if self.pred.get(w) == v:
                        del self.pred[w]
                    is_in, v = True, w
        self.value += 1
        return True

    def paths(self) -> list[Path]:
        out = []
        for a in sorted(self.starts):
            p = [a]
            while p[-1] not in self.ends:
                p.append(self.succ[p[-1]])
            out.append(p)
        # trim each path to its last A-vertex and the first B-vertex after it
        trimmed = []
        for p in out:
            i = max(j for j, v in enumerate(p) if self.A >> v & 1)
            j = next(j for j in range(i, len(p)) if self.B >> p[j] & 1)
            trimmed.append(tuple(p[i : j + 1]))
        return trimmed

    def cut(self) -> set[int]:
        return set(iter_bits(self.reached_in & ~self.reached_out))


def max_disjoint_paths(
    D: Digraph, A: int, B: int, alive: int | None = None, limit: int | None = None
) -> _SplitFlow:
    """Run augmentations until ``limit`` paths exist or no augmenting path remains."""
    if alive is None:
        alive = full(D.n)
    flow = _SplitFlow(D, A, B, alive)
    while limit is None or flow.value < limit:
        if not flow.augment():
            break
    return flow


def menger_paths(
    D: Digraph, A: Iterable[int], B: Iterable[int], k: int, exclude: Iterable[int] = ()
) -> MengerResult:
    """k vertex-disjoint A->B paths in D - exclude, or a separator of size < k."""
    A, B = set(A), set(B)
    if len(A) < k or len(B) < k:
        raise ValueError(f"need |A|, |B| >= k={k}, got {len(A)}, {len(B)}")
    alive = full(D.n) & ~to_bits(exclude)
    flow = max_disjoint_paths(D, to_bits(A), to_bits(B), alive, limit=k)
    if flow.value >= k:
        return MengerResult(flow.paths(), None, flow.value)
    return MengerResult(None, flow.cut(), flow.value)


def separates(D: Digraph, A: Iterable[int], B: Iterable[int], cut: Iterable[int]) -> bool:
    """True iff no path from A to B avoids ``cut``."""
    alive = full(D.n) & ~to_bits(cut)
    targets = to_bits(B) & alive
    for a in A:
        if alive >> a & 1 and reach(D.out_bits, a, alive) & targets:
            return False
    return True


# --- vertex connectivity ------------------------------------------------------


@dataclass
class VertexCutReport:
    kappa: int
    witness_cut: set[int] | None


def local_connectivity(D: Digraph, u: int, v: int, limit: int | None = None) -> tuple[int, set[int]]:
    """Max number of internally disjoint u->v paths (u -> v must be absent) and a min separator."""
    if D.adj[u, v]:
        raise ValueError("local connectivity is only defined for non-adjacent ordered pairs")
    alive = full(D.n) & ~(1 << u) & ~(1 << v)
    flow = max_disjoint_paths(D, D.out_bits[u], D.in_bits[v], alive, limit)
    if limit is not None and flow.value >= limit:
        return flow.value, set()
    return flow.value, flow.cut()


def _min_separator(D: Digraph, upper: int) -> tuple[int, set[int] | None]:
    """min(upper, smallest separator), with a witness when below ``upper``.

    Even's sweep: a minimum separator misses one of the first (size + 1)
    vertices, and that vertex is cut off from, or from, some later vertex.
    """
    best, cut = upper, None
    n = D.n
    i = 0
    while i < n and i <= best:
        for j in range(i + 1, n):
            for u, v in ((i, j), (j, i)):
                if D.adj[u, v] or best == 0:
                    continue
                f, sep = local_connectivity(D, u, v, limit=best)
                if f < best:
                    best, cut = f, sep
        i += 1
    return best, cut


def connectivity(D: Digraph) -> VertexCutReport:
    """Exact strong connectivity number with a minimum witness cut."""
    n = D.n
    if n == 0:
        return VertexCutReport(0, None)
    if not is_strongly_connected(D):
        return VertexCutReport(0, set())
    kappa, cut = _min_separator(D, n - 1)
    return VertexCutReport(kappa, cut)


def is_strongly_k_connected(D: Digraph, k: int) -> bool:
    if k <= 0:
        return True
    if D.n <= k or not is_strongly_connected(D):
        return False
    if k == 1:
        return True
    value, _ = _min_separator(D, k)
    return value >= k


def brute_force_connectivity(D: Digraph) -> int:
    """Oracle: smallest |S| leaving a non-strongly-connected digraph (n - 1 if none)."""
    n = D.n
    if n > 14:
        raise ValueError("brute force connectivity is guarded to n <= 14")
    everything = full(n)
    for size in range(0, max(n - 1, 0)):
        for S in combinations(range(n), size):
            if not is_strongly_connected(D, everything & ~to_bits(S)):
                return size
    return max(n - 1, 0)
