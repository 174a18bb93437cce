"""Covering edges and small transitive almost-dominating sets.

A transitive set A out-dominates W when every vertex of W has an
in-neighbour in A. The constructions keep the vertices that are *not*
dominated in an explicit exceptional set E, whose size halves with every
vertex added to A.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .bits import full, iter_bits, popcount, to_bits
from .connectivity import is_strongly_connected
from .graph import Digraph


class DominationError(ValueError):
    def __init__(self, detail: str, vertex: int | None = None):
        super().__init__(detail)
        self.detail = detail
        self.vertex = vertex


# --- covering edges -------------------------------------------------------------


@dataclass(frozen=True)
class CoveringEdge:
    """Edge x -> y with x -> v and v -> y, so v can be spliced between x and y."""

    v: int
    x: int
    y: int

    @property
    def edge(self) -> tuple[int, int]:
        return (self.x, self.y)

    @property
    def activating(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.x, self.v), (self.v, self.y)


def check_covering_edge(T: Digraph, e: CoveringEdge) -> bool:
    return len({e.v, e.x, e.y}) == 3 and bool(T.adj[e.x, e.v] and T.adj[e.v, e.y] and T.adj[e.x, e.y])


def covering_edge(T: Digraph, v: int, alive: int | None = None, check: bool = True) -> CoveringEdge:
    """Lexicographically first covering edge for v inside T[alive]."""
    if alive is None:
        alive = full(T.n)
    alive |= 1 << v
    nin = T.in_bits[v] & alive
    nout = T.out_bits[v] & alive
    if check:
        if not nin or not nout:
            raise DominationError(f"vertex {v} has an empty in- or out-neighbourhood", v)
        if not is_strongly_connected(T, alive & ~(1 << v)):
            raise DominationError(f"removing {v} destroys strong connectivity", v)
    out = T.out_bits
    for x in iter_bits(nin):
        ys = out[x] & nout
        if ys:
            y = (ys & -ys).bit_length() - 1
            return CoveringEdge(v, x, y)
    raise DominationError(f"no edge from N-({v}) to N+({v})", v)


# --- single transitive dominating set --------------------------------------------


@dataclass(frozen=True)
class TransitiveDomination:
    """``vertices`` in transitive order (tail first, head last)."""

    vertices: tuple[int, ...]
    exceptional: frozenset[int]
    trace: tuple[int, ...]  # |E_1|, |E_2|, ...
    root: int
    direction: str  # "out": root is the head; "in": root is the tail

    def __iter__(self):
        return iter((set(self.vertices), set(self.exceptional)))


def _dom_transitive(T: Digraph, v: int, c: int, alive: int | None, direction: str, debug: bool):
    if alive is None:
        alive = full(T.n)
    alive |= 1 << v
    # "out": grow through common in-neighbourhoods; "in": through out-neighbourhoods
    toward = T.in_bits if direction == "out" else T.out_bits
    d = popcount(toward[v] & alive)
    if c < 2:
        raise DominationError("c must be at least 2", v)
    if d < 1 or c > math.log2(d) - 1:
        raise DominationError(f"need c <= log2(d) - 1, got c={c}, d={d}", v)
    chosen = [v]
    E = toward[v] & alive
    trace = [popcount(E)]
    while len(chosen) < c and popcount(E) >= 4:
        # vertex of E with fewest neighbours towards the root side inside E
        best, best_deg = -1, None
        for u in iter_bits(E):
            du = popcount(toward[u] & E)
            if best_deg is None or du < best_deg:
                best, best_deg = u, du
        before = popcount(E)
        chosen.append(best)
        E &= toward[best]
        trace.append(popcount(E))
        if debug:
            assert 2 * trace[-1] <= before, f"halving failed: {before} -> {trace[-1]}"
    if len(chosen) < 2:
        raise DominationError(f"dominating set for {v} would be a singleton", v)
    order = tuple(reversed(chosen)) if direction == "out" else tuple(chosen)
    return TransitiveDomination(order, frozenset(iter_bits(E)), tuple(trace), v, direction)


def out_dom_transitive(
    T: Digraph, v: int, c: int, alive: int | None = None, debug: bool = False
) -> TransitiveDomination:
    """Transitive A with head v, |A| <= c, out-dominating all but the set E."""
    return _dom_transitive(T, v, c, alive, "out", debug)


def in_dom_transitive(
    T: Digraph, v: int, c: int, alive: int | None = None, debug: bool = False
) -> TransitiveDomination:
    """Transitive B with tail v, |B| <= c, in-dominating all but the set E."""
    return _dom_transitive(T, v, c, alive, "in", debug)


def check_transitive_domination(T: Digraph, dom: TransitiveDomination, c: int, alive: int | None = None) -> dict[str, bool]:
    """Literal check of transitivity, root position, size, domination and the |E| bound."""
    if alive is None:
        alive = full(T.n)
    alive |= 1 << dom.root
    A = dom.vertices
    trans = all(T.adj[A[i], A[j]] for i in range(len(A)) for j in range(i + 1, len(A)))
    root_ok = (A[-1] if dom.direction == "out" else A[0]) == dom.root
    toward = T.in_bits if dom.direction == "out" else T.out_bits
    away = T.out_bits if dom.direction == "out" else T.in_bits
    covered = 0
    for a in A:
        covered |= away[a]
    rest = alive & ~to_bits(A) & ~to_bits(dom.exceptional)
    d = popcount(toward[dom.root] & alive)
    halving = all(2 * dom.trace[i + 1] <= dom.trace[i] for i in range(len(dom.trace) - 1))
    return {
        "transitive": trans and root_ok,
        "size": 2 <= len(A) <= c,
        "dominates": rest & ~covered == 0,
        "bound": len(dom.exceptional) <= d / 2 ** (c - 1),
        "halving": halving,
        "disjoint": not set(A) & dom.exceptional,
    }


# --- families ---------------------------------------------------------------------


@dataclass
class DomFamily:
    sets: dict[int, tuple[int, ...]]
    exceptionals: dict[int, frozenset[int]]
    direction: str
    c: int


def _family(T: Digraph, U: Sequence[int], c: int, alive: int | None, direction: str, check: bool) -> DomFamily:
    if alive is None:
        alive = full(T.n)
    U = [int(u) for u in U]
    if len(set(U)) != len(U):
        raise DominationError("U has repeated vertices")
    rows = T.in_bits if direction == "out" else T.out_bits
    if check:
        need = 2 ** (c + 1) + c * len(U)
        for w in iter_bits(alive):
            if popcount(rows[w] & alive) < need:
                kind = "in" if direction == "out" else "out"
                raise DominationError(f"{kind}-degree of {w} below 2^(c+1) + c|U| = {need}", w)
    ubits = to_bits(U)
    used = 0
    sets: dict[int, tuple[int, ...]] = {}
    exc: dict[int, frozenset[int]] = {}
    for v in U:
        here = alive & ~used & ~(ubits & ~(1 << v))
        dom = _dom_transitive(T, v, c, here, direction, False)
        for u in sets:
            exc[u] = exc[u] - set(dom.vertices)
        sets[v] = dom.vertices
        exc[v] = dom.exceptional
        used |= to_bits(dom.vertices)
    return DomFamily(sets, exc, direction, c)


def out_dom_family(T: Digraph, U: Sequence[int], c: int, alive: int | None = None, check: bool = True) -> DomFamily:
    """Disjoint transitive sets A_v (head v), each out-dominating all but E_v and the other sets."""
    return _family(T, U, c, alive, "out", check)


def in_dom_family(T: Digraph, U: Sequence[int], c: int, alive: int | None = None, check: bool = True) -> DomFamily:
    """Disjoint transitive sets B_v (tail v), each in-dominating all but E_v and the other sets."""
    return _family(T, U, c, alive, "in", check)


def check_dom_family(T: Digraph, fam: DomFamily, alive: int | None = None) -> dict[str, bool]:
    """Conditions (i)-(vi): domination, transitivity, |E| bound, sizes, A∩E, disjointness."""
    if alive is None:
        alive = full(T.n)
    out_case = fam.direction == "out"
    toward = T.in_bits if out_case else T.out_bits
    away = T.out_bits if out_case else T.in_bits
    union = set().union(*map(set, fam.sets.values())) if fam.sets else set()
    ok = dict.fromkeys(["i", "ii", "iii", "iv", "v", "vi"], True)
    for v, A in fam.sets.items():
        covered = 0
        for a in A:
            covered |= away[a]
        rest = alive & ~to_bits(union) & ~to_bits(fam.exceptionals[v])
        if rest & ~covered:
            ok["i"] = False
        trans = all(T.adj[A[i], A[j]] for i in range(len(A)) for j in range(i + 1, len(A)))
        if not trans or (A[-1] if out_case else A[0]) != v:
            ok["ii"] = False
        if len(fam.exceptionals[v]) > popcount(toward[v] & alive) / 2 ** (fam.c - 1):
            ok["iii"] = False
        if not 2 <= len(A) <= fam.c:
            ok["iv"] = False
        if union & fam.exceptionals[v]:
            ok["v"] = False
    if sum(len(A) for A in fam.sets.values()) != len(union):
        ok["vi"] = False
    return ok
