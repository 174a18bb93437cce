"""Regular spanning subdigraphs and the nearly extremal tournament family.

An r-regular spanning subdigraph is a choice of edges giving every vertex
exactly r out- and r in-edges. Splitting each vertex into an out-copy and an
in-copy turns this into a bipartite degree-constrained subgraph, which is a
unit-capacity flow problem: feasible iff the maximum flow saturates r*n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .bits import iter_bits
from .connectivity import connectivity
from .generators import extremal_blocks, gen_extremal
from .graph import Digraph


@dataclass
class FlowCut:
    """Source side of a minimum cut in the split network, with its capacity."""

    out_side: list[int]  # vertices whose out-copy is on the source side
    in_side: list[int]  # vertices whose in-copy is on the source side
    capacity: int


@dataclass
class RegularSubdigraphReport:
    max_r: int
    witness: list[tuple[int, int]]
    cut: FlowCut | None = None  # certifies that max_r + 1 is infeasible
    checked: list[int] = field(default_factory=list)


def _network(D: Digraph, r: int):
    n = D.n
    src, dst = 2 * n, 2 * n + 1
    us, vs = np.nonzero(D.adj)
    rows = np.concatenate([np.full(n, src), us, n + np.arange(n)])
    cols = np.concatenate([np.arange(n), n + vs, np.full(n, dst)])
    caps = np.concatenate([np.full(n, r), np.ones(len(us)), np.full(n, r)]).astype(np.int32)
    return csr_matrix((caps, (rows, cols)), shape=(2 * n + 2, 2 * n + 2)), us, vs, src, dst


def regular_feasible(D: Digraph, r: int) -> tuple[bool, list[tuple[int, int]], FlowCut | None]:
    """Decide whether D has a spanning r-regular subdigraph; return a witness or a cut."""
    n = D.n
    if r == 0:
        return True, [], None
    cap, us, vs, src, dst = _network(D, r)
    res = maximum_flow(cap, src, dst, method="dinic")
    flow = res.flow.toarray()
    if res.flow_value == r * n:
        used = [(int(u), int(v)) for u, v in zip(us, vs) if flow[u, n + v] > 0]
        return True, used, None
    residual = cap.toarray() - flow
    seen = np.zeros(2 * n + 2, dtype=bool)
    seen[src] = True
    stack = [src]
    while stack:
        x = stack.pop()
        for y in np.nonzero(residual[x] > 0)[0]:
            if not seen[y]:
                seen[y] = True
                stack.append(int(y))
    dense = cap.toarray()
    capacity = int(dense[np.ix_(seen, ~seen)].sum())
    cut = FlowCut(
        out_side=[v for v in range(n) if seen[v]],
        in_side=[v for v in range(n) if seen[n + v]],
        capacity=capacity,
    )
    return False, [], cut


def max_regular_degree(D: Digraph) -> RegularSubdigraphReport:
    """Largest r with a spanning r-regular subdigraph, by bisection on r.

    Feasibility is monotone: an r-regular bipartite split graph is a union of
    r perfect matchings, so dropping one gives an (r-1)-regular subdigraph.
    """
    if D.n == 0:
        return RegularSubdigraphReport(0, [])
    # lo is feasible, hi is not; r = min semi-degree + 1 is infeasible by counting
    lo, hi = 0, int(min(D.in_degrees.min(), D.out_degrees.min())) + 1
    witness: list[tuple[int, int]] = []
    cut = None
    checked: list[int] = []
    while hi - lo > 1:
        mid = (lo + hi) // 2
        checked.append(mid)
        ok, used, c = regular_feasible(D, mid)
        if ok:
            lo, witness = mid, used
        else:
            hi, cut = mid, c  # cut always certifies the current hi
    if cut is None:  # hi was never probed
        checked.append(hi)
        _, _, cut = regular_feasible(D, hi)
    return RegularSubdigraphReport(lo, witness, cut, checked)


def check_regular_witness(D: Digraph, edges, r: int) -> bool:
    outd = np.zeros(D.n, dtype=int)
    ind = np.zeros(D.n, dtype=int)
    if len(set(edges)) != len(edges):
        return False
    for u, v in edges:
        if not D.adj[u, v]:
            return False
        outd[u] += 1
        ind[v] += 1
    return bool((outd == r).all() and (ind == r).all())


def cut_certifies(D: Digraph, cut: FlowCut, r: int) -> bool:
    """Recompute the cut capacity from D alone; below r*n means no r-regular subdigraph."""
    n = D.n
    so, si = set(cut.out_side), set(cut.in_side)
    cap = r * sum(1 for v in range(n) if v not in so)
    cap += sum(1 for u in so for v in range(n) if D.adj[u, v] and v not in si)
    cap += r * len(si)
    return cap == cut.capacity and cap < r * n


# --- Hamilton cycle packings (tiny instances) ---------------------------------------


def hamilton_cycles(D: Digraph) -> list[int]:
    """All Hamilton cycles through vertex 0, each as a bitmask of edge ids u*n+v."""
    n = D.n
    if n > 12:
        raise ValueError("Hamilton cycle enumeration is guarded to n <= 12")
    if n < 2:
        return []
    out = D.out_bits
    found: list[int] = []

    def walk(v: int, visited: int, mask: int, depth: int):
        if depth == n:
            if D.adj[v, 0]:
                found.append(mask | 1 << (v * n))
            return
        for w in iter_bits(out[v] & ~visited):
            walk(w, visited | 1 << w, mask | 1 << (v * n + w), depth + 1)

    walk(0, 1, 0, 1)
    return found


def max_hamilton_packing(D: Digraph) -> int:
    """Largest number of pairwise edge-disjoint Hamilton cycles (n <= 12)."""
    cycles = hamilton_cycles(D)
    best = 0
    memo: dict[tuple[int, int], int] = {}

    def grow(start: int, used: int) -> int:
        key = (start, used)
        if key in memo:
            return memo[key]
        top = 0
        for j in range(start, len(cycles)):
            if not cycles[j] & used:
                top = max(top, 1 + grow(j + 1, used | cycles[j]))
        memo[key] = top
        return top

    if cycles:
        best = grow(0, 0)
    return best


# --- the extremal family ------------------------------------------------------------


def edges_into_block(D: Digraph, block) -> int:
    inside = np.zeros(D.n, dtype=bool)
    inside[list(block)] = True
    return int(D.adj[np.ix_(~inside, inside)].sum())


def verify_extremal_claims(m: int, ell: int, ham_limit: int = 12) -> dict:
    """Connectivity lower bound, regular-subdigraph ceiling and the packing bound."""
    if m < 1 or ell < 1:
        raise ValueError("m and ell must be >= 1")
    n = m + 4 * ell + 2
    if n > 64:
        raise ValueError("verify_extremal_claims is guarded to n <= 64")
    T = gen_extremal(m, ell)
    kappa = connectivity(T).kappa
    rep = max_regular_degree(T)
    bound = math.sqrt(4 * ell)
    applicable = m > bound
    A, _, _ = extremal_blocks(m, ell)
    into_A = edges_into_block(T, A)
    r = rep.max_r
    out = {
        "m": m,
        "ell": ell,
        "n": n,
        "kappa": kappa,
        "kappa_lower_ok": kappa >= ell,
        "max_r": r,
        "claim2_bound": bound,
        "claim2_applicable": applicable,
        "claim2_ok": (r <= bound) if applicable else None,
        "edges_into_A": into_A,
        "edges_into_A_ok": into_A == 2 * ell + 1,
        "binomial_ok": math.comb(r + 1, 2) <= 2 * ell + 1,
        "cut_certifies": rep.cut is not None and cut_certifies(T, rep.cut, r + 1),
        "ham_packing": None,
        "ham_upper_ok": None,
    }
    if n <= ham_limit:
        h = max_hamilton_packing(T)
        out["ham_packing"] = h
        out["ham_upper_ok"] = h <= r
    return out
