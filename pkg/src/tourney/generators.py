"""Deterministic tournament families.

Randomness comes only from raw 64-bit output of numpy's PCG64 bit generator
seeded through ``SeedSequence``. Raw PCG64 output is specified bit-for-bit,
so a seed names the same tournament on every platform. Higher-level
``Generator`` methods are avoided on purpose, since their streams may change
between numpy releases.
"""

from __future__ import annotations

import numpy as np

from .graph import Digraph


class RawStream:
    """Sequential access to raw PCG64 words derived from one integer seed."""

    def __init__(self, seed: int, *spawn_key: int):
        ss = np.random.SeedSequence(seed, spawn_key=tuple(spawn_key))
        self._bitgen = np.random.PCG64(ss)

    def words(self, count: int) -> np.ndarray:
        return np.asarray(self._bitgen.random_raw(count), dtype="<u8")

    def bits(self, count: int) -> np.ndarray:
        words = self.words((count + 63) // 64)
        return np.unpackbits(words.view(np.uint8), bitorder="little")[:count].astype(bool)

    def below(self, bound: int) -> int:
        """Integer in [0, bound); modulo bias is below 2**-40 for bound < 2**24."""
        return int(self.words(1)[0] % np.uint64(bound))

    def permutation(self, n: int) -> list[int]:
        items = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def gen_random(n: int, seed: int) -> Digraph:
    """Uniform random tournament: pair (i, j), i < j, in row-major order takes one bit."""
    if n < 1:
        raise ValueError("n must be >= 1")
    iu, ju = np.triu_indices(n, k=1)
    forward = RawStream(seed).bits(iu.size)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[forward], ju[forward]] = True
    adj[ju[~forward], iu[~forward]] = True
    return Digraph(adj)


def gen_transitive(n: int) -> Digraph:
    """Transitive tournament with i -> j iff i < j (vertex 0 is the tail)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Digraph(np.triu(np.ones((n, n), dtype=bool), k=1))


def gen_rotational(ell: int) -> Digraph:
    """Regular tournament on 2*ell+1 vertices: v_i -> v_{i+t} for t = 1..ell."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    n = 2 * ell + 1
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for t in range(1, ell + 1):
            adj[i, (i + t) % n] = True
    return Digraph(adj)


def extremal_blocks(m: int, ell: int) -> tuple[range, range, range]:
    """Index ranges of the A, B and C blocks of :func:`gen_extremal`."""
    a = 2 * ell + 1
    return range(0, a), range(a, 2 * a), range(2 * a, 2 * a + m)


def gen_extremal(m: int, ell: int) -> Digraph:
    """Highly connected tournament with few edge-disjoint Hamilton cycles.

    Blocks A and B are rotational tournaments on 2*ell+1 vertices, C is a
    transitive tournament on m vertices. All edges go A -> C and C -> B;
    between A and B, b_j -> a_i iff i == j and a_i -> b_j otherwise.
    """
    if m < 1 or ell < 1:
        raise ValueError("m and ell must be >= 1")
    A, B, C = extremal_blocks(m, ell)
    n = m + 4 * ell + 2
    rot = gen_rotational(ell).adj
    adj = np.zeros((n, n), dtype=bool)
    adj[np.ix_(A, A)] = rot
    adj[np.ix_(B, B)] = rot
    adj[np.ix_(C, C)] = gen_transitive(m).adj
    adj[np.ix_(A, C)] = True
    adj[np.ix_(C, B)] = True
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            if i == j:
                adj[b, a] = True
            else:
                adj[a, b] = True
    return Digraph(adj)


def gen_planted(n: int, cycles: int, seed: int) -> tuple[Digraph, list[tuple[int, ...]]]:
    """Random tournament containing ``cycles`` planted edge-disjoint Hamilton cycles.

    Each cycle is a random cyclic order whose underlying pairs avoid those of
    earlier cycles; the remaining pairs are oriented by fair bits. Returns the
    tournament and the planted cycles.
    """
    if cycles and n < 2 * cycles + 1:
        raise ValueError("not enough vertices for that many edge-disjoint Hamilton cycles")
    stream = RawStream(seed)
    used: set[frozenset[int]] = set()
    planted: list[tuple[int, ...]] = []
    adj = np.zeros((n, n), dtype=bool)
    attempts = 0
    while len(planted) < cycles:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError("could not plant edge-disjoint cycles")
        order = stream.permutation(n)
        pairs = [frozenset((order[i], order[(i + 1) % n])) for i in range(n)]
        if used.intersection(pairs):
            continue
        used.update(pairs)
        planted.append(tuple(order))
        for i in range(n):
            adj[order[i], order[(i + 1) % n]] = True
    iu, ju = np.triu_indices(n, k=1)
    free = np.array([frozenset((int(a), int(b))) not in used for a, b in zip(iu, ju)], dtype=bool)
    iu, ju = iu[free], ju[free]
    forward = stream.bits(iu.size)
    adj[iu[forward], ju[forward]] = True
    adj[ju[~forward], iu[~forward]] = True
    return Digraph(adj), planted
