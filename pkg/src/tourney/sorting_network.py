"""Comparator networks: Batcher's odd-even mergesort, the zero-one oracle, and
permutation tracing.

Registers and values are 1-based, matching the usual (s;t) notation. A
permutation ``pi`` is a tuple with ``pi[i-1]`` = the register holding value
``i``. A comparator (s;t) swaps the contents of registers s and t when the
value in s is larger.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True, order=True)
class Comparator:
    s: int
    t: int

    def __post_init__(self):
        if not (1 <= self.s < self.t):
            raise ValueError(f"comparator needs 1 <= s < t, got ({self.s};{self.t})")


@dataclass(frozen=True)
class ComparatorNetwork:
    k: int
    comparators: tuple[Comparator, ...]

    def __post_init__(self):
        for c in self.comparators:
            if c.t > self.k:
                raise ValueError(f"comparator ({c.s};{c.t}) out of range for k={self.k}")

    def __len__(self) -> int:
        return len(self.comparators)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "comparators": [[c.s, c.t] for c in self.comparators]})

    @classmethod
    def from_json(cls, text: str) -> "ComparatorNetwork":
        data = json.loads(text)
        return cls(data["k"], tuple(Comparator(s, t) for s, t in data["comparators"]))


def _oddeven_merge(lo: int, n: int, r: int, out: list[tuple[int, int]]) -> None:
    step = r * 2
    if step < n:
        _oddeven_merge(lo, n, step, out)
        _oddeven_merge(lo + r, n, step, out)
        for i in range(lo + r, lo + n - r, step):
            out.append((i, i + r))
    else:
        out.append((lo, lo + r))


def _oddeven_sort(lo: int, n: int, out: list[tuple[int, int]]) -> None:
    if n > 1:
        m = n // 2
        _oddeven_sort(lo, m, out)
        _oddeven_sort(lo + m, m, out)
        _oddeven_merge(lo, n, 1, out)


def batcher(k: int) -> ComparatorNetwork:
    """Odd-even mergesort on k registers.

    For k not a power of two the network for the next power of two is built
    and every comparator touching a padding register is dropped; padding
    registers behave as +inf and never move.
    """
    if k < 2:
        raise ValueError("batcher needs k >= 2")
    size = 1 << (k - 1).bit_length()
    pairs: list[tuple[int, int]] = []
    _oddeven_sort(0, size, pairs)
    comps = tuple(Comparator(a + 1, b + 1) for a, b in pairs if b < k)
    return ComparatorNetwork(k, comps)


def batcher_bound(k: int) -> float:
    """The quoted bound 2 k log^2 k on Batcher's comparator count (log base 2)."""
    return 2 * k * math.log2(k) ** 2


def verify_zero_one(net: ComparatorNetwork) -> bool:
    """Zero-one principle: the network sorts iff it sorts every 0/1 input."""
    if net.k > 24:
        raise ValueError("zero-one verification is guarded to k <= 24")
    k = net.k
    pairs = [(c.s - 1, c.t - 1) for c in net.comparators]
    for bits in product((0, 1), repeat=k):
        regs = list(bits)
        for a, b in pairs:
            if regs[a] > regs[b]:
                regs[a], regs[b] = regs[b], regs[a]
        if any(regs[i] > regs[i + 1] for i in range(k - 1)):
            return False
    return True


@dataclass(frozen=True)
class PermutationTrace:
    perms: tuple[tuple[int, ...], ...]  # pi_0 .. pi_r
    swaps: tuple[bool, ...]  # swaps[q-1] is True iff comparator q exchanged its values


def check_permutation(pi, k: int) -> tuple[int, ...]:
    pi = tuple(int(x) for x in pi)
    if sorted(pi) != list(range(1, k + 1)):
        raise ValueError(f"not a permutation of 1..{k}: {pi}")
    return pi


def trace_permutation(net: ComparatorNetwork, pi) -> PermutationTrace:
    k = net.k
    pi = check_permutation(pi, k)
    value_at = [0] * (k + 1)  # register -> value
    for value, reg in enumerate(pi, start=1):
        value_at[reg] = value
    perms = [pi]
    swaps = []
    cur = list(pi)
    for c in net.comparators:
        a, b = value_at[c.s], value_at[c.t]
        swap = a > b
        if swap:
            value_at[c.s], value_at[c.t] = b, a
            cur[a - 1], cur[b - 1] = c.t, c.s
        swaps.append(swap)
        perms.append(tuple(cur))
    return PermutationTrace(tuple(perms), tuple(swaps))
