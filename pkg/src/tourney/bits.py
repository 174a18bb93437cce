"""Python-int bitsets over vertex indices.

Dense tournaments make neighbourhood intersections the hot loop in almost
every algorithm here; arbitrary-precision ints give word-parallel AND/OR for
free and stay exact.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

import numpy as np


def to_bits(vertices: Iterable[int]) -> int:
    x = 0
    for v in vertices:
        x |= 1 << int(v)
    return x


def iter_bits(x: int) -> Iterator[int]:
    """Yield set positions in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def lowest(x: int) -> int:
    """Index of the lowest set bit; -1 for the empty set."""
    return (x & -x).bit_length() - 1


def popcount(x: int) -> int:
    return x.bit_count()


def full(n: int) -> int:
    return (1 << n) - 1


def rows_to_bits(matrix: np.ndarray) -> list[int]:
    """Convert each boolean row of ``matrix`` to an int bitset."""
    if matrix.shape[0] == 0:
        return []
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
