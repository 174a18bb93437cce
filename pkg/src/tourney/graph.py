"""Digraph representation, degree bookkeeping, and the tournament text format.

A :class:`Digraph` wraps a read-only dense boolean adjacency matrix: entry
``(i, j)`` is true iff the edge ``i -> j`` is present. Vertices are the
indices ``0..n-1``. Paths are plain tuples of vertices (tail first, head
last) and cycles are tuples read cyclically.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bits import rows_to_bits

Path = tuple[int, ...]
Cycle = tuple[int, ...]
Edge = tuple[int, int]


class GraphError(ValueError):
    """Malformed adjacency input."""


class TournamentFormatError(ValueError):
    """Malformed tournament text file; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class Digraph:
    """Immutable simple digraph on vertices ``0..n-1``."""

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] and adj.diagonal().any():
            v = int(np.flatnonzero(adj.diagonal())[0])
            raise GraphError(f"loop at vertex {v}")
        adj.setflags(write=False)
        self.adj = adj

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self.adj).tobytes()))

    def __repr__(self) -> str:
        kind = "tournament" if self.is_tournament else "oriented" if self.is_oriented else "digraph"
        return f"Digraph(n={self.n}, {kind}, edges={self.num_edges})"

    @cached_property
    def is_oriented(self) -> bool:
        return not (self.adj & self.adj.T).any()

    @cached_property
    def is_tournament(self) -> bool:
        if not self.is_oriented:
            return False
        both = self.adj | self.adj.T
        return bool(both.sum() == self.n * (self.n - 1))

    @cached_property
    def num_edges(self) -> int:
        return int(self.adj.sum())

    @cached_property
    def out_degrees(self) -> np.ndarray:
        d = self.adj.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def in_degrees(self) -> np.ndarray:
        d = self.adj.sum(axis=0).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def out_bits(self) -> list[int]:
        return rows_to_bits(self.adj)

    @cached_property
    def in_bits(self) -> list[int]:
        return rows_to_bits(np.ascontiguousarray(self.adj.T))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def out_neighbours(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def in_neighbours(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[:, v])

    def edges(self) -> list[Edge]:
        us, vs = np.nonzero(self.adj)
        return list(zip(us.tolist(), vs.tolist()))

    def reverse(self) -> "Digraph":
        return Digraph(self.adj.T)

    def induced(self, vertices: Iterable[int]) -> tuple["Digraph", np.ndarray]:
        """Induced subdigraph on ``vertices`` (kept in increasing order).

        Returns the relabelled digraph and ``idx`` with ``idx[new] = old``.
        """
        idx = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        if idx.size and (idx[0] < 0 or idx[-1] >= self.n):
            raise GraphError("vertex set is not contained in V(D)")
        return Digraph(self.adj[np.ix_(idx, idx)]), idx

    def remove_vertices(self, vertices: Iterable[int]) -> tuple["Digraph", np.ndarray]:
        drop = set(int(v) for v in vertices)
        if any(v < 0 or v >= self.n for v in drop):
            raise GraphError("vertex set is not contained in V(D)")
        return self.induced(v for v in range(self.n) if v not in drop)

    def remove_edges(self, edges: Iterable[Edge]) -> "Digraph":
        adj = self.adj.copy()
        for u, v in edges:
            adj[u, v] = False
        return Digraph(adj)


@dataclass(frozen=True)
class DegreeReport:
    out: np.ndarray
    inn: np.ndarray
    delta_plus: int
    delta_minus: int
    delta0: int
    delta: int
    Delta_plus: int
    Delta_minus: int


def degrees(D: Digraph) -> DegreeReport:
    out, inn = D.out_degrees, D.in_degrees
    if D.n == 0:
        return DegreeReport(out, inn, 0, 0, 0, 0, 0, 0)
    dp, dm = int(out.min()), int(inn.min())
    return DegreeReport(
        out=out,
        inn=inn,
        delta_plus=dp,
        delta_minus=dm,
        delta0=min(dp, dm),
        delta=int((out + inn).min()),
        Delta_plus=int(out.max()),
        Delta_minus=int(inn.max()),
    )


def from_adjacency(matrix) -> Digraph:
    return Digraph(matrix)


def from_edges(n: int, edges: Iterable[Edge]) -> Digraph:
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = True
    return Digraph(adj)


def transitive_order(T: Digraph) -> list[int] | None:
    """Order v_1..v_n with v_i -> v_j iff i < j, or None if T is not transitive."""
    if not T.is_tournament:
        raise GraphError("transitive_order needs a tournament")
    out = T.out_degrees
    order = sorted(range(T.n), key=lambda v: -int(out[v]))
    # a tournament is transitive iff its score sequence is n-1, ..., 0
    if any(int(out[v]) != T.n - 1 - i for i, v in enumerate(order)):
        return None
    return order


# --- paths and cycles -----------------------------------------------------


def path_edges(path: Sequence[int]) -> list[Edge]:
    return [(path[i], path[i + 1]) for i in range(len(path) - 1)]


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    m = len(cycle)
    return [(cycle[i], cycle[(i + 1) % m]) for i in range(m)]


def is_path(D: Digraph, path: Sequence[int]) -> bool:
    if len(path) == 0 or len(set(path)) != len(path):
        return False
    if any(v < 0 or v >= D.n for v in path):
        return False
    return all(D.adj[u, v] for u, v in path_edges(path))


def is_path_system(D: Digraph, paths: Iterable[Sequence[int]]) -> bool:
    seen: set[int] = set()
    for p in paths:
        if not is_path(D, p) or seen.intersection(p):
            return False
        seen.update(p)
    return True


def heads(paths: Iterable[Sequence[int]]) -> set[int]:
    return {p[-1] for p in paths}


def tails(paths: Iterable[Sequence[int]]) -> set[int]:
    return {p[0] for p in paths}


def interior(path: Sequence[int]) -> tuple[int, ...]:
    return tuple(path[1:-1])


def vertex_union(paths: Iterable[Sequence[int]]) -> set[int]:
    out: set[int] = set()
    for p in paths:
        out.update(p)
    return out


# --- text format ------------------------------------------------------------


def to_text(D: Digraph) -> str:
    rows = ["".join("1" if b else "0" for b in row) for row in D.adj]
    return "\n".join([str(D.n), *rows]) + "\n"


def from_text(text: str) -> Digraph:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise TournamentFormatError("empty input", 1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TournamentFormatError(f"expected vertex count, got {lines[0]!r}", 1) from None
    if n < 0:
        raise TournamentFormatError("negative vertex count", 1)
    if len(lines) - 1 != n:
        raise TournamentFormatError(f"expected {n} matrix rows, found {len(lines) - 1}", len(lines))
    adj = np.zeros((n, n), dtype=bool)
    for i, raw in enumerate(lines[1:]):
        row = raw.strip()
        if len(row) != n:
            raise TournamentFormatError(f"row has {len(row)} characters, expected {n}", i + 2)
        for j, ch in enumerate(row):
            if ch == "1":
                adj[i, j] = True
            elif ch != "0":
                raise TournamentFormatError(f"unexpected character {ch!r}", i + 2, j + 1)
        if adj[i, i]:
            raise TournamentFormatError("diagonal entry must be 0", i + 2, i + 1)
    return Digraph(adj)


def read_tournament(path) -> Digraph:
    with open(path, encoding="ascii") as fh:
        return from_text(fh.read())


def write_tournament(D: Digraph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_text(D))
