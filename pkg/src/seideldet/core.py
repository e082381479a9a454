"""Seidel matrices of tournaments, graph Seidel matrices, and the switching/reversal actions.

Storage is a bit-packed upper triangle: pair (i, j), i < j, in row-major
order (1,2), (1,3), ..., (n-1,n) maps to bits 0, 1, 2, ...; a set bit means
entry +1 (arc i -> j), a clear bit means -1.  Public vertex arguments are
1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


def pair_index(n: int, i: int, j: int) -> int:
    """Bit position of the 0-based pair (i, j) with i < j."""
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _check_vertex(n: int, v: int) -> int:
    if not 1 <= v <= n:
        raise ValueError(f"vertex {v} out of range 1..{n}")
    return v - 1


@dataclass(frozen=True)
class SeidelMatrix:
    """Skew-symmetric matrix with zero diagonal and +-1 off the diagonal."""

    order: int
    bits: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if self.bits < 0 or self.bits >> (self.order * (self.order - 1) // 2):
            raise ValueError("bit array longer than the upper triangle")

    @property
    def n(self) -> int:
        return self.order

    @property
    def npairs(self) -> int:
        return self.order * (self.order - 1) // 2

    def entry(self, i: int, j: int) -> int:
        """Entry s_ij, 1-based."""
        a, b = _check_vertex(self.order, i), _check_vertex(self.order, j)
        if a == b:
            return 0
        if a < b:
            return 1 if self.bits >> pair_index(self.order, a, b) & 1 else -1
        return -1 if self.bits >> pair_index(self.order, b, a) & 1 else 1

    def to_array(self) -> np.ndarray:
        n = self.order
        out = np.zeros((n, n), dtype=np.int64)
        b = 0
        for i in range(n):
            for j in range(i + 1, n):
                v = 1 if self.bits >> b & 1 else -1
                out[i, j] = v
                out[j, i] = -v
                b += 1
        return out

    def rows(self) -> list[list[int]]:
        return self.to_array().tolist()

    @classmethod
    def from_array(cls, a) -> "SeidelMatrix":
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        n = a.shape[0]
        if np.any(np.diag(a) != 0) or np.any(a != -a.T):
            raise ValueError("not skew-symmetric with zero diagonal")
        off = a[~np.eye(n, dtype=bool)]
        if np.any(np.abs(off) != 1):
            raise ValueError("off-diagonal entries must be +-1")
        bits = 0
        b = 0
        for i in range(n):
            for j in range(i + 1, n):
                if a[i, j] == 1:
                    bits |= 1 << b
                b += 1
        return cls(n, bits)

    def to_record(self) -> dict:
        return {"n": self.order, "bits": format(self.bits, "x")}

    @classmethod
    def from_record(cls, rec: dict) -> "SeidelMatrix":
        return cls(int(rec["n"]), int(rec["bits"], 16))

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    def submatrix(self, vertices: Sequence[int]) -> "SeidelMatrix":
        """Principal submatrix on the given 1-based vertices (in the order given)."""
        idx = [_check_vertex(self.order, v) for v in vertices]
        return SeidelMatrix.from_array(self.to_array()[np.ix_(idx, idx)])

    def __str__(self):
        return "\n".join(" ".join(f"{v:2d}" for v in row) for row in self.rows())


@dataclass(frozen=True)
class Tournament:
    """Orientation of K_n; bit for pair i < j is set iff the arc is i -> j."""

    order: int
    arcs: int

    def beats(self, i: int, j: int) -> bool:
        return seidel_from_tournament(self).entry(i, j) == 1

    def adjacency(self) -> np.ndarray:
        return (seidel_from_tournament(self).to_array() == 1).astype(np.int64)

    @classmethod
    def from_adjacency(cls, a) -> "Tournament":
        a = np.asarray(a, dtype=np.int64)
        n = a.shape[0]
        if np.any(a + a.T != np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)):
            raise ValueError("A + A^T must equal J - I")
        return tournament_from_seidel(SeidelMatrix.from_array(2 * a + np.eye(n, dtype=np.int64) - 1))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        """Build from a 1-based arc list; every pair must appear exactly once."""
        bits = 0
        seen = set()
        for i, j in arcs:
            a, b = _check_vertex(n, i), _check_vertex(n, j)
            key = (min(a, b), max(a, b))
            if a == b or key in seen:
                raise ValueError(f"bad or repeated arc {(i, j)}")
            seen.add(key)
            if a < b:
                bits |= 1 << pair_index(n, a, b)
        if len(seen) != n * (n - 1) // 2:
            raise ValueError("arc list does not orient every pair")
        return cls(n, bits)


def seidel_from_tournament(t: Tournament) -> SeidelMatrix:
    return SeidelMatrix(t.order, t.arcs)


def tournament_from_seidel(s: SeidelMatrix) -> Tournament:
    return Tournament(s.order, s.bits)


@dataclass(frozen=True)
class GraphSeidel:
    """Seidel matrix of an oriented simple graph: +-1 on edges, 0 elsewhere."""

    order: int
    edges: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.signs):
            raise ValueError("one sign per edge required")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        keys = set()
        for i, j in self.edges:
            if i == j or not (1 <= i <= self.order and 1 <= j <= self.order):
                raise ValueError(f"bad edge {(i, j)}")
            keys.add((min(i, j), max(i, j)))
        if len(keys) != len(self.edges):
            raise ValueError("repeated edge")

    @classmethod
    def uniform(cls, order: int, edges: Iterable[tuple[int, int]]) -> "GraphSeidel":
        edges = tuple((min(i, j), max(i, j)) for i, j in edges)
        return cls(order, edges, (1,) * len(edges))

    def with_signs(self, signs: Sequence[int]) -> "GraphSeidel":
        return GraphSeidel(self.order, self.edges, tuple(signs))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.order, self.order), dtype=np.int64)
        for (i, j), s in zip(self.edges, self.signs):
            a, b = (i - 1, j - 1) if i < j else (j - 1, i - 1)
            sgn = s if i < j else -s
            out[a, b] = sgn
            out[b, a] = -sgn
        return out


def switch(s: SeidelMatrix, subset: Iterable[int]) -> SeidelMatrix:
    """DSD with d_i = -1 exactly on the 1-based ``subset``."""
    n = s.order
    flip = 0
    for v in subset:
        flip |= 1 << _check_vertex(n, v)
    mask = 0
    b = 0
    for i in range(n):
        fi = flip >> i & 1
        for j in range(i + 1, n):
            if fi ^ (flip >> j & 1):
                mask |= 1 << b
            b += 1
    return SeidelMatrix(n, s.bits ^ mask)


def switch_normalize(s: SeidelMatrix) -> SeidelMatrix:
    """Switching-class representative whose first row is +1 off the diagonal."""
    if s.order < 2:
        return s
    return switch(s, [j for j in range(2, s.order + 1) if s.entry(1, j) == -1])


def reverse_arc(s: SeidelMatrix, i: int, j: int) -> SeidelMatrix:
    """Negate entries (i, j) and (j, i)."""
    a, b = _check_vertex(s.order, i), _check_vertex(s.order, j)
    if a == b:
        raise ValueError("cannot reverse a loop: i == j")
    if a > b:
        a, b = b, a
    return SeidelMatrix(s.order, s.bits ^ (1 << pair_index(s.order, a, b)))


def all_seidel_matrices(n: int) -> Iterator[SeidelMatrix]:
    for bits in range(1 << (n * (n - 1) // 2)):
        yield SeidelMatrix(n, bits)


def switching_representatives(n: int) -> Iterator[SeidelMatrix]:
    """Every Seidel matrix of order n with row 1 all +1 (one per switching class)."""
    if n < 2:
        yield SeidelMatrix(n, 0)
        return
    row1 = (1 << (n - 1)) - 1
    for free in range(1 << ((n - 1) * (n - 2) // 2)):
        yield SeidelMatrix(n, row1 | free << (n - 1))


def read_records(lines: Iterable[str]) -> list[SeidelMatrix]:
    """Parse JSON-lines text, keeping only matrix records (lines carrying ``bits``)."""
    out = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if isinstance(rec, dict) and "bits" in rec:
            out.append(SeidelMatrix.from_record(rec))
    return out
