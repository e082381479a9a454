"""Exact integer/rational kernels: determinant, Pfaffian, inverse, char poly, Schur complement."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .core import SeidelMatrix


class SingularMatrixError(ValueError):
    pass


def _rows(m) -> list[list]:
    """Matrix as a list of Python-number rows (ints stay ints, Fractions stay Fractions)."""
    if isinstance(m, SeidelMatrix):
        return m.rows()
    if isinstance(m, RationalMatrix):
        return [list(r) for r in m.entries]
    if isinstance(m, np.ndarray):
        if m.dtype == object:
            return [list(r) for r in m]
        return m.astype(np.int64).tolist()
    return [list(r) for r in m]


def _is_small_int(rows) -> bool:
    return all(type(v) is int and -1 <= v <= 1 for r in rows for v in r)


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[d]`` is the coefficient of x^d (constant first)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(v) for v in c) or (0,))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls(tuple(reversed([int(c) for c in coeffs])))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def coefficient(self, d: int) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        m = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self.coefficient(d) + other.coefficient(d) for d in range(m)))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __pow__(self, e: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Exact long division by a monic integer polynomial."""
        if divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial((0,)), self
        quot = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k]
            quot[k - dd] = q
            if q:
                for i, c in enumerate(divisor.coeffs):
                    rem[k - dd + i] -= q * c
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:dd]) or (0,))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self):
        terms = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mag = abs(c)
            body = {0: str(mag), 1: "x" if mag == 1 else f"{mag}x"}.get(d, f"x^{d}" if mag == 1 else f"{mag}x^{d}")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])


# --------------------------------------------------------------------------
# determinant
# --------------------------------------------------------------------------


def bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination on Python ints (no size limit)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rational_det(rows) -> Fraction:
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def determinant(m) -> int:
    """Exact determinant of a Seidel matrix (or any integer matrix).

    Orders up to ``kernels.DET_INT64_MAX_ORDER`` with entries in {0, +-1}
    go through the int64 kernel; everything else uses Python integers.
    """
    rows = _rows(m)
    n = len(rows)
    if 0 < n <= kernels.DET_INT64_MAX_ORDER and _is_small_int(rows):
        return int(kernels.det_batch(np.asarray(rows, dtype=np.int64)[None])[0])
    if all(type(v) is int for r in rows for v in r):
        return bareiss_det(rows)
    d = rational_det(rows)
    return int(d) if d.denominator == 1 else d


# --------------------------------------------------------------------------
# Pfaffian
# --------------------------------------------------------------------------


def _check_skew(rows):
    n = len(rows)
    for i in range(n):
        if rows[i][i] != 0 or any(rows[i][j] != -rows[j][i] for j in range(n)):
            raise ValueError("matrix is not skew-symmetric")


def pfaffian(m) -> int:
    """Pfaffian by fraction-free skew elimination.

    Stage k keeps b_ij = Pf(A[1..2k, i, j]); the four-index Pfaffian identity
    gives the next stage with one exact division by the previous pivot.
    """
    b = _rows(m)
    n = len(b)
    if n % 2:
        raise ValueError("Pfaffian needs even order")
    _check_skew(b)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(0, n - 2, 2):
        if b[k][k + 1] == 0:
            c = next((c for c in range(k + 2, n) if b[k][c] != 0), None)
            if c is None:
                return 0
            b[k + 1], b[c] = b[c], b[k + 1]
            for r in b:
                r[k + 1], r[c] = r[c], r[k + 1]
            sign = -sign
        p = b[k][k + 1]
        rk, rk1 = b[k], b[k + 1]
        for i in range(k + 2, n):
            ri = b[i]
            for j in range(i + 1, n):
                v = (p * ri[j] - rk[i] * rk1[j] + rk[j] * rk1[i]) // prev
                ri[j] = v
                b[j][i] = -v
        prev = p
    return sign * b[n - 2][n - 1]


@dataclass(frozen=True)
class PerfectMatching:
    """Pairs (i_k, j_k), 1-based, i_k < j_k, sorted by i_k."""

    pairs: tuple[tuple[int, int], ...]

    def permutation(self) -> tuple[int, ...]:
        return tuple(v for p in self.pairs for v in p)

    def sign(self) -> int:
        perm = self.permutation()
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        return -1 if inv % 2 else 1

    def weight(self, rows) -> int:
        w = 1
        for i, j in self.pairs:
            w *= rows[i - 1][j - 1]
        return w


def perfect_matchings(n: int) -> Iterator[PerfectMatching]:
    """All (n-1)!! perfect matchings of K_n in canonical order."""

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield ()
            return
        first = rest[0]
        for k in range(1, len(rest)):
            for tail in rec(rest[1:k] + rest[k + 1 :]):
                yield ((first, rest[k]),) + tail

    if n % 2:
        return
    for pairs in rec(tuple(range(1, n + 1))):
        yield PerfectMatching(pairs)


@lru_cache(maxsize=None)
def _matching_table(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ms = list(perfect_matchings(n))
    rows = np.array([[i - 1 for i, _ in m.pairs] for m in ms], dtype=np.int64).reshape(len(ms), n // 2)
    cols = np.array([[j - 1 for _, j in m.pairs] for m in ms], dtype=np.int64).reshape(len(ms), n // 2)
    signs = np.array([m.sign() for m in ms], dtype=np.int64)
    return rows, cols, signs


PFAFFIAN_BRUTEFORCE_MAX_ORDER = 12


def pfaffian_bruteforce(m) -> int:
    """Signed sum of matching weights over all perfect matchings (the definition)."""
    rows = _rows(m)
    n = len(rows)
    if n % 2:
        raise ValueError("Pfaffian needs even order")
    if n > PFAFFIAN_BRUTEFORCE_MAX_ORDER:
        raise ValueError(f"brute-force Pfaffian limited to order {PFAFFIAN_BRUTEFORCE_MAX_ORDER}")
    _check_skew(rows)
    if n == 0:
        return 1
    r, c, signs = _matching_table(n)
    if _is_small_int(rows):
        a = np.asarray(rows, dtype=np.int64)
        return int(signs @ np.prod(a[r, c], axis=1))
    total = 0
    for mr, mc, s in zip(r.tolist(), c.tolist(), signs.tolist()):
        w = s
        for i, j in zip(mr, mc):
            w *= rows[i][j]
        total += w
    return total


# --------------------------------------------------------------------------
# inverse, char poly
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMatrix:
    """Exact rational matrix; Fractions are always in lowest terms with positive denominator."""

    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Fraction:
        """1-based entry."""
        return self.entries[i - 1][j - 1]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_skew(self) -> bool:
        n = self.order
        return all(self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(n))

    def matmul(self, other) -> "RationalMatrix":
        b = _rows(other)
        n, k = len(self.entries), len(b[0]) if b else 0
        return RationalMatrix(
            tuple(tuple(sum((self.entries[i][t] * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(k)) for i in range(n))
        )

    def to_json(self) -> list[list[dict]]:
        return [[{"num": v.numerator, "den": v.denominator} for v in r] for r in self.entries]

    @classmethod
    def from_json(cls, grid) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(c["num"], c["den"]) for c in r) for r in grid))


def inverse(m) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan over the rationals."""
    rows = _rows(m)
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for k in range(n):
        p = next((r for r in range(k, n) if a[r][k] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [v / piv for v in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return RationalMatrix(tuple(tuple(r[n:]) for r in a))


def berkowitz(rows) -> list[int]:
    """Coefficients of det(xI - A), highest degree first, division-free."""
    a = [list(r) for r in rows]
    n = len(a)
    p = [1]
    for r in range(n):
        t = [1, -a[r][r]]
        v = [a[i][r] for i in range(r)]
        row = a[r][:r]
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(a[i][j] * v[j] for j in range(r)) for i in range(r)]
        p = [sum(t[i - j] * p[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return p


def char_poly(m) -> IntPolynomial:
    """det(xI - S) with exact integer coefficients."""
    rows = _rows(m)
    n = len(rows)
    if 0 < n <= kernels.CHARPOLY_INT64_MAX_ORDER and _is_small_int(rows):
        desc = kernels.charpoly_batch(np.asarray(rows, dtype=np.int64)[None])[0].tolist()
    else:
        desc = berkowitz(rows)
    return IntPolynomial.from_descending(desc)


# --------------------------------------------------------------------------
# Schur complement and low-rank update
# --------------------------------------------------------------------------


def _as_int_if_integral(v: Fraction):
    return int(v) if v.denominator == 1 else v


def schur_complement(m, split: tuple[int, int]) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Return (M/D, D) for M = [[A, B], [C, D]] with block sizes ``split``."""
    rows = _rows(m)
    a_size, d_size = split
    if a_size + d_size != len(rows) or a_size < 0 or d_size < 0:
        raise ValueError("block sizes must add up to the matrix order")
    A = [r[:a_size] for r in rows[:a_size]]
    B = [r[a_size:] for r in rows[:a_size]]
    C = [r[:a_size] for r in rows[a_size:]]
    D = [r[a_size:] for r in rows[a_size:]]
    try:
        Dinv = inverse(D).entries if d_size else ()
    except SingularMatrixError:
        raise SingularMatrixError("trailing block D is not invertible") from None
    # B D^-1 C
    BD = [[sum((Fraction(B[i][t]) * Dinv[t][j] for t in range(d_size)), Fraction(0)) for j in range(d_size)] for i in range(a_size)]
    BDC = [[sum((BD[i][t] * C[t][j] for t in range(d_size)), Fraction(0)) for j in range(a_size)] for i in range(a_size)]
    comp = [[Fraction(A[i][j]) - BDC[i][j] for j in range(a_size)] for i in range(a_size)]
    return comp, [[Fraction(v) for v in r] for r in D]


def schur_det(m, split: tuple[int, int]):
    """det M via det(M/D) * det(D); int when the value is integral."""
    comp, D = schur_complement(m, split)
    return _as_int_if_integral(rational_det(comp) * rational_det(D))


def smw_det_update(det_a, a_inv, X, Y):
    """det(A + X Y^T) = det A * det(I + Y^T A^-1 X), without re-eliminating A."""
    inv = _rows(a_inv)
    X = [list(r) for r in np.asarray(X, dtype=object).tolist()] if len(X) else []
    Y = [list(r) for r in np.asarray(Y, dtype=object).tolist()] if len(Y) else []
    n = len(inv)
    k = len(X[0]) if X else 0
    if k > n:
        raise ValueError("update rank k must not exceed n")
    if k == 0:
        return det_a
    inv_x = [[sum((Fraction(inv[i][t]) * X[t][j] for t in range(n)), Fraction(0)) for j in range(k)] for i in range(n)]
    cap = [[Fraction(int(i == j)) + sum((Y[t][i] * inv_x[t][j] for t in range(n)), Fraction(0)) for j in range(k)] for i in range(k)]
    return _as_int_if_integral(Fraction(det_a) * rational_det(cap))
