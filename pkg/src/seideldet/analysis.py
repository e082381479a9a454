"""Closed-form moments, matching counts, determinant bounds and spectral checks."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from math import comb, gcd

import mpmath
import numpy as np

from .constructions import is_skew_conference
from .core import GraphSeidel, SeidelMatrix
from .exactlinalg import IntPolynomial, char_poly, determinant

# --------------------------------------------------------------------------
# moments
# --------------------------------------------------------------------------


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _check_even(n: int, least: int = 2):
    if n % 2 or n < least:
        raise ValueError(f"n must be an even integer >= {least}, got {n}")


def expected_det(n: int) -> int:
    """Mean determinant over all order-n Seidel matrices: (n-1)!!."""
    _check_even(n)
    return double_factorial(n - 1)


def y_sequence(max_n: int) -> dict[int, int]:
    """y_n for even n <= max_n from y_n = (n-1) y_{n-2} + (2n-4) y_{n-4}, y_0 = y_2 = 1."""
    y = {0: 1, 2: 1}
    for n in range(4, max_n + 1, 2):
        y[n] = (n - 1) * y[n - 2] + (2 * n - 4) * y[n - 4]
    return y


@dataclass(frozen=True)
class MomentRow:
    n: int
    y: int
    z: int
    mean: int
    variance: int


@dataclass(frozen=True)
class MomentTable:
    rows: tuple[MomentRow, ...]

    def __post_init__(self):
        for r in self.rows:
            if r.z != r.y * r.mean or r.variance != r.mean * (r.y - r.mean):
                raise ValueError(f"inconsistent moment row {r}")

    def row(self, n: int) -> MomentRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_json(self) -> dict:
        return {"rows": [vars(r) for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "y", "z", "mean", "variance"])
        for r in self.rows:
            w.writerow([r.n, r.y, r.z, r.mean, r.variance])
        return buf.getvalue()

    def table(self) -> str:
        head = ("n", "y_n", "z_n")
        body = [(str(r.n), str(r.y), str(r.z)) for r in self.rows]
        return format_table(head, body)


def moment_table(max_n: int) -> MomentTable:
    if max_n % 2:
        raise ValueError("max_n must be even")
    y = y_sequence(max_n)
    rows = []
    for n in range(2, max_n + 1, 2):
        m = double_factorial(n - 1)
        rows.append(MomentRow(n, y[n], y[n] * m, m, m * (y[n] - m)))
    return MomentTable(tuple(rows))


def format_table(head, body) -> str:
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
    return "\n".join(lines)


# --------------------------------------------------------------------------
# matchings and expected char polys
# --------------------------------------------------------------------------


def matching_count(n: int, k: int) -> int:
    """Number of k-edge matchings in K_n: C(n, 2k) (2k-1)!!."""
    if k < 0 or 2 * k > n:
        raise ValueError("need 0 <= 2k <= n")
    return comb(n, 2 * k) * double_factorial(2 * k - 1)


def expected_charpoly(n: int) -> IntPolynomial:
    if n < 1:
        raise ValueError("n must be positive")
    coeffs = [0] * (n + 1)
    for k in range(n // 2 + 1):
        coeffs[n - 2 * k] = matching_count(n, k)
    return IntPolynomial(coeffs)


def graph_matching_numbers(order: int, edges) -> list[int]:
    """m_k, the number of k-edge matchings, by recursion on the first edge."""
    edges = [tuple(sorted(e)) for e in edges]
    counts = [0] * (order // 2 + 1)

    def rec(start: int, used: frozenset, size: int):
        counts[size] += 1
        for t in range(start, len(edges)):
            i, j = edges[t]
            if i not in used and j not in used:
                rec(t + 1, used | {i, j}, size + 1)

    rec(0, frozenset(), 0)
    return counts


def expected_charpoly_graph(g: GraphSeidel) -> IntPolynomial:
    """Mean char poly over all sign choices on g's edges: sum_k m_k x^(n-2k)."""
    n = g.order
    coeffs = [0] * (n + 1)
    for k, m in enumerate(graph_matching_numbers(n, g.edges)):
        coeffs[n - 2 * k] = m
    return IntPolynomial(coeffs)


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------


def _iroot(x: int, k: int) -> int | None:
    """Exact k-th root of a non-negative integer, or None."""
    if x < 2:
        return x
    r = int(round(x ** (1.0 / k))) if x.bit_length() < 1000 else 1 << (x.bit_length() // k)
    # Newton from above
    r = max(r, 1) + 1
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r if r**k == x else None


@total_ordering
@dataclass(frozen=True)
class RootBound:
    """The positive real radicand^(1/index), compared exactly by raising to a common power."""

    radicand: Fraction
    index: int

    def __post_init__(self):
        rad = Fraction(self.radicand)
        if rad < 0 or self.index < 1:
            raise ValueError("need a non-negative radicand and positive index")
        idx = self.index
        for d in sorted({d for d in range(2, idx + 1) if idx % d == 0}, reverse=True):
            num, den = _iroot(rad.numerator, d), _iroot(rad.denominator, d)
            if num is not None and den is not None:
                rad, idx = Fraction(num, den), idx // d
                break
        object.__setattr__(self, "radicand", rad)
        object.__setattr__(self, "index", idx)

    @property
    def is_integral(self) -> bool:
        return self.index == 1 and self.radicand.denominator == 1

    @property
    def exact(self) -> Fraction | None:
        return self.radicand if self.index == 1 else None

    def _pair(self, other) -> tuple[Fraction, Fraction]:
        if not isinstance(other, RootBound):
            other = RootBound(Fraction(other), 1)
            if other.radicand < 0:
                raise ValueError("bounds are compared against non-negative values")
        L = self.index * other.index // gcd(self.index, other.index)
        return self.radicand ** (L // self.index), other.radicand ** (L // other.index)

    def __eq__(self, other):
        if not isinstance(other, (RootBound, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return a == b

    def __lt__(self, other):
        if not isinstance(other, (RootBound, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return a < b

    def __hash__(self):
        return hash((self.radicand, self.index))

    def __float__(self):
        return float(mpmath.root(mpmath.mpf(self.radicand.numerator) / self.radicand.denominator, self.index))

    def __str__(self):
        if self.index == 1:
            return str(self.radicand)
        return f"({self.radicand})^(1/{self.index}) ~ {float(self):.6g}"

    def to_json(self):
        out = {"radicand": str(self.radicand), "index": self.index, "approx": float(self)}
        if self.is_integral:
            out["value"] = int(self.radicand)
        return out


@dataclass(frozen=True)
class BoundsProfile:
    n: int
    hadamard_sqrt: RootBound
    mod2_bound: RootBound | None
    fischer_bound: RootBound
    scm_minor: RootBound
    gap_threshold: RootBound

    FIELDS = ("hadamard_sqrt", "mod2_bound", "fischer_bound", "scm_minor", "gap_threshold")

    def to_json(self) -> dict:
        out = {"n": self.n}
        for f in self.FIELDS:
            v = getattr(self, f)
            out[f] = None if v is None else v.to_json()
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bound", "radicand", "index", "approx"])
        for f in self.FIELDS:
            v = getattr(self, f)
            if v is not None:
                w.writerow([f, str(v.radicand), v.index, float(v)])
        return buf.getvalue()

    def table(self) -> str:
        body = [(f, "-" if getattr(self, f) is None else str(getattr(self, f))) for f in self.FIELDS]
        return f"n = {self.n}\n" + format_table(("bound", "value"), body)


def bounds_profile(n: int) -> BoundsProfile:
    """Determinant bounds for order n.

    hadamard_sqrt, mod2_bound, scm_minor and gap_threshold bound sqrt(det);
    fischer_bound bounds det itself for non-skew-conference matrices.
    """
    _check_even(n, 4)
    m = n - 1
    mod2 = RootBound(Fraction((2 * n - 3) ** 2 * (n - 3) ** (n - 2)), 4) if n % 4 == 2 else None
    return BoundsProfile(
        n=n,
        hadamard_sqrt=RootBound(Fraction(m**n), 4),
        mod2_bound=mod2,
        fischer_bound=RootBound(Fraction(m ** (n - 2) * (m * m - 4)), 2),
        scm_minor=RootBound(Fraction((n + 1) ** (n - 2)), 4),
        gap_threshold=RootBound(Fraction(m) ** (n - 8), 4),
    )


def within_fischer(det: int, n: int) -> bool:
    """Strict det < (n-1)^((n-2)/2) sqrt((n-1)^2 - 4), decided on squares."""
    m = n - 1
    return det >= 0 and det * det < m ** (n - 2) * (m * m - 4)


# --------------------------------------------------------------------------
# spectral checks
# --------------------------------------------------------------------------

INTERLACE_SLACK = 1e-7


def skew_spectrum(a: np.ndarray) -> np.ndarray:
    """Imaginary parts of the eigenvalues of a real skew-symmetric matrix, descending.

    Obtained from the symmetric PSD matrix -A^2, whose eigenvalues come in equal
    pairs mu, mu for each conjugate pair +-sqrt(mu) i.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    mu = np.linalg.eigvalsh(-(a @ a))[::-1]
    mu = np.clip(mu, 0.0, None)
    top = np.sqrt(mu[0 : 2 * (n // 2) : 2])
    mid = np.zeros(n % 2)
    return np.concatenate([top, mid, -top[::-1]])


def interlace_check(s: SeidelMatrix, subset) -> bool:
    """Cauchy interlacing lambda_{n-m+j} <= theta_j <= lambda_j for the principal submatrix on ``subset``."""
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    n, m = s.order, len(subset)
    lam = skew_spectrum(s.to_array())
    theta = skew_spectrum(s.submatrix(subset).to_array())
    for j in range(m):
        if not (lam[n - m + j] - INTERLACE_SLACK <= theta[j] <= lam[j] + INTERLACE_SLACK):
            return False
    return True


def _require_skew_conference(s: SeidelMatrix):
    if not is_skew_conference(s):
        raise ValueError("input is not a skew-conference matrix")


def jacobi_factor_check(s: SeidelMatrix, subset) -> bool:
    """(x^2 + n - 1)^(n/2 - k) c_{S[a]}(x) == c_{S(a)}(x) for a skew-conference S, |a| = k.

    For k > n/2 the same identity is checked with the roles of the two sides swapped.
    """
    _require_skew_conference(s)
    n = s.order
    alpha = sorted(set(subset))
    rest = [v for v in range(1, n + 1) if v not in set(alpha)]
    inner, outer = (alpha, rest) if 2 * len(alpha) <= n else (rest, alpha)
    cp_in = char_poly(s.submatrix(inner)) if inner else IntPolynomial([1])
    cp_out = char_poly(s.submatrix(outer)) if outer else IntPolynomial([1])
    factor = IntPolynomial([n - 1, 0, 1]) ** (n // 2 - len(inner))
    return factor * cp_in == cp_out


def scm_minor_check(s: SeidelMatrix) -> bool:
    """Every double deletion of a skew-conference S of order N has det (N-1)^((N-4)/2)."""
    _require_skew_conference(s)
    N = s.order
    if N < 4:
        raise ValueError("need order at least 4")
    target = (N - 1) ** ((N - 4) // 2)
    verts = range(1, N + 1)
    for i, j in combinations(verts, 2):
        keep = [v for v in verts if v != i and v != j]
        if determinant(s.submatrix(keep)) != target:
            return False
    return True


def _cot_sq(k: int, dps: int) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return mpmath.cot(mpmath.pi / (2 * k)) ** 2


def transitive_obstruction(n: int, k: int) -> bool:
    """True iff R_k has an eigenvalue of modulus cot(pi/(2k)) exceeding sqrt(n-1).

    Then R_k cannot be a principal submatrix of an order-n skew-conference
    matrix.  Squares are compared; k <= 3 is exact (cot^2 in {0, 1, 3}) and
    otherwise cot^2 is irrational, so raising precision always separates it
    from the integer n - 1.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k <= 3:
        return (0, 1, 3)[k - 1] > n - 1
    dps = 30
    while True:
        c2 = _cot_sq(k, dps)
        with mpmath.workdps(dps):
            margin = c2 - (n - 1)
            if abs(margin) > mpmath.mpf(10) ** (10 - dps):
                return bool(margin > 0)
        dps *= 2


def obstruction_threshold(c: float, tol: float = 1e-9) -> float:
    """N_c: the crossing point past which cot(pi c/(2n)) > sqrt(n-1), treating n as real."""
    if c <= 0:
        raise ValueError("c must be positive")

    def f(x):
        return mpmath.cot(mpmath.pi * c / (2 * x)) - mpmath.sqrt(x - 1)

    lo = max(1.0 + 1e-9, c)  # k = n/c >= 1
    hi = 2 * lo
    while f(hi) <= 0:
        hi *= 2
    # the crossing is the last sign change; walk lo up to a point with f <= 0
    if f(lo) > 0:
        x = lo
        while f(x) > 0 and x < hi:
            x += 0.01
        lo = x
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2
