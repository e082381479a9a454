"""Explicit Seidel-matrix constructions, each paired with a re-checkable certificate."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .core import SeidelMatrix, Tournament, reverse_arc, tournament_from_seidel
from .exactlinalg import IntPolynomial, SingularMatrixError, char_poly, determinant, inverse


@dataclass(frozen=True)
class ConstructionCertificate:
    """What a construction claims about its output, and the parameters it used."""

    kind: str
    claim: dict
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "claim": dict(self.claim), "params": dict(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> "ConstructionCertificate":
        return cls(obj["kind"], dict(obj["claim"]), dict(obj.get("params", {})))

    def verify(self, s: SeidelMatrix) -> bool:
        """Recompute every claimed quantity from ``s``."""
        c = self.claim
        if "order" in c and s.order != c["order"]:
            return False
        if "sqrt_det" in c:
            d = determinant(s)
            if d != c["sqrt_det"] ** 2:
                return False
        if "det" in c and determinant(s) != c["det"]:
            return False
        if "skew_conference" in c and is_skew_conference(s) != c["skew_conference"]:
            return False
        if "doubly_regular" in c:
            const = doubly_regular_constant(tournament_from_seidel(s))
            if (const is not None) != c["doubly_regular"]:
                return False
            if c.get("common_out") is not None and const != c["common_out"]:
                return False
        if "divisor_constant" in c:
            quad = IntPolynomial((c["divisor_constant"], 0, 1))
            if char_poly(s).divmod_monic(quad)[1] != IntPolynomial((0,)):
                return False
        return True


# --------------------------------------------------------------------------
# transitive tournaments and joins
# --------------------------------------------------------------------------


def transitive(n: int) -> SeidelMatrix:
    """R_n: all +1 above the diagonal."""
    if n < 1:
        raise ValueError("n must be positive")
    return SeidelMatrix(n, (1 << (n * (n - 1) // 2)) - 1)


def transitive_inverse(n: int) -> np.ndarray:
    """Closed form of R_n^-1 for even n: entry (i, j), i < j, is (-1)^(j-i)."""
    if n % 2:
        raise SingularMatrixError("R_n is singular for odd n")
    i, j = np.indices((n, n))
    upper = np.where((j - i) % 2 == 0, 1, -1)
    return np.where(i < j, upper, np.where(i > j, -upper.T, 0)).astype(np.int64)


def join(s1: SeidelMatrix, s2: SeidelMatrix) -> SeidelMatrix:
    """Seidel matrix of T1 -> T2: [[S1, J], [-J^T, S2]]."""
    a = np.zeros((s1.order + s2.order,) * 2, dtype=np.int64)
    a[: s1.order, : s1.order] = s1.to_array()
    a[s1.order :, s1.order :] = s2.to_array()
    a[: s1.order, s1.order :] = 1
    a[s1.order :, : s1.order] = -1
    return SeidelMatrix.from_array(a)


# --------------------------------------------------------------------------
# arc reversal
# --------------------------------------------------------------------------


def reversal_factor(inv_entry: Fraction) -> Fraction:
    """Multiplier (1 + 2 S^-1_ij)^2 applied to det S by reversing an arc with s_ij = +1."""
    return (1 + 2 * Fraction(inv_entry)) ** 2


def reversal_effect(inv_entry: Fraction) -> str:
    """'increase', 'unchanged' or 'decrease' from the value of S^-1_ij (with s_ij = +1)."""
    v = Fraction(inv_entry)
    if v > 0 or v < -1:
        return "increase"
    if v in (0, -1):
        return "unchanged"
    return "decrease"


def oriented(s: SeidelMatrix, i: int, j: int) -> tuple[int, int]:
    """(i, j) or (j, i), whichever pair has s = +1."""
    if i == j:
        raise ValueError("i and j must differ")
    return (i, j) if s.entry(i, j) == 1 else (j, i)


def reversal_det(s: SeidelMatrix, i: int, j: int, inv=None) -> tuple[SeidelMatrix, int]:
    """Reverse arc {i, j} and return the new matrix with its determinant from the update formula."""
    i, j = oriented(s, i, j)
    det = determinant(s)
    if det == 0:
        raise SingularMatrixError("reversal formula needs an invertible S")
    inv = inverse(s) if inv is None else inv
    new = Fraction(det) * reversal_factor(inv.entry(i, j))
    assert new.denominator == 1
    return reverse_arc(s, i, j), int(new)


def grow(s: SeidelMatrix) -> SeidelMatrix:
    """An order n+2 matrix with strictly larger determinant than even-order ``s``.

    Joins R_2 onto ``s`` and reverses an arc whose inverse entry in the
    off-diagonal block is positive.
    """
    if s.order % 2:
        raise ValueError("even order required")
    b = join(transitive(2), s)
    inv = inverse(b)
    for c in range(3, b.order + 1):
        for r in (1, 2):
            if inv.entry(r, c) > 0:
                return reverse_arc(b, r, c)
    raise AssertionError("off-diagonal block of the inverse has no positive entry")


# --------------------------------------------------------------------------
# bordered transitive matrices hitting a target determinant
# --------------------------------------------------------------------------


def target_weights(n: int) -> np.ndarray:
    """x^T R_n^-1 for x = (1, -1, 1, ..., -1)."""
    x = np.array([1, -1] * (n // 2), dtype=np.int64)
    return x @ transitive_inverse(n)


def max_target(n: int) -> int:
    """Largest odd k reachable by ``target_determinant(n, k)``: n^2/2 + 1."""
    return n * n // 2 + 1


def _signs_for(n: int, target: int) -> np.ndarray:
    w = target_weights(n)
    y = np.zeros(n, dtype=np.int64)
    r = target
    # largest |w| first; equal weights leftmost first
    for j in sorted(range(n), key=lambda j: (-abs(w[j]), j)):
        s = 1 if r >= 0 else -1
        y[j] = s * (1 if w[j] > 0 else -1)
        r -= s * abs(int(w[j]))
    if r != 0:
        raise AssertionError(f"greedy sign selection left residue {r}")
    return y


def target_determinant(n: int, k: int) -> tuple[SeidelMatrix, ConstructionCertificate]:
    """Order n+2 matrix [[0, 1, x^T], [-1, 0, y^T], [-x, -y, R_n]] with det k^2."""
    if n < 2 or n % 2:
        raise ValueError("n must be a positive even integer")
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be a positive odd integer")
    if k > max_target(n):
        raise ValueError(f"k must be at most n^2/2 + 1 = {max_target(n)}")
    y = _signs_for(n, k - 1)
    x = np.array([1, -1] * (n // 2), dtype=np.int64)
    a = np.zeros((n + 2, n + 2), dtype=np.int64)
    a[0, 1], a[1, 0] = 1, -1
    a[0, 2:], a[2:, 0] = x, -x
    a[1, 2:], a[2:, 1] = y, -y
    a[2:, 2:] = transitive(n).to_array()
    cert = ConstructionCertificate(
        "quadratic", {"order": n + 2, "sqrt_det": k}, {"n": n, "k": k, "y": [int(v) for v in y]}
    )
    return SeidelMatrix.from_array(a), cert


# --------------------------------------------------------------------------
# doubly regular tournaments and skew-conference matrices
# --------------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def quadratic_residue(p: int) -> SeidelMatrix:
    """Q_p on vertices 0..p-1 (stored 1..p): arc a -> b iff b - a is a nonzero square mod p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p % 4 != 3:
        raise ValueError(f"{p} is not 3 mod 4")
    squares = {x * x % p for x in range(1, p)}
    a = np.zeros((p, p), dtype=np.int64)
    for u in range(p):
        for v in range(p):
            if u != v:
                a[u, v] = 1 if (v - u) % p in squares else -1
    return SeidelMatrix.from_array(a)


def border_all_ones(s: SeidelMatrix) -> SeidelMatrix:
    """[[0, j], [-j^T, S]]: a new first vertex beating everyone."""
    return join(transitive(1), s)


def is_skew_conference(s) -> bool:
    a = s.to_array() if isinstance(s, SeidelMatrix) else np.asarray(s, dtype=np.int64)
    n = a.shape[0]
    return bool(np.array_equal(a @ a.T, (n - 1) * np.eye(n, dtype=np.int64)))


def doubly_regular_constant(t) -> int | None:
    """Common number of vertices dominated by every pair, or None if it varies."""
    if isinstance(t, SeidelMatrix):
        t = tournament_from_seidel(t)
    a = t.adjacency()
    common = a @ a.T
    off = common[~np.eye(t.order, dtype=bool)]
    if off.size == 0:
        return 0
    return int(off[0]) if np.all(off == off[0]) else None


def is_doubly_regular(t) -> bool:
    return doubly_regular_constant(t) is not None


def bordered_transitive_hc1(k: int) -> SeidelMatrix:
    """Order 2k+1 matrix with eigenvalues +-sqrt(4k-1) i, built around R_{2k-1}."""
    if k < 1:
        raise ValueError("k must be positive")
    m = 2 * k - 1
    alt = np.array([(-1) ** (t + 1) for t in range(m)], dtype=np.int64)  # -1, 1, -1, ..., -1
    a = np.zeros((m + 2, m + 2), dtype=np.int64)
    a[0, 1], a[1, 0] = 1, -1
    a[0, 2:], a[2:, 0] = alt, -alt
    a[1, 2:], a[2:, 1] = -alt, alt
    a[2:, 2:] = transitive(m).to_array()
    return SeidelMatrix.from_array(a)


# --------------------------------------------------------------------------
# certified entry point
# --------------------------------------------------------------------------


def certify(kind: str, s: SeidelMatrix, **params) -> ConstructionCertificate:
    """Certificate for a matrix produced by construction ``kind``; claims come from theory, not from ``s``."""
    if kind == "transitive":
        n = params["n"]
        return ConstructionCertificate(kind, {"order": n, "sqrt_det": 1 if n % 2 == 0 else 0}, {"n": n})
    if kind == "join":
        n1, n2, d1, d2 = params["n1"], params["n2"], params["sqrt_det1"], params["sqrt_det2"]
        claim = {"order": n1 + n2}
        if n1 % 2 == 0 or n2 % 2 == 0:
            claim["sqrt_det"] = d1 * d2
        return ConstructionCertificate(kind, claim, {"n1": n1, "n2": n2})
    if kind == "residue":
        p = params["p"]
        return ConstructionCertificate(
            kind, {"order": p, "doubly_regular": True, "common_out": (p - 3) // 4}, {"p": p}
        )
    if kind == "bordered":
        n = s.order
        src_regular = params.get("doubly_regular", False)
        claim = {"order": n, "skew_conference": src_regular}
        if src_regular:
            claim["sqrt_det"] = isqrt((n - 1) ** (n // 2))
        return ConstructionCertificate(kind, claim, {"n": n})
    if kind == "hc1":
        k = params["k"]
        return ConstructionCertificate(kind, {"order": 2 * k + 1, "divisor_constant": 4 * k - 1}, {"k": k})
    if kind == "reversal":
        return ConstructionCertificate(
            kind, {"order": s.order, "det": params["det"]}, {"i": params["i"], "j": params["j"]}
        )
    raise ValueError(f"unknown construction kind {kind!r}")


CONSTRUCTIONS = ("transitive", "join", "target-det", "residue", "border", "hc1", "reversal")


def construct(name: str, *inputs: SeidelMatrix, **params) -> tuple[SeidelMatrix, ConstructionCertificate]:
    """Run a named construction; matrix inputs (join, border, reversal) are positional."""
    if name == "transitive":
        s = transitive(params["n"])
        return s, certify("transitive", s, n=params["n"])
    if name == "join":
        if len(inputs) != 2:
            raise ValueError("join needs two input matrices")
        s1, s2 = inputs
        s = join(s1, s2)
        d1, d2 = (isqrt(determinant(m)) for m in (s1, s2))
        return s, certify("join", s, n1=s1.order, n2=s2.order, sqrt_det1=d1, sqrt_det2=d2)
    if name == "target-det":
        return target_determinant(params["n"], params["k"])
    if name == "residue":
        s = quadratic_residue(params["p"])
        return s, certify("residue", s, p=params["p"])
    if name == "border":
        if len(inputs) != 1:
            raise ValueError("border needs one input matrix")
        s = border_all_ones(inputs[0])
        return s, certify("bordered", s, doubly_regular=is_doubly_regular(inputs[0]))
    if name == "hc1":
        s = bordered_transitive_hc1(params["k"])
        return s, certify("hc1", s, k=params["k"])
    if name == "reversal":
        if len(inputs) != 1:
            raise ValueError("reversal needs one input matrix")
        i, j = oriented(inputs[0], params["i"], params["j"])
        s, det = reversal_det(inputs[0], i, j)
        return s, certify("reversal", s, det=det, i=i, j=j)
    raise ValueError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")
