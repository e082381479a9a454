"""Named invariant suites run by ``seideldet verify``; each returns a SuiteResult."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .analysis import expected_det, interlace_check, jacobi_factor_check, moment_table
from .constructions import border_all_ones, join, quadratic_residue, reversal_det
from .exactlinalg import bareiss_det, determinant, pfaffian, pfaffian_bruteforce, PFAFFIAN_BRUTEFORCE_MAX_ORDER
from .search import exact_moments, random_seidel


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, ok: bool, detail):
        self.checked += 1
        if not ok:
            self.violations.append(detail)

    def to_json(self) -> dict:
        return {"suite": self.suite, "checked": self.checked, "passed": self.passed, "violations": self.violations[:20]}


def skew_conference_family() -> list:
    """Bordered quadratic-residue tournaments of order 4, 8, 12."""
    return [border_all_ones(quadratic_residue(p)) for p in (3, 7, 11)]


def pfaffian_square(n: int, trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("pfaffian-square")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        s = random_seidel(n, rng)
        rows = s.rows()
        pf = pfaffian(rows)
        ok = pf * pf == bareiss_det(rows)
        if n <= PFAFFIAN_BRUTEFORCE_MAX_ORDER:
            ok = ok and pf == pfaffian_bruteforce(rows)
        res.record(ok, s.to_record())
    return res


def join_mult(n: int, trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("join-mult")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a = int(rng.integers(1, n))
        s1, s2 = random_seidel(a, rng), random_seidel(n - a, rng)
        d = determinant(join(s1, s2))
        expect = determinant(s1) * determinant(s2) if a % 2 == 0 or (n - a) % 2 == 0 else None
        res.record(expect is None or d == expect, [s1.to_record(), s2.to_record()])
    return res


def reversal_formula(n: int, trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("reversal-formula")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        s = random_seidel(n, rng)
        if determinant(s) == 0:
            continue
        i, j = (int(v) + 1 for v in rng.choice(n, size=2, replace=False))
        out, det = reversal_det(s, i, j)
        res.record(det == determinant(out), {"matrix": s.to_record(), "i": i, "j": j})
    return res


def jacobi(trials: int, seed: int) -> SuiteResult:
    """All subsets of size <= 2, plus ``trials`` random larger ones, of each skew-conference matrix."""
    res = SuiteResult("jacobi")
    rng = np.random.default_rng(seed)
    family = skew_conference_family()
    for s in family:
        verts = range(1, s.order + 1)
        for size in (0, 1, 2):
            for a in combinations(verts, size):
                res.record(jacobi_factor_check(s, a), {"order": s.order, "subset": list(a)})
    for _ in range(trials):
        s = family[int(rng.integers(1, len(family)))]
        size = int(rng.integers(3, s.order))
        a = sorted(int(v) + 1 for v in rng.choice(s.order, size=size, replace=False))
        res.record(jacobi_factor_check(s, a), {"order": s.order, "subset": a})
    return res


def interlace(n: int, trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("interlace")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        order = int(rng.integers(2, n + 1))
        s = random_seidel(order, rng)
        size = int(rng.integers(1, order + 1))
        a = sorted(int(v) + 1 for v in rng.choice(order, size=size, replace=False))
        res.record(interlace_check(s, a), {"matrix": s.to_record(), "subset": a})
    return res


def moments(n: int) -> SuiteResult:
    res = SuiteResult("moments")
    for m in range(2, n + 1, 2):
        got = exact_moments(m)
        want = (expected_det(m), moment_table(m).row(m).z)
        res.record(got == want, {"n": m, "got": [str(g) for g in got], "want": list(want)})
    return res


SUITES = ("pfaffian-square", "join-mult", "reversal-formula", "jacobi", "interlace", "moments")


def run_suite(name: str, n: int = 8, trials: int = 200, seed: int = 0) -> SuiteResult:
    if name == "pfaffian-square":
        return pfaffian_square(n, trials, seed)
    if name == "join-mult":
        return join_mult(n, trials, seed)
    if name == "reversal-formula":
        return reversal_formula(n, trials, seed)
    if name == "jacobi":
        return jacobi(trials, seed)
    if name == "interlace":
        return interlace(n, trials, seed)
    if name == "moments":
        return moments(n)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
