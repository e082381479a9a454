import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seideldet import kernels
from seideldet.analysis import (
    RootBound,
    bounds_profile,
    double_factorial,
    expected_charpoly,
    expected_charpoly_graph,
    expected_det,
    interlace_check,
    jacobi_factor_check,
    matching_count,
    moment_table,
    obstruction_threshold,
    scm_minor_check,
    skew_spectrum,
    transitive_obstruction,
    within_fischer,
)
from seideldet.constructions import border_all_ones, quadratic_residue, transitive
from seideldet.core import GraphSeidel, SeidelMatrix
from seideldet.exactlinalg import IntPolynomial, char_poly
from seideldet.search import enumerate_dets, load_fixture, reference_detset


@pytest.fixture(scope="module")
def q3():
    return border_all_ones(quadratic_residue(3))


@pytest.fixture(scope="module")
def q7():
    return border_all_ones(quadratic_residue(7))


@pytest.fixture(scope="module")
def q11():
    return border_all_ones(quadratic_residue(11))


def brute_matchings(n_vertices, edges, k) -> int:
    return sum(
        1
        for combo in itertools.combinations(edges, k)
        if len({v for e in combo for v in e}) == 2 * k
    )


# ---------------------------------------------------------------- moments


def test_expected_det():
    assert expected_det(2) == 1
    assert expected_det(8) == 105
    assert expected_det(14) == math.prod(range(13, 0, -2)) == 135135
    with pytest.raises(ValueError):
        expected_det(7)


def test_moment_table_matches_published_rows():
    table = moment_table(14)
    published = load_fixture("moments")["rows"]
    assert [(r.n, r.y, r.z) for r in table.rows] == [(p["n"], p["y"], p["z"]) for p in published]
    assert table.row(6).y == 43 and table.row(6).z == 645
    assert table.row(14).z == 107250027885
    assert table.row(4).variance == 12


def test_moment_table_consistency():
    for r in moment_table(40).rows:
        assert r.mean == double_factorial(r.n - 1)
        assert r.z == r.y * r.mean
        assert r.variance == r.mean * (r.y - r.mean)


def test_moment_exports():
    t = moment_table(8)
    assert t.to_csv().splitlines()[0] == "n,y,z,mean,variance"
    assert t.to_json()["rows"][-1]["z"] == 40425
    assert t.table().splitlines()[-1].split() == ["8", "385", "40425"]


# ---------------------------------------------------------------- matchings


def test_matching_count_examples():
    assert matching_count(6, 3) == 15
    assert matching_count(6, 2) == 45
    for n in range(0, 7):
        assert matching_count(n, 0) == 1
    with pytest.raises(ValueError):
        matching_count(5, 3)


@pytest.mark.parametrize("n", range(1, 9))
def test_matching_count_brute_force(n):
    edges = list(itertools.combinations(range(n), 2))
    for k in range(n // 2 + 1):
        assert matching_count(n, k) == brute_matchings(n, edges, k)


def test_expected_charpoly_examples():
    assert str(expected_charpoly(3)) == "x^3 + 3x"
    assert expected_charpoly(6) == IntPolynomial((15, 0, 45, 0, 15, 0, 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_expected_charpoly_is_enumeration_average(n):
    if n < 2:
        codes = np.zeros(1, dtype=np.int64)
    else:
        free = np.arange(1 << ((n - 1) * (n - 2) // 2), dtype=np.int64)
        codes = ((1 << (n - 1)) - 1) | (free << (n - 1))
    polys = kernels.scan_charpolys(n, codes)
    avg = [Fraction(int(v), len(codes)) for v in polys.sum(axis=0)[::-1]]
    assert avg == [Fraction(c) for c in expected_charpoly(n).coeffs] + [0] * (n + 1 - len(expected_charpoly(n).coeffs))


def test_graph_c4():
    g = GraphSeidel.uniform(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    p = expected_charpoly_graph(g)
    assert p == IntPolynomial((2, 0, 4, 0, 1))
    total = [Fraction(0)] * 5
    for signs in itertools.product((1, -1), repeat=4):
        for d, c in enumerate(char_poly(g.with_signs(signs).to_array()).coeffs):
            total[d] += c
    assert [t / 16 for t in total] == [Fraction(c) for c in p.coeffs]


def test_graph_edgeless():
    for n in range(1, 6):
        assert expected_charpoly_graph(GraphSeidel(n, (), ())) == IntPolynomial.monomial(n)


def test_graph_complete_reduces():
    for n in range(1, 8):
        g = GraphSeidel.uniform(n, itertools.combinations(range(1, n + 1), 2))
        assert expected_charpoly_graph(g) == expected_charpoly(n)


@given(st.integers(2, 7), st.data())
@settings(max_examples=30, deadline=None)
def test_graph_matchings_property(n, data):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    p = expected_charpoly_graph(GraphSeidel.uniform(n, edges))
    for k in range(n // 2 + 1):
        assert p.coefficient(n - 2 * k) == brute_matchings(n, edges, k)
        if n - 2 * k - 1 >= 0:
            assert p.coefficient(n - 2 * k - 1) == 0


# ---------------------------------------------------------------- bounds


def test_root_bound_comparisons():
    r = RootBound(Fraction(125), 2)
    assert 11 < r < 12
    assert not r.is_integral
    assert RootBound(Fraction(81), 4) == 3
    assert RootBound(Fraction(81), 4).is_integral
    assert RootBound(Fraction(9, 4), 2) == Fraction(3, 2)
    assert RootBound(Fraction(8), 6) == RootBound(Fraction(2), 2)
    assert RootBound(Fraction(2), 2) < RootBound(Fraction(2), 1)


def test_bounds_examples():
    b4 = bounds_profile(4)
    assert b4.hadamard_sqrt == 3 and b4.mod2_bound is None
    assert enumerate_dets(4).sqrt_dets[-1] == 3
    b6 = bounds_profile(6)
    assert b6.mod2_bound == 9 and b6.mod2_bound.is_integral
    assert enumerate_dets(6).sqrt_dets[-1] == 9
    b12 = bounds_profile(12)
    assert b12.hadamard_sqrt == 1331 and b12.gap_threshold == 11
    row = reference_detset(12).values
    assert row[-1] == 1331
    assert not any(1331 - 11 < v < 1331 for v in row)
    assert row[-2] == 1089


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12, 14, 26])
def test_bounds_integrality(n):
    b = bounds_profile(n)
    # (n-1)^(n/4) is an integer when 4 | n, and also when n - 1 is a square (n = 10 gives 243)
    square = math.isqrt(n - 1) ** 2 == n - 1
    assert b.hadamard_sqrt.is_integral == (n % 4 == 0 or square)
    assert (b.mod2_bound is not None) == (n % 4 == 2)
    assert b.scm_minor == RootBound(Fraction((n + 1) ** (n - 2)), 4)
    assert float(b.hadamard_sqrt) == pytest.approx((n - 1) ** (n / 4))
    assert float(b.fischer_bound) == pytest.approx((n - 1) ** ((n - 2) / 2) * math.sqrt((n - 1) ** 2 - 4))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_hadamard_vs_enumeration(n):
    top = enumerate_dets(n).sqrt_dets[-1]
    b = bounds_profile(n)
    assert b.hadamard_sqrt >= top
    assert (b.hadamard_sqrt == top) == (n in (4, 8))


def test_within_fischer_is_exact():
    # n = 8: bound^2 = 7^6 * 45 = 5294205, isqrt = 2300
    assert within_fischer(2300, 8)
    assert not within_fischer(2301, 8)
    assert not within_fischer(2401, 8)


def test_bounds_exports():
    b = bounds_profile(12)
    obj = b.to_json()
    assert obj["hadamard_sqrt"]["value"] == 1331
    assert obj["mod2_bound"] is None
    assert "gap_threshold" in b.table()
    assert b.to_csv().splitlines()[0] == "bound,radicand,index,approx"


# ---------------------------------------------------------------- spectra


def test_skew_spectrum(q3):
    lam = skew_spectrum(q3.to_array())
    r3 = math.sqrt(3)
    assert lam == pytest.approx([r3, r3, -r3, -r3])
    sub = skew_spectrum(q3.submatrix([1, 2, 3]).to_array())
    assert sub == pytest.approx([r3, 0, -r3], abs=1e-9)


def test_interlace_examples(q3):
    for a in itertools.combinations(range(1, 5), 3):
        assert interlace_check(q3, a)
    assert interlace_check(q3, range(1, 5))
    with pytest.raises(ValueError):
        interlace_check(q3, [])


def test_interlace_random(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        s = SeidelMatrix(n, int(rng.integers(0, 1 << (n * (n - 1) // 2))))
        a = [v + 1 for v in range(n) if rng.random() < 0.6] or [1]
        assert interlace_check(s, a)


def test_interlace_detects_violation(monkeypatch):
    import seideldet.analysis as an

    real = an.skew_spectrum
    calls = []

    def fake(a):
        calls.append(a.shape[0])
        vals = real(a)
        return vals * (10 if len(calls) == 2 else 1)

    monkeypatch.setattr(an, "skew_spectrum", fake)
    assert not an.interlace_check(transitive(6), [1, 2, 3, 4])


def test_jacobi_examples(q3, q7):
    for v in range(1, 5):
        assert jacobi_factor_check(q3, [v])
        sub = q3.submatrix([u for u in range(1, 5) if u != v])
        assert str(char_poly(sub)) == "x^3 + 3x"
    for a in itertools.combinations(range(1, 9), 2):
        assert jacobi_factor_check(q7, a)


def test_jacobi_complementary_halves(q7):
    for a in itertools.combinations(range(1, 9), 4):
        rest = [v for v in range(1, 9) if v not in a]
        assert char_poly(q7.submatrix(a)) == char_poly(q7.submatrix(rest))
        assert jacobi_factor_check(q7, a)


def test_jacobi_all_subsets_q11_sampled(q11, rng):
    for size in range(0, 13):
        for _ in range(5):
            a = sorted(int(v) + 1 for v in rng.choice(12, size=size, replace=False))
            assert jacobi_factor_check(q11, a)


def test_jacobi_rejects_non_skew_conference():
    with pytest.raises(ValueError):
        jacobi_factor_check(transitive(4), [1])
    with pytest.raises(ValueError):
        scm_minor_check(transitive(4))


def test_scm_minor(q3, q7, q11):
    assert scm_minor_check(q3)
    assert scm_minor_check(q7)
    assert scm_minor_check(q11)


def test_transitive_obstruction_examples():
    assert not transitive_obstruction(100, 2)
    assert transitive_obstruction(8, 20)
    assert math.isclose(1 / math.tan(math.pi / 40), 12.706, rel_tol=1e-3)
    # exact boundary: cot^2(pi/6) = 3 = n - 1 at n = 4
    assert not transitive_obstruction(4, 3)
    assert transitive_obstruction(3, 3)


def test_obstruction_thresholds():
    assert obstruction_threshold(2) == pytest.approx(9.5, abs=0.05)
    assert obstruction_threshold(3) == pytest.approx(21.9, abs=0.05)
    assert obstruction_threshold(4) == pytest.approx(39, abs=0.2)


def test_obstruction_threshold_agrees_with_predicate():
    n2 = obstruction_threshold(2)
    for n in range(4, 60, 2):
        assert transitive_obstruction(n, n // 2) == (n > n2)
    n4 = obstruction_threshold(4)
    for n in range(4, 120, 4):
        assert transitive_obstruction(n, n // 4) == (n > n4)
