"""Exhaustive enumeration of determinant and char-poly sets, certificate search, gaps, sampling."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import isqrt

import numpy as np

from . import kernels
from .constructions import (
    ConstructionCertificate,
    join,
    max_target,
    oriented,
    target_determinant,
    transitive,
)
from .core import SeidelMatrix, reverse_arc
from .exactlinalg import IntPolynomial, determinant, inverse

log = logging.getLogger(__name__)

ENUMERATION_MAX_ORDER = 8
FULL_ENUMERATION_MAX_ORDER = 6
SHARD_SIZE = 1 << 16


@dataclass(frozen=True)
class DetSet:
    """Odd positive square roots of determinants of order-n Seidel matrices found so far."""

    n: int
    values: tuple[int, ...]
    coverage: str
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = tuple(self.values)
        if any(v <= 0 or v % 2 == 0 for v in vals):
            raise ValueError("determinant roots must be odd and positive")
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise ValueError("values must be strictly increasing")
        if self.coverage not in ("exhaustive", "certificates-only", "reference"):
            raise ValueError(f"unknown coverage {self.coverage!r}")
        object.__setattr__(self, "values", vals)

    def __contains__(self, k: int) -> bool:
        return k in set(self.values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    @property
    def maximum(self) -> int:
        return self.values[-1]


@dataclass
class SearchReport:
    n: int
    coverage: str
    sqrt_dets: tuple[int, ...] = ()
    charpolys: tuple[IntPolynomial, ...] = ()
    certificates: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    seed: int | None = None
    duration_ms: float | None = None
    visited: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def gaps(self) -> list[tuple[int, int]]:
        return gap_report(self.sqrt_dets)

    def detset(self) -> DetSet:
        return DetSet(self.n, self.sqrt_dets, self.coverage, dict(self.provenance))

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "coverage": self.coverage,
            "sqrt_dets": list(self.sqrt_dets),
            "gaps": [list(g) for g in self.gaps],
            "certificates": {str(k): v.to_record() for k, v in self.certificates.items()},
            "seed": self.seed,
            "duration_ms": self.duration_ms,
            "visited": self.visited,
        }
        if self.charpolys:
            out["charpolys"] = [p.to_json() for p in self.charpolys]
        out.update(self.extra)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.charpolys:
            w.writerow(["charpoly", "provenance"])
            for p in self.charpolys:
                w.writerow([json.dumps(p.to_json()), self.provenance.get(p, "enumeration")])
        else:
            w.writerow(["value", "provenance"])
            for v in self.sqrt_dets:
                w.writerow([v, self.provenance.get(v, "")])
        return buf.getvalue()


# --------------------------------------------------------------------------
# exhaustive scans
# --------------------------------------------------------------------------


def _free_bits(n: int, full: bool) -> int:
    return n * (n - 1) // 2 if full else max((n - 1) * (n - 2) // 2, 0)


def _codes(n: int, lo: int, hi: int, full: bool) -> np.ndarray:
    g = kernels.gray(np.arange(lo, hi, dtype=np.int64))
    if full or n < 2:
        return g
    return ((1 << (n - 1)) - 1) | (g << (n - 1))


def _shards(total: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + SHARD_SIZE, total)) for lo in range(0, total, SHARD_SIZE)]


def _det_shard(args) -> tuple[dict, int, int]:
    n, lo, hi, full = args
    codes = _codes(n, lo, hi, full)
    dets, sc = kernels.scan_dets(n, codes)
    uniq, inv = np.unique(dets, return_inverse=True)
    counts = np.bincount(inv, minlength=len(uniq))
    mins = np.full(len(uniq), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(mins, inv, codes)
    hist = {int(d): (int(c), int(m)) for d, c, m in zip(uniq, counts, mins)}
    non_sc = dets[~sc]
    return hist, int(sc.sum()), int(non_sc.max()) if non_sc.size else -1


def _charpoly_shard(args) -> dict:
    n, lo, hi, full = args
    codes = _codes(n, lo, hi, full)
    polys = kernels.scan_charpolys(n, codes)
    uniq, inv = np.unique(polys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    mins = np.full(len(uniq), np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(mins, inv, codes)
    return {tuple(int(c) for c in row): int(m) for row, m in zip(uniq, mins)}


def _run(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def _check_enum_order(n: int, full: bool):
    if n > ENUMERATION_MAX_ORDER:
        raise ValueError(f"exhaustive enumeration capped at n={ENUMERATION_MAX_ORDER}")
    if full and n > FULL_ENUMERATION_MAX_ORDER:
        raise ValueError(f"full (non-reduced) enumeration capped at n={FULL_ENUMERATION_MAX_ORDER}")
    if n < 1:
        raise ValueError("n must be positive")


@dataclass(frozen=True)
class DetScan:
    n: int
    full: bool
    histogram: dict  # det -> (count, smallest code attaining it)
    visited: int
    skew_conference_count: int
    max_det_non_skew_conference: int


@lru_cache(maxsize=None)
def _det_scan_cached(n: int, full: bool) -> DetScan:
    return _det_scan(n, full, 1)


def det_scan(n: int, full: bool = False, workers: int = 1) -> DetScan:
    """Histogram of determinants over switching representatives (or all matrices if ``full``)."""
    _check_enum_order(n, full)
    if workers <= 1:
        return _det_scan_cached(n, full)
    return _det_scan(n, full, workers)


def _det_scan(n: int, full: bool, workers: int) -> DetScan:
    total = 1 << _free_bits(n, full)
    parts = _run(_det_shard, [(n, lo, hi, full) for lo, hi in _shards(total)], workers)
    hist: dict[int, list[int]] = {}
    sc_count, max_non_sc = 0, -1
    for h, sc, mx in parts:
        sc_count += sc
        max_non_sc = max(max_non_sc, mx)
        for d, (c, m) in h.items():
            cur = hist.setdefault(d, [0, m])
            cur[0] += c
            cur[1] = min(cur[1], m)
    hist_t = {d: (c, m) for d, (c, m) in sorted(hist.items())}
    return DetScan(n, full, hist_t, total, sc_count, max_non_sc)


def enumerate_dets(n: int, workers: int = 1, full: bool = False) -> SearchReport:
    """Exhaustive D(n) for even n <= 8 over switching representatives."""
    if n % 2:
        raise ValueError("enumerate_dets needs even n (odd orders have det 0)")
    t0 = time.perf_counter()
    scan = det_scan(n, full, workers)
    roots = {}
    for d, (_, code) in scan.histogram.items():
        r = isqrt(d)
        if r * r != d or r % 2 == 0:
            raise AssertionError(f"determinant {d} is not an odd square")
        roots[r] = SeidelMatrix(n, code)
    report = SearchReport(
        n=n,
        coverage="exhaustive",
        sqrt_dets=tuple(sorted(roots)),
        certificates=roots,
        provenance={r: "enumeration" for r in roots},
        duration_ms=round((time.perf_counter() - t0) * 1000, 3),
        visited=scan.visited,
        extra={
            "skew_conference_count": scan.skew_conference_count,
            "max_det_non_skew_conference": scan.max_det_non_skew_conference,
        },
    )
    log.info("enumerated D(%d): %d values over %d matrices", n, len(roots), scan.visited)
    return report


@lru_cache(maxsize=None)
def _charpoly_scan_cached(n: int, full: bool) -> dict:
    return _charpoly_scan(n, full, 1)


def _charpoly_scan(n: int, full: bool, workers: int) -> dict:
    total = 1 << _free_bits(n, full)
    merged: dict[tuple, int] = {}
    for part in _run(_charpoly_shard, [(n, lo, hi, full) for lo, hi in _shards(total)], workers):
        for key, code in part.items():
            merged[key] = min(code, merged.get(key, code))
    return merged


def charpoly_scan(n: int, full: bool = False, workers: int = 1) -> dict:
    """Distinct char polys (highest-degree-first tuples) mapped to the smallest code attaining each."""
    _check_enum_order(n, full)
    if workers <= 1:
        return _charpoly_scan_cached(n, full)
    return _charpoly_scan(n, full, workers)


def enumerate_charpolys(n: int, workers: int = 1, full: bool = False) -> frozenset[IntPolynomial]:
    """CP(n): every char poly of an order-n Seidel matrix, n <= 8."""
    return frozenset(IntPolynomial.from_descending(k) for k in charpoly_scan(n, full, workers))


def charpoly_report(n: int, workers: int = 1, full: bool = False) -> SearchReport:
    t0 = time.perf_counter()
    scan = charpoly_scan(n, full, workers)
    polys = sorted(((IntPolynomial.from_descending(k), code) for k, code in scan.items()), key=lambda pc: pc[0].coeffs)
    return SearchReport(
        n=n,
        coverage="exhaustive",
        charpolys=tuple(p for p, _ in polys),
        certificates={json.dumps(p.to_json()): SeidelMatrix(n, c) for p, c in polys},
        duration_ms=round((time.perf_counter() - t0) * 1000, 3),
        visited=1 << _free_bits(n, full),
    )


def exact_moments(n: int) -> tuple[Fraction, Fraction]:
    """Exact E[det] and E[det^2] over all order-n Seidel matrices (n even, <= 8)."""
    if n % 2:
        raise ValueError("even n required")
    scan = det_scan(n)
    total = sum(c for c, _ in scan.histogram.values())
    s1 = sum(d * c for d, (c, _) in scan.histogram.items())
    s2 = sum(d * d * c for d, (c, _) in scan.histogram.items())
    return Fraction(s1, total), Fraction(s2, total)


# --------------------------------------------------------------------------
# gaps and reference data
# --------------------------------------------------------------------------


def gap_report(d) -> list[tuple[int, int]]:
    """Maximal runs (lo, hi) of odd integers missing between min(d) and max(d)."""
    vals = sorted(set(d))
    gaps = []
    for a, b in zip(vals, vals[1:]):
        if b - a > 2:
            gaps.append((a + 2, b - 2))
    return gaps


def load_fixture(name: str) -> dict:
    if not name.endswith(".json"):
        name += ".json"
    return json.loads(resources.files("seideldet").joinpath("fixtures").joinpath(name).read_text())


def reference_detset(n: int) -> DetSet:
    """The published D(n) row (n <= 12), as shipped in the figure2 fixture."""
    rows = load_fixture("figure2")["rows"]
    vals = rows[str(n)]
    if vals == [0]:
        raise ValueError("odd orders only have determinant 0")
    return DetSet(n, tuple(vals), "reference", {v: "reference" for v in vals})


# --------------------------------------------------------------------------
# local search
# --------------------------------------------------------------------------


def random_seidel(n: int, rng: np.random.Generator) -> SeidelMatrix:
    npairs = n * (n - 1) // 2
    bits = rng.integers(0, 2, size=npairs)
    return SeidelMatrix(n, int(sum(int(b) << i for i, b in enumerate(bits))))


def adjugate(a: np.ndarray, det: int) -> np.ndarray:
    """det * A^-1 as integers; float inverse rounded, then certified by A @ adj == det I."""
    n = a.shape[0]
    adj = np.rint(np.linalg.inv(a.astype(float)) * det).astype(np.int64)
    if not np.array_equal(a @ adj, det * np.eye(n, dtype=np.int64)):
        inv = inverse(a.tolist())
        adj = np.array([[int(v * det) for v in r] for r in inv.entries], dtype=np.int64)
    return adj


def _best_move(a: np.ndarray, det: int) -> tuple[int, int, int] | None:
    """Best improving reversal (i, j, new det), 0-based with s_ij = +1; None at a local maximum."""
    adj = adjugate(a, det)
    n = a.shape[0]
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            # orient so s = +1; the factor uses that entry of the inverse
            v = adj[i, j] if a[i, j] == 1 else adj[j, i]
            m = abs(det + 2 * int(v))
            if m > det and (best is None or m > best[2]):
                best = (i, j, m)
    if best is None:
        return None
    i, j, m = best
    new_det, rem = divmod(m * m, det)
    assert rem == 0
    return i, j, new_det


def climb(s: SeidelMatrix, max_steps: int | None = None) -> tuple[SeidelMatrix, int, int]:
    """Steepest ascent by arc reversals; returns (local max, det, steps used)."""
    a = s.to_array()
    det = determinant(s)
    if det == 0:
        raise ValueError("climbing needs an invertible start")
    steps = 0
    while max_steps is None or steps < max_steps:
        steps += 1
        move = _best_move(a, det)
        if move is None:
            break
        i, j, det = move
        a[i, j], a[j, i] = -a[i, j], -a[j, i]
    return SeidelMatrix.from_array(a), det, steps


DEFAULT_CLIMB_BUDGET = 2000


def hill_climb_max(
    n: int, budget: int = DEFAULT_CLIMB_BUDGET, seed: int = 0, start: SeidelMatrix | None = None
) -> tuple[SeidelMatrix, int]:
    """Greedy determinant ascent with random restarts until ``budget`` steps are spent.

    Each step evaluates every single-arc reversal via the inverse and takes the
    largest improving factor (ties: smallest pair).  The climb in progress when
    the budget runs out is completed, so the result is always a local maximum.
    """
    if n % 2 or n < 2:
        raise ValueError("n must be a positive even integer")
    rng = np.random.default_rng(seed)
    best: tuple[SeidelMatrix, int] | None = None
    used = 0
    first = True
    while used < budget or best is None:
        s0 = start if (first and start is not None) else random_seidel(n, rng)
        first = False
        s, det, steps = climb(s0)
        used += steps
        if best is None or det > best[1]:
            best = (s, det)
        if best[1] == (n - 1) ** (n // 2):
            break
    return best


def is_local_max(s: SeidelMatrix) -> bool:
    det = determinant(s)
    return _best_move(s.to_array(), det) is None


# --------------------------------------------------------------------------
# membership certificates
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _exhaustive_certs(n: int) -> dict[int, SeidelMatrix]:
    return dict(enumerate_dets(n).certificates)


def _known_certificate(m: int, d: int) -> SeidelMatrix | None:
    if m == 2:
        return transitive(2) if d == 1 else None
    if m <= ENUMERATION_MAX_ORDER:
        return _exhaustive_certs(m).get(d)
    if d <= max_target(m - 2):
        return target_determinant(m - 2, d)[0]
    return None


def _walk(n: int, k: int, budget: int, rng: np.random.Generator) -> SeidelMatrix | None:
    """Randomised reversal walk steering sqrt(det) towards k; restarts when stuck."""
    goal = k * k
    used = 0
    while used < budget:
        a = random_seidel(n, rng).to_array()
        det = determinant(a)
        stale = 0
        while used < budget and stale < 4 * n:
            used += 1
            if det == goal:
                return SeidelMatrix.from_array(a)
            adj = adjugate(a, det)
            cand = []
            for i in range(n):
                for j in range(i + 1, n):
                    v = adj[i, j] if a[i, j] == 1 else adj[j, i]
                    m = abs(det + 2 * int(v))
                    nd = m * m // det
                    cand.append((abs(isqrt(nd) - k), i, j, nd))
            dist = abs(isqrt(det) - k)
            best = min(c[0] for c in cand)
            pool = [c for c in cand if c[0] == best] if best < dist else cand
            _, i, j, det = pool[int(rng.integers(len(pool)))]
            a[i, j], a[j, i] = -a[i, j], -a[j, i]
            stale = 0 if best < dist else stale + 1
    return None


def find_membership(
    n: int, k: int, budget: int = 2000, seed: int = 0
) -> tuple[SeidelMatrix, ConstructionCertificate] | None:
    """A matrix of order n with det k^2, or None (no certificate found, not a proof of absence).

    Tries the bordered-transitive construction, then joins of known smaller
    matrices, then a seeded random reversal walk.  For n <= 8 the exhaustive
    set is consulted first, so None there does mean k is not in D(n).
    """
    if n < 2 or n % 2:
        raise ValueError("n must be a positive even integer")
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be a positive odd integer")
    if k > isqrt((n - 1) ** (n // 2)):
        return None
    if n == 2:
        return (transitive(2), ConstructionCertificate("transitive", {"order": 2, "sqrt_det": 1}, {"n": 2})) if k == 1 else None
    if k <= max_target(n - 2):
        return target_determinant(n - 2, k)
    if n <= ENUMERATION_MAX_ORDER:
        s = _exhaustive_certs(n).get(k)
        if s is None:
            return None
        return s, ConstructionCertificate("enumeration", {"order": n, "sqrt_det": k}, {"n": n})
    for a in range(2, n // 2 + 1, 2):
        b = n - a
        for d1 in range(1, k + 1, 2):
            if k % d1:
                continue
            s1 = _known_certificate(a, d1)
            s2 = _known_certificate(b, k // d1) if s1 is not None else None
            if s2 is not None:
                return join(s1, s2), ConstructionCertificate(
                    "join", {"order": n, "sqrt_det": k}, {"n1": a, "n2": b, "sqrt_det1": d1, "sqrt_det2": k // d1}
                )
    s = _walk(n, k, budget, np.random.default_rng(seed))
    if s is None:
        return None
    return s, ConstructionCertificate("walk", {"order": n, "sqrt_det": k}, {"seed": seed, "budget": budget})


def certify_values(n: int, ks, budget: int = 2000, seed: int = 0) -> SearchReport:
    """Certificates-only D(n) restricted to the requested odd values."""
    t0 = time.perf_counter()
    certs, prov = {}, {}
    for k in ks:
        found = find_membership(n, k, budget, seed)
        if found is not None:
            certs[k] = found[0]
            prov[k] = found[1].kind
    return SearchReport(
        n=n,
        coverage="certificates-only",
        sqrt_dets=tuple(sorted(certs)),
        certificates=certs,
        provenance=prov,
        seed=seed,
        duration_ms=round((time.perf_counter() - t0) * 1000, 3),
    )


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloStats:
    n: int
    samples: int
    seed: int
    mean_det: Fraction
    mean_det_sq: Fraction
    stderr_det: float
    stderr_det_sq: float

    def __iter__(self):
        return iter((self.mean_det, self.mean_det_sq))


def monte_carlo_stats(n: int, samples: int, seed: int = 0) -> MonteCarloStats:
    """Empirical E[det], E[det^2] from uniformly random upper triangles.

    Chunk c draws from the c-th child of SeedSequence(seed), so results depend
    only on (n, samples, seed).
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if n % 2 or n < 2:
        raise ValueError("n must be a positive even integer")
    rows, cols = kernels.pair_indices(n)
    nchunks = -(-samples // SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(nchunks)
    hist: dict[int, int] = {}
    for c, child in enumerate(children):
        m = min(SHARD_SIZE, samples - c * SHARD_SIZE)
        bits = np.random.Generator(np.random.PCG64(child)).integers(0, 2, size=(m, len(rows)), dtype=np.int64)
        mats = np.zeros((m, n, n), dtype=np.int64)
        mats[:, rows, cols] = 2 * bits - 1
        mats[:, cols, rows] = 1 - 2 * bits
        uniq, counts = np.unique(kernels.det_batch(mats), return_counts=True)
        for d, k in zip(uniq.tolist(), counts.tolist()):
            hist[d] = hist.get(d, 0) + k
    m1 = Fraction(sum(d * c for d, c in hist.items()), samples)
    m2 = Fraction(sum(d * d * c for d, c in hist.items()), samples)
    m4 = Fraction(sum(d**4 * c for d, c in hist.items()), samples)
    var1 = float(m2 - m1 * m1) * samples / max(samples - 1, 1)
    var2 = float(m4 - m2 * m2) * samples / max(samples - 1, 1)
    return MonteCarloStats(n, samples, seed, m1, m2, (var1 / samples) ** 0.5, (var2 / samples) ** 0.5)
