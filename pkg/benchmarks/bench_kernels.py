"""Compare the numba and numpy kernel backends on the order-8 scans.

    python3 benchmarks/bench_kernels.py [--codes N] [--repeat R]

The numpy functions are called directly so both backends run in one process.
Outputs are checked for agreement before timings are printed.
"""

import argparse
import time

import numpy as np

from seideldet import kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--codes", type=int, default=1 << 16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    if not kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy backend will run")

    rows = []
    for label, n, nb, np_fn in (
        ("dets n=8", 8, kernels.scan_dets, kernels.scan_dets_np),
        ("charpolys n=8", 8, kernels.scan_charpolys, kernels.scan_charpolys_np),
        ("dets n=10", 10, kernels.scan_dets, kernels.scan_dets_np),
    ):
        codes = rng.integers(0, 1 << (n * (n - 1) // 2), size=args.codes, dtype=np.int64)
        t_np, ref = best_of(lambda: np_fn(n, codes), args.repeat)
        if kernels.HAVE_NUMBA:
            nb(n, codes[:8])  # compile outside the timed region
            t_nb, got = best_of(lambda: nb(n, codes), args.repeat)
            pairs = zip(ref, got) if isinstance(ref, tuple) else [(ref, got)]
            assert all(np.array_equal(a, b) for a, b in pairs), f"backends disagree on {label}"
        else:
            t_nb = float("nan")
        rows.append((label, t_np, t_nb))

    print(f"{'kernel':<16}{'numpy s':>10}{'numba s':>10}{'speedup':>10}   ({args.codes} matrices)")
    for label, t_np, t_nb in rows:
        print(f"{label:<16}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
