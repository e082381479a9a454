"""Command-line front end: ``seideldet <command> ...``.

Exit codes: 0 success, 1 usage or parameter error, 2 ``--expect`` mismatch,
3 internal invariant violation (failed ``--verify`` or ``verify`` suite).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from math import isqrt
from pathlib import Path

import numpy as np

from . import analysis, search, suites
from .constructions import CONSTRUCTIONS, construct
from .core import read_records

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_INVARIANT = 0, 1, 2, 3

log = logging.getLogger("seideldet")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def run_config(args) -> dict:
    """Everything that determines the output; worker count and output path deliberately excluded."""
    skip = {"func", "workers", "out", "verbose", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (1 << 63))
        log.info("no --seed given; using %d", args.seed)
    return args.seed


def load_expectation(path: str) -> dict:
    p = Path(path)
    if p.exists():
        return json.loads(p.read_text())
    try:
        return search.load_fixture(p.name)
    except FileNotFoundError:
        raise UsageError(f"fixture not found: {path}") from None


def polys_match(n: int, polys, fixture: dict) -> bool:
    if "degrees" in fixture:
        if fixture.get("n") != n:
            raise UsageError(f"fixture describes order {fixture.get('n')}, not {n}")
        degs = fixture["degrees"]
        got = {tuple(p.coefficient(d) for d in degs) for p in polys}
        want = {tuple(t) for t in fixture["tuples"]}
        return got == want and len(polys) == len(want)
    rows = fixture["rows"]
    if str(n) not in rows:
        raise UsageError(f"fixture has no row for n={n}")
    return {p.coeffs for p in polys} == {tuple(c) for c in rows[str(n)]}


def dets_match(n: int, values, fixture: dict) -> bool:
    rows = fixture.get("rows", {})
    if str(n) not in rows or not all(isinstance(v, int) for v in rows[str(n)]):
        raise UsageError(f"fixture has no determinant row for n={n}")
    return list(values) == rows[str(n)]


def _add_common(p, *, seed=False, budget=False, fmt="json"):
    p.add_argument("--format", choices=("json", "csv", "table"), default=fmt)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    if seed:
        p.add_argument("--seed", type=int, help="RNG seed (recorded in the report; random if omitted)")
    if budget:
        p.add_argument("--budget", type=int, default=2000)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.n is None:
        raise UsageError("-n is required")
    if args.dets:
        report = search.enumerate_dets(args.n, workers=args.workers)
    else:
        report = search.charpoly_report(args.n, workers=args.workers)
    if not args.timing:
        report.duration_ms = None
    if args.format == "json":
        out = report.to_json()
        out["config"] = run_config(args)
        text = dump(out)
    elif args.format == "csv":
        text = report.to_csv()
    elif args.dets:
        gaps = "; ".join(str(a) if a == b else f"{a}-{b}" for a, b in report.gaps) or "none"
        text = (
            f"n = {report.n}  ({report.coverage}, {report.visited} representatives)\n"
            f"sqrt det: {', '.join(map(str, report.sqrt_dets))}\n"
            f"gaps: {gaps}"
        )
    else:
        text = f"n = {report.n}: {len(report.charpolys)} char polys\n" + "\n".join(map(str, report.charpolys))
    emit(args, text)
    if args.expect:
        fixture = load_expectation(args.expect)
        ok = dets_match(args.n, report.sqrt_dets, fixture) if args.dets else polys_match(args.n, report.charpolys, fixture)
        if not ok:
            print(f"mismatch against {args.expect}", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_construct(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "k", "p", "i", "j") if getattr(args, k) is not None}
    inputs = []
    if args.name in ("join", "border", "reversal"):
        inputs = read_records(sys.stdin)
    try:
        s, cert = construct(args.name, *inputs, **params)
    except KeyError as e:
        raise UsageError(f"construction {args.name} needs parameter {e.args[0]}") from None
    lines = [s.to_json(), dump({"certificate": cert.to_json()})]
    if args.format == "table":
        emit(args, f"{s}\n{dump(cert.to_json())}")
    else:
        emit(args, "\n".join(lines))
    if args.verify and not cert.verify(s):
        print(f"certificate check failed: {dump(cert.to_json())}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_stats(args) -> int:
    table = analysis.moment_table(args.max_n)
    if args.format == "json":
        emit(args, dump({**table.to_json(), "config": run_config(args)}))
    elif args.format == "csv":
        emit(args, table.to_csv())
    else:
        emit(args, table.table())
    return EXIT_OK


def cmd_bounds(args) -> int:
    b = analysis.bounds_profile(args.n)
    if args.format == "json":
        emit(args, dump({**b.to_json(), "config": run_config(args)}))
    elif args.format == "csv":
        emit(args, b.to_csv())
    else:
        emit(args, b.table())
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    seed = resolve_seed(args)
    res = suites.run_suite(args.suite, n=args.n, trials=args.budget, seed=seed)
    if args.format == "json":
        emit(args, dump({**res.to_json(), "config": run_config(args)}))
    else:
        status = "PASS" if res.passed else "FAIL"
        emit(args, f"{status} {res.suite}: {res.checked} checks, {len(res.violations)} violations")
    return EXIT_OK if res.passed else EXIT_INVARIANT


def cmd_hillclimb(args) -> int:
    seed = resolve_seed(args)
    s, det = search.hill_climb_max(args.n, budget=args.budget, seed=seed)
    out = {"n": args.n, "det": det, "matrix": s.to_record(), "seed": seed, "config": run_config(args)}
    emit(args, dump(out) if args.format != "table" else f"{s}\ndet = {det}")
    return EXIT_OK


def cmd_membership(args) -> int:
    seed = resolve_seed(args)
    if args.k is not None:
        ks = [args.k]
    else:
        top = isqrt((args.n - 1) ** (args.n // 2))
        ks = range(1, top + 1, 2)
    report = search.certify_values(args.n, ks, budget=args.budget, seed=seed)
    if not args.timing:
        report.duration_ms = None
    if args.format == "json":
        out = report.to_json()
        out["config"] = run_config(args)
        emit(args, dump(out))
    elif args.format == "csv":
        emit(args, report.to_csv())
    else:
        missing = [k for k in ks if k not in report.certificates]
        emit(args, f"n = {args.n}  certified: {', '.join(map(str, report.sqrt_dets))}\nno certificate: {', '.join(map(str, missing)) or 'none'}")
    return EXIT_OK


def cmd_sample(args) -> int:
    seed = resolve_seed(args)
    st = search.monte_carlo_stats(args.n, args.samples, seed)
    out = {
        "n": st.n,
        "samples": st.samples,
        "seed": st.seed,
        "mean_det": float(st.mean_det),
        "mean_det_sq": float(st.mean_det_sq),
        "stderr_det": st.stderr_det,
        "stderr_det_sq": st.stderr_det_sq,
        "config": run_config(args),
    }
    if args.format == "table":
        emit(args, analysis.format_table(("quantity", "value"), [(k, str(out[k])) for k in list(out)[:7]]))
    else:
        emit(args, dump(out))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seideldet", description="Determinant sets and char polys of tournament Seidel matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="exhaustive D(n) or CP(n) for n <= 8")
    kind = e.add_mutually_exclusive_group(required=True)
    kind.add_argument("--dets", action="store_true")
    kind.add_argument("--charpolys", action="store_true")
    e.add_argument("-n", type=int, required=True)
    e.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    e.add_argument("--expect", help="fixture JSON to compare against (exit 2 on mismatch)")
    e.add_argument("--timing", action="store_true", help="include wall-clock duration in the report")
    _add_common(e)
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("construct", help="build a matrix with a certificate")
    c.add_argument("name", choices=CONSTRUCTIONS)
    for flag in ("-n", "-k", "-p", "-i", "-j"):
        c.add_argument(flag, type=int)
    c.add_argument("--verify", action="store_true", help="recompute the certificate claim (exit 3 on mismatch)")
    _add_common(c)
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("stats", help="moment table: y_n, z_n, mean and variance of det")
    s.add_argument("--max-n", type=int, default=14)
    _add_common(s, fmt="table")
    s.set_defaults(func=cmd_stats)

    b = sub.add_parser("bounds", help="determinant bounds for order n")
    b.add_argument("-n", type=int, required=True)
    _add_common(b, fmt="table")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run a named invariant suite")
    v.add_argument("suite", help=", ".join(suites.SUITES))
    v.add_argument("-n", type=int, default=8)
    _add_common(v, seed=True, budget=True, fmt="table")
    v.set_defaults(func=cmd_verify, budget=200)

    h = sub.add_parser("hillclimb", help="greedy determinant ascent with restarts")
    h.add_argument("-n", type=int, required=True)
    _add_common(h, seed=True, budget=True)
    h.set_defaults(func=cmd_hillclimb)

    m = sub.add_parser("membership", help="certificates for sqrt det values at order n")
    m.add_argument("-n", type=int, required=True)
    m.add_argument("-k", type=int, help="a single odd value (default: every odd value up to the Hadamard bound)")
    m.add_argument("--timing", action="store_true")
    _add_common(m, seed=True, budget=True)
    m.set_defaults(func=cmd_membership)

    r = sub.add_parser("sample", help="Monte Carlo mean of det and det^2")
    r.add_argument("-n", type=int, required=True)
    r.add_argument("--samples", type=int, default=100_000)
    _add_common(r, seed=True)
    r.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as e:
        print(f"seideldet {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
