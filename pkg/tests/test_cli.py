import json
import subprocess
import sys

import numpy as np
import pytest

from seideldet.cli import main
from seideldet.core import SeidelMatrix
from seideldet.exactlinalg import IntPolynomial, char_poly, determinant


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def cli(*argv, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "seideldet", *argv], input=stdin, capture_output=True, text=True
    )


def test_enumerate_dets(capsys):
    code, out, _ = run(capsys, "enumerate", "--dets", "-n", "6", "--workers", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["sqrt_dets"] == [1, 3, 5, 7, 9]
    assert rep["gaps"] == []
    assert rep["visited"] == 1024
    assert rep["config"]["n"] == 6


def test_enumerate_expect_fixture(capsys):
    code, _, _ = run(capsys, "enumerate", "--charpolys", "-n", "7", "--expect", "fixtures/fig5.json")
    assert code == 0
    code, _, _ = run(capsys, "enumerate", "--dets", "-n", "8", "--expect", "fixtures/figure2.json")
    assert code == 0
    code, _, _ = run(capsys, "enumerate", "--charpolys", "-n", "6", "--expect", "fig4.json")
    assert code == 0


def test_enumerate_expect_mismatch(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": {"6": [1, 3, 5, 7]}}))
    code, _, err = run(capsys, "enumerate", "--dets", "-n", "6", "--expect", str(bad))
    assert code == 2
    assert "mismatch" in err


def test_enumerate_cap(capsys):
    code, _, err = run(capsys, "enumerate", "--dets", "-n", "10")
    assert code == 1
    assert "exhaustive enumeration capped at n=8" in err


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["enumerate", "-n", "6"])
    assert e.value.code == 1
    code, _, _ = run(capsys, "construct", "target-det", "-n", "8", "-k", "35")
    assert code == 1
    code, _, err = run(capsys, "construct", "target-det", "-n", "8")
    assert code == 1 and "needs parameter" in err


def test_construct_target_det(capsys):
    code, out, _ = run(capsys, "construct", "target-det", "-n", "8", "-k", "17", "--verify")
    assert code == 0
    rec, cert = (json.loads(line) for line in out.splitlines())
    s = SeidelMatrix.from_record(rec)
    assert s.order == 10 and determinant(s) == 289
    assert cert["certificate"]["claim"]["sqrt_det"] == 17


def test_construct_pipeline():
    first = cli("construct", "residue", "-p", "7")
    assert first.returncode == 0
    second = cli("construct", "border", "--verify", stdin=first.stdout)
    assert second.returncode == 0, second.stderr
    rec = json.loads(second.stdout.splitlines()[0])
    s = SeidelMatrix.from_record(rec)
    a = s.to_array()
    assert s.order == 8
    assert np.array_equal(a @ a.T, 7 * np.eye(8, dtype=np.int64))


def test_construct_hc1(capsys):
    code, out, _ = run(capsys, "construct", "hc1", "-k", "5", "--verify")
    assert code == 0
    s = SeidelMatrix.from_record(json.loads(out.splitlines()[0]))
    assert s.order == 11
    assert char_poly(s).divmod_monic(IntPolynomial((19, 0, 1)))[1] == IntPolynomial((0,))


def test_construct_verify_failure(capsys, monkeypatch):
    from seideldet.constructions import ConstructionCertificate

    monkeypatch.setattr(ConstructionCertificate, "verify", lambda self, s: False)
    code, _, err = run(capsys, "construct", "hc1", "-k", "2", "--verify")
    assert code == 3
    assert "certificate check failed" in err


def test_stats_table(capsys):
    code, out, _ = run(capsys, "stats", "--max-n", "14")
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.split()[0] == "14"
    assert last.endswith("107250027885")


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "-n", "12")
    assert code == 0
    rows = {line.split()[0]: line.split()[1] for line in out.splitlines()[3:]}
    assert rows["hadamard_sqrt"] == "1331"
    assert rows["gap_threshold"] == "11"
    code, out, _ = run(capsys, "bounds", "-n", "12", "--format", "json")
    assert json.loads(out)["hadamard_sqrt"]["value"] == 1331


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "moments", "-n", "8")
    assert code == 0 and out.startswith("PASS")
    for suite in ("pfaffian-square", "join-mult", "reversal-formula", "interlace"):
        code, out, _ = run(capsys, "verify", suite, "-n", "6", "--seed", "3", "--budget", "30")
        assert code == 0, out
    code, out, _ = run(capsys, "verify", "jacobi", "--seed", "1", "--budget", "10", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 1
    assert "unknown suite" in err


def test_verify_violation_exit_code(capsys, monkeypatch):
    import seideldet.suites as su

    monkeypatch.setattr(su, "bareiss_det", lambda rows: -1)
    code, out, _ = run(capsys, "verify", "pfaffian-square", "-n", "4", "--seed", "0", "--budget", "3")
    assert code == 3 and out.startswith("FAIL")


def test_reports_byte_identical(capsys):
    outs = [run(capsys, "enumerate", "--dets", "-n", "8", "--workers", w)[1] for w in ("1", "2")]
    assert outs[0] == outs[1]
    a = run(capsys, "hillclimb", "-n", "8", "--seed", "5")[1]
    b = run(capsys, "hillclimb", "-n", "8", "--seed", "5")[1]
    assert a == b
    assert json.loads(a)["seed"] == 5


def test_auto_seed_recorded(capsys):
    code, out, _ = run(capsys, "hillclimb", "-n", "4", "--budget", "5")
    rep = json.loads(out)
    assert code == 0 and isinstance(rep["seed"], int)
    assert rep["config"]["seed"] == rep["seed"]


def test_membership_and_sample(capsys):
    code, out, _ = run(capsys, "membership", "-n", "10", "-k", "33", "--seed", "0")
    rep = json.loads(out)
    assert code == 0 and rep["sqrt_dets"] == [33] and rep["coverage"] == "certificates-only"
    code, out, _ = run(capsys, "membership", "-n", "8", "--seed", "0", "--format", "table")
    assert "no certificate: 29, 37, 39, 41, 43, 45, 47" in out
    code, out, _ = run(capsys, "sample", "-n", "2", "--samples", "100", "--seed", "1")
    assert code == 0 and json.loads(out)["mean_det"] == 1.0


def test_out_and_csv(capsys, tmp_path):
    target = tmp_path / "d8.csv"
    code, out, _ = run(capsys, "enumerate", "--dets", "-n", "8", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "value,provenance" and lines[-1] == "49,enumeration"


def test_console_entry_point():
    r = cli("bounds", "-n", "4")
    assert r.returncode == 0
    assert "hadamard_sqrt" in r.stdout
