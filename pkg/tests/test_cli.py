import csv
import json
import math

import pytest

from foliation_lab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_invariant_weighted(capsys):
    code, out = run(capsys, "invariant", "--a1", "2", "--a2", "1")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["schema"] == 1
    assert rep["invariant"] == pytest.approx(-59.2176, abs=1e-4)
    assert rep["closed_form"] == pytest.approx(-6 * math.pi ** 2)
    assert rep["abs_difference"] <= 1e-8


def test_invariant_round(capsys):
    code, out = run(capsys, "invariant", "--a1", "1", "--a2", "1")
    assert code == EXIT_OK
    assert abs(json.loads(out)["invariant"]) <= 1e-10


def test_invariant_with_factor_and_profile(capsys, tmp_path):
    path = tmp_path / "R.csv"
    code, out = run(capsys, "invariant", "--a1", "2", "--a2", "1", "--u-coeffs", "0,0.3,-0.3", "--csv", str(path))
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["invariant"] == pytest.approx(-6 * math.pi ** 2, rel=1e-8)
    assert rep["config"]["u_coeffs"] == [0, 0.3, -0.3]
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "value"] and len(rows) == 129


def test_usage_errors(capsys):
    assert main(["invariant", "--a1", "-1"]) == EXIT_USAGE
    assert main(["verify", "--nodes", "4"]) == EXIT_USAGE
    assert main(["sweep", "--trials", "0"]) == EXIT_USAGE
    assert main(["invariant", "--u-coeffs", "a,b"]) == EXIT_USAGE
    assert main(["bogus"]) == EXIT_USAGE
    capsys.readouterr()


def test_verify_default(capsys, tmp_path):
    path = tmp_path / "verify.json"
    code, out = run(capsys, "verify", "--json", str(path))
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["passed"] is True
    assert len(rep["checks"]) >= 10
    assert all(c["measured"] <= c["bound"] for c in rep["checks"])
    assert path.read_text() == out
    assert rep["config"]["nodes"] == 128 and rep["config"]["seed"] == 42 and rep["config"]["trials"] == 25


def test_verify_coarse_grid_fails(capsys):
    code, out = run(capsys, "verify", "--nodes", "8", "--trials", "3")
    rep = json.loads(out)
    assert code == EXIT_FAIL
    assert not rep["passed"]
    assert any(not c["passed"] for c in rep["checks"])


def test_sweep_reproducible(capsys):
    _, a = run(capsys, "sweep", "--trials", "4", "--nodes", "64", "--seed", "9")
    _, b = run(capsys, "sweep", "--trials", "4", "--nodes", "64", "--seed", "9")
    assert a == b
    rep = json.loads(a)
    assert rep["report"]["trials"] == 4 and len(rep["report"]["samples"]) == 4


def test_flow_round_converges(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, out = run(capsys, "flow", "--a1", "1", "--a2", "1", "--seed", "1", "--csv", str(path))
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["summary"]["termination"] == "converged"
    assert rep["config"]["nodes"] == 32
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["step", "J2", "sup_residual", "r", "invariant"]


def test_flow_weighted_step_limit(capsys):
    code, out = run(capsys, "flow", "--a1", "2", "--a2", "1", "--max-steps", "400")
    s = json.loads(out)["summary"]
    assert code == EXIT_OK
    assert s["termination"] == "step-limit"
    assert s["final_sup_residual"] > 0.1
    assert s["invariant_max_abs_drift"] <= 1e-6 * abs(s["invariant_closed"])


def test_flow_huge_step(capsys):
    code, out = run(capsys, "flow", "--dt", "10", "--max-steps", "50")
    assert code == EXIT_OK
    assert json.loads(out)["summary"]["termination"] == "diverged"


def test_sphere_suites(capsys):
    code, out = run(capsys, "sphere", "--trials", "5")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert {c["name"] for c in rep["checks"]} == {"bourguignon_ezin_S2", "bourguignon_ezin_S3", "kazdan_warner_S2", "gauss_bonnet_S2"}
    code, out = run(capsys, "sphere", "--trials", "3", "--dim", "3")
    assert [c["name"] for c in json.loads(out)["checks"]] == ["bourguignon_ezin_S3"]
