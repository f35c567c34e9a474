import csv
import json
import subprocess
import sys

import pytest

from durrmeyer.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bd_kernel_pair_json(capsys):
    code, out, _ = run(capsys, "bd-kernel", "--orders", "1,1", "--repr", "pair", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["coefficients"] == [["4/3", "-2/3"], ["-2/3", "4/3"]]
    assert data["provenance"] == "pair_closed"


def test_bd_kernel_representations_agree(capsys):
    payloads = {}
    for rep in ("general", "oracle", "product"):
        code, out, _ = run(capsys, "bd-kernel", "--orders", "1,2,1,3", "--repr", rep)
        assert code == 0
        payloads[rep] = json.loads(out)["coefficients"]
    assert payloads["general"] == payloads["oracle"] == payloads["product"]


def test_bd_kernel_direct_csv(tmp_path, capsys):
    path = tmp_path / "k3.csv"
    code, _, _ = run(capsys, "bd-kernel", "--orders", "3", "--repr", "direct", "--format", "csv", "--output", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 16
    assert rows[0] == {"x_power": "0", "y_power": "0", "coefficient": "4/1"}


@pytest.mark.parametrize("argv", [
    ["bd-kernel", "--orders", "1,2", "--repr", "triple"],
    ["bd-kernel", "--orders", "a,b"],
    ["bd-kernel", "--orders", "1", "--repr", "nope"],
    ["coeffs"],
    ["smd-verify", "--orders", "-1,2"],
    ["smd-verify", "--orders=-1,2"],
    ["smd-verify", "--orders", "2,3", "--grid", "6by6"],
    ["bd-verify", "--max", "-1"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_coeffs_text(capsys):
    assert run(capsys, "coeffs", "--iterate", "1", "2")[1] == "2/3, 1/3\n"
    assert run(capsys, "coeffs", "--orders", "5")[1] == "0, 0, 0, 0, 0, 1\n"


def test_coeffs_json_and_mass(capsys):
    from fractions import Fraction

    from durrmeyer.bd_ops import kernel_general_closed

    code, out, _ = run(capsys, "coeffs", "--orders", "2,3,4,5", "--format", "json", "--seed", "3")
    assert code == 0
    c = [Fraction(v) for v in json.loads(out)["c"]]
    # each K_k has unit row integral, so the coefficients sum to 1
    assert sum(c) == 1
    assert kernel_general_closed([2, 3, 4, 5]).conserves_mass()


def test_bd_verify_pair_suite(capsys):
    code, out, _ = run(capsys, "bd-verify", "--max", "6", "--suite", "pair")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "pass"
    assert len(report["checks"]) == 49 * 4
    assert set(report) >= {"command", "inputs", "status", "checks", "seconds"}
    assert {c["mode"] for c in report["checks"]} == {"exact"}


def test_bd_verify_matrix_and_trivial(capsys):
    assert run(capsys, "bd-verify", "--max", "12", "--suite", "matrix")[0] == 0
    code, out, _ = run(capsys, "bd-verify", "--max", "0")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_reports_are_deterministic(capsys):
    outs = {run(capsys, "bd-verify", "--max", "3", "--no-timing")[1] for _ in range(2)}
    assert len(outs) == 1
    outs = {run(capsys, "bd-kernel", "--orders", "2,3,1", "--repr", "triple")[1] for _ in range(2)}
    assert len(outs) == 1


def test_smd_verify_pair(tmp_path, capsys):
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    code, _, _ = run(capsys, "smd-verify", "--orders", "2,3", "--grid", "6x6", "--xmax", "2",
                     "--tol", "1e-8", "--output", str(js), "--csv", str(cs))
    assert code == 0
    report = json.loads(js.read_text())
    assert report["status"] == "pass"
    assert report["grid"]["target_index"] == pytest.approx(1.2)
    assert len(report["checks"]) == 36 and {c["mode"] for c in report["checks"]} == {"tol"}
    rows = list(csv.reader(cs.open()))
    assert rows[0] == ["x", "y", "lhs", "rhs", "abs_error"]
    assert len(rows) == 37
    assert float(rows[1][2]) == float(repr(float(rows[1][2])))


def test_smd_verify_triple(capsys):
    code, out, _ = run(capsys, "smd-verify", "--orders", "2,2,2", "--tol", "1e-7")
    assert code == 0
    assert json.loads(out)["grid"]["target_index"] == pytest.approx(2 / 3)


def test_smd_verify_failure_exit_1(capsys):
    code, out, _ = run(capsys, "smd-verify", "--orders", "2,3", "--grid", "2x2", "--tol", "1e-30")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_smd_verify_nonconvergence_exit_3(capsys, monkeypatch):
    import durrmeyer.quadrature as q

    def boom(*a, **k):
        raise q.ConvergenceFailure("forced")

    monkeypatch.setattr("durrmeyer.cli.verify_theorem8", boom)
    code, out, _ = run(capsys, "smd-verify", "--orders", "2,3")
    assert code == 3
    assert json.loads(out)["status"] == "error"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "durrmeyer", "coeffs", "--orders", "1,1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == "2/3, 1/3\n"
