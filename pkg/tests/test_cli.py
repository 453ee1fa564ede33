import csv
import io
import json
import math
import subprocess
import sys

import pytest

from parabose import algebra, cli, polynomials


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def lines(out):
    return [json.loads(line) for line in out.splitlines() if line]


@pytest.mark.parametrize(
    "argv, coeffs",
    [
        (["poly", "hermite", "--n", "2", "--p", "2"], ["-4/1", "0/1", "4/1"]),
        (["poly", "legendre", "--n", "1", "--p", "5"], ["0/1", "1/1"]),
        (["poly", "hermite", "--n", "0", "--p", "1"], ["1/1"]),
        (["poly", "legendre", "--n", "2", "--p", "3", "--method", "rodrigues"], ["-3/2", "0/1", "5/2"]),
    ],
)
def test_poly_golden(capsys, argv, coeffs):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    (rec,) = lines(out)
    assert list(rec) == ["p", "n", "family", "coeffs"]
    assert rec["coeffs"] == coeffs


def test_poly_rational_order(capsys):
    code, out, _ = run(capsys, "poly", "hermite", "--n", "1", "--p", "3/2")
    assert code == 0 and lines(out)[0]["p"] == "3/2"


@pytest.mark.parametrize(
    "argv",
    [
        ["poly", "chebyshev", "--n", "2"],
        ["poly", "hermite", "--n", "-1"],
        ["poly", "hermite", "--n", "2", "--p", "0"],
        ["verify", "--scope", "nonsense"],
        ["verify", "--p", "1,x"],
        ["norms", "--tol", "-1"],
        ["propagator", "--z", "1+"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_norms_rows(capsys):
    code, out, _ = run(capsys, "norms", "--p", "3", "--r", "0.5", "--nmax", "12")
    assert code == 0
    rows = lines(out)
    assert float(rows[0]["closed_form"]) == 1.0
    assert float(rows[1]["closed_form"]) == pytest.approx(3 * math.cosh(0.5) ** 2, rel=1e-15)
    assert all(float(r["rel_diff"]) < 1e-8 for r in rows)
    assert len(rows[1]["closed_form"].replace(".", "").lstrip("0")) >= 16


def test_state_command(capsys):
    code, out, _ = run(capsys, "state", "--n", "3", "--r", "0.4", "--p", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert max(float(r["abs_diff"]) for r in rows) < 1e-8


def test_state_without_auto_dim_reports_truncation(capsys):
    code, _, err = run(capsys, "state", "--n", "10", "--r", "1.0", "--no-auto-dim")
    assert code == 2
    assert "N >=" in err


def test_propagator_default_grid(capsys):
    code, out, _ = run(capsys, "propagator", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(cli.amplifier.CSV_COLUMNS)
    assert len(rows) == 27
    assert max(float(r["abs_diff"]) for r in rows) < 1e-6
    at_start = [r for r in rows if float(r["t"]) == 0.0]
    assert max(float(r["abs_diff"]) for r in at_start) < 1e-10


def test_propagator_ordinary_limit_self_consistent(capsys):
    args = ("propagator", "--p", "1", "--z", "0.3", "--z0", "0.5j", "--t", "0,1")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_determinism_and_header(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["verify", "--scope", "polynomials", "--format", "csv", "--out", str(path)]) in (0,)
    assert a.read_bytes() == b.read_bytes()
    assert not a.read_text().startswith("#")
    cli.main(["poly", "hermite", "--n", "3", "--header", "--out", str(a)])
    first, second = a.read_text().splitlines()
    assert "parabose" in json.loads(first)["header"]
    assert json.loads(second)["family"] == "hermite"
    capsys.readouterr()


def test_config_file_overridden_by_flags(tmp_path, capsys):
    conf = tmp_path / "run.cfg"
    conf.write_text("# defaults for a table\nn = 3\np = 5\nformat = csv\n")
    code, out, _ = run(capsys, "poly", "legendre", "--config", str(conf), "--p", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["p"] for r in rows} == {"1/1"}
    assert [r["coeff"] for r in rows] == ["0/1", "-3/2", "0/1", "5/2"]


def test_bad_config_is_usage_error(tmp_path, capsys):
    conf = tmp_path / "bad.cfg"
    conf.write_text("no equals sign here\n")
    code, _, _ = run(capsys, "poly", "hermite", "--n", "1", "--config", str(conf))
    assert code == 2


def test_verify_scopes_pass(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "polynomials", "--p", "1,2,3", "--nmax", "15")
    assert code == 0
    rows = lines(out)
    assert {r["status"] for r in rows} == {"pass"}
    code, out, _ = run(capsys, "verify", "--scope", "squeeze", "--p", "2", "--r", "0.5", "--dim", "64")
    assert code == 0
    assert {"disentangling", "excitation-norms", "squeezed-number-states"} <= {r["anchor"] for r in lines(out)}


def test_verify_fault_injection_names_anchor(capsys, monkeypatch):
    real = algebra.bracket
    monkeypatch.setattr(algebra, "bracket", lambda n, p: real(n, p) + (1 if n == 5 else 0))
    code, out, err = run(capsys, "verify", "--scope", "algebra")
    assert code == 1
    failed = {r["anchor"] for r in lines(out) if r["status"] == "fail"}
    assert "trilinear-relations" in failed
    assert "FAIL [trilinear-relations]" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "parabose", "poly", "hermite", "--n", "1"],
                          capture_output=True, text=True, check=False)  # fmt: skip
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coeffs"] == ["0/1", "2/1"]
