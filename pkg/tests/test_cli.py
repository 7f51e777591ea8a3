import json
import math
import subprocess
import sys

import numpy as np
import pytest

from skge import cli
from skge.bvp_solver import GridSpec, solve_strip
from skge.boundary import gaussian
from skge.fields import FieldGrid


def run(*args):
    return cli.main(list(args))


def test_kernel_csv(tmp_path, caplog):
    out = tmp_path / "k.csv"
    code = run("kernel", "--grid=-1,1,3,0,1,2", "--r", "1", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,value,err_est"
    assert len(lines) == 7
    assert lines[2] == "0,0,nan,nan"  # the singular corner
    assert "singular" in caplog.text


def test_kernel_values_and_digits(tmp_path):
    out = tmp_path / "k.csv"
    assert run("kernel", "--grid=0.5,0.5,1,1,1,1", "--r", "1", "--tol", "1e-12",
               "--out", str(out)) == 0
    x, y, v, e = out.read_text().splitlines()[1].split(",")
    assert float(v) == pytest.approx(0.14014282251452976, abs=1e-12)
    assert v == format(float(v), ".17g")


@pytest.mark.parametrize("rep", ["series", "integral", "j1"])
def test_kernel_representations(tmp_path, rep):
    out = tmp_path / "k.csv"
    assert run("kernel", "--grid=0.5,1.5,3,1,2,2", "--r", "0.5", "--rep", rep,
               "--out", str(out)) == 0
    F = cli.read_csv_field(out)
    assert np.all(F.values > 0)


def test_solve_round_trip(tmp_path):
    out = tmp_path / "s.csv"
    assert run("solve", "--grid=-1,1,5,0,3.141592653589793,5", "--r", "1",
               "--boundary", "gaussian:mu=0,sigma=1", "--tol", "1e-10", "--out", str(out)) == 0
    F = cli.read_csv_field(out)
    ref = solve_strip(gaussian(), None, GridSpec(-1, 1, 5, 0, math.pi, 5), 1.0, tol=1e-10)
    np.testing.assert_array_equal(F.values, ref.values)


def test_solve_json(tmp_path):
    out = tmp_path / "s.json"
    assert run("solve", "--grid=-1,1,3,0.5,2,2", "--domain", "halfplane", "--r", "0.5",
               "--boundary", "step", "--coeffs", "drift_x", "--format", "json",
               "--out", str(out)) == 0
    data = json.loads(out.read_text())
    assert len(data["values"]) == 2 and len(data["values"][0]) == 3
    assert data["partial"] is False


@pytest.mark.parametrize("args", [
    ("solve", "--grid=-1,1,3,0,1,2", "--boundary", "nope"),
    ("solve", "--grid=-1,1,3,0,1", "--boundary", "step"),
    ("solve", "--grid=-1,1,3,0,1,2", "--boundary", "step", "--coeffs", "1,1,1.5,0,0"),
    ("solve", "--grid=-1,1,3,0,4,2", "--boundary", "step"),
])
def test_config_errors_exit_2(args):
    assert run(*args) == 2


def test_bad_tolerance_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("solve", "--grid=-1,1,3,0,1,2", "--boundary", "step", "--tol", "-1")
    assert exc.value.code == 2


def test_accuracy_shortfall_exit_3(tmp_path):
    out = tmp_path / "s.csv"
    code = run("solve", "--grid=-1,1,3,0.5,1,2", "--domain", "halfplane", "--r", "0",
               "--boundary", "cosine:a=1", "--out", str(out))
    assert code == 3
    # the field is still written; its error column shows the shortfall
    F = cli.read_csv_field(out)
    assert F.shape == (2, 3)
    assert np.all(F.err_estimates > 1e-9)


def test_verify_suite(tmp_path):
    out = tmp_path / "v.json"
    assert run("verify", "--suite", "g3914", "--out", str(out)) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and len(data["suites"]["g3914"]["reports"]) == 6


def test_csv_nan_formatting(tmp_path):
    F = FieldGrid(np.array([0.0, 1.0]), np.array([0.5]), np.array([[np.nan, 0.1]]),
                  np.array([[np.nan, 0.0]]))
    text = cli.field_to_csv(F)
    assert text.splitlines()[1] == "0,0.5,nan,nan"
    p = tmp_path / "f.csv"
    p.write_text(text)
    G = cli.read_csv_field(p)
    assert math.isnan(G.values[0, 0]) and G.values[0, 1] == 0.1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "skge", "verify", "--suite", "g3914"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["passed"]
