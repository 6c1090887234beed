import json
import math
import subprocess
import sys

import pytest

from holorect.cli import run, to_json


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_integrate_rho_json(capsys):
    code, out, _ = call(capsys, "integrate", "--fn", "1/z", "--rect", "-1,1,-1,1", "--json")
    assert code == 0
    data = json.loads(out)
    assert abs(data["value"]["im"] - 2 * math.pi) < 1e-8
    assert abs(data["value"]["re"]) < 1e-8
    assert set(data) == {"value", "k", "est_error"}


def test_integrate_segment_and_functional(capsys):
    code, out, _ = call(capsys, "integrate", "--fn", "z", "--segment", "0,0,1,1", "--json")
    assert code == 0 and abs(json.loads(out)["value"]["im"] - 1) < 1e-10
    code, out, _ = call(capsys, "integrate", "--fn", "1/(z-3)", "--json")
    assert code == 0 and abs(json.loads(out)["value"]["im"] - 2 * math.pi) < 1e-8


def test_integrate_singularity_on_contour(capsys):
    code, out, err = call(capsys, "integrate", "--fn", "1/z", "--segment", "0,0,1,0")
    assert code == 1
    assert out == ""
    assert err.startswith("error: E_SINGULARITY_ON_CONTOUR:")
    assert len(err.strip().splitlines()) == 1


def test_declared_singularity_flag(capsys):
    code, _, err = call(capsys, "integrate", "--fn", "exp(z)", "--segment", "0,0,2,0", "--singularity", "1,0")
    assert code == 1 and "E_SINGULARITY_ON_CONTOUR" in err


def test_winding_commands(capsys):
    assert call(capsys, "winding", "--rect", "0,1,0,1", "--point", "0.5,0.5")[1].strip() == "1"
    code, out, _ = call(
        capsys, "winding", "--loop", "cos(2*pi*2*t) - i*sin(2*pi*2*t)", "--point", "0,0", "--oracle", "--json"
    )
    data = json.loads(out)
    assert code == 0 and data["winding"] == data["lifted"] == -2
    assert call(capsys, "winding", "--loop", "rect -1,1,-1,1", "--point", "5,5")[1].strip() == "0"
    code, _, err = call(capsys, "winding", "--rect", "0,1,0,1", "--point", "0.5,0")
    assert code == 1 and err.startswith("error: E_LOOP_HITS_POINT:")


def test_eval_derivative_series(capsys):
    code, out, _ = call(capsys, "eval", "--fn", "z^2", "--at", "1,1", "--rect", "-2,2,-2,2", "--json")
    assert code == 0 and abs(json.loads(out)["value"]["im"] - 2) < 1e-7
    code, out, _ = call(capsys, "derivative", "--fn", "z^3", "--at", "2,0", "--rect", "-3,3,-3,3", "--json")
    assert code == 0 and abs(json.loads(out)["value"]["re"] - 12) < 1e-6
    code, out, _ = call(capsys, "series", "--fn", "exp(z)", "--order", "4", "--json")
    coeffs = json.loads(out)["coeffs"]
    assert [round(c["re"], 9) for c in coeffs] == [1, 1, 0.5, round(1 / 6, 9), round(1 / 24, 9)]


def test_cover_and_roots_with_svg(capsys, tmp_path):
    svg = tmp_path / "cover.svg"
    code, out, _ = call(capsys, "cover", "--rect", "0,1,0,1", "--max-diameter", "0.3", "--svg", str(svg), "--json")
    assert code == 0 and json.loads(out)["count"] == 16
    assert svg.read_text().startswith("<svg")
    svg = tmp_path / "roots.svg"
    code, out, _ = call(capsys, "roots", "--fn", "z^2-1", "--rect", "-2,2,-2,2", "--svg", str(svg), "--json")
    data = json.loads(out)
    assert code == 0 and data["total_winding"] == 2 and len(data["boxes"]) == 2
    assert svg.read_text().count("<circle") == 2


def test_usage_errors(capsys):
    assert call(capsys, "integrate")[0] == 2
    assert call(capsys, "nonsense")[0] == 2
    assert call(capsys, "series", "--fn", "z", "--order", "x")[0] == 2
    assert call(capsys)[0] == 2
    assert call(capsys, "integrate", "--help")[0] == 0


def test_domain_errors_have_codes(capsys):
    cases = {
        ("integrate", "--fn", "z^", "--rect", "0,1,0,1"): "E_SYNTAX",
        ("integrate", "--fn", "z", "--rect", "0,0,0,1"): "E_INVALID_GEOMETRY",
        ("roots", "--fn", "z^2-1", "--rect", "-1,1,-1,1"): "E_BOUNDARY_HITS_VALUE",
        ("eval", "--fn", "exp(z)", "--at", "1,0", "--rect", "-1,1,-1,1"): "E_POINT_TOO_CLOSE_TO_BOUNDARY",
    }
    for argv, code_name in cases.items():
        code, _, err = call(capsys, *argv)
        assert code == 1
        assert err.split(":")[1].strip() == code_name, err


def test_tolerance_flag(capsys):
    code, out, _ = call(capsys, "integrate", "--fn", "exp(z)", "--segment", "0,0,1,0", "--tol", "1e-4", "--json")
    loose = json.loads(out)["k"]
    code, out, _ = call(capsys, "integrate", "--fn", "exp(z)", "--segment", "0,0,1,0", "--json")
    assert loose <= json.loads(out)["k"]


@pytest.mark.parametrize(
    "argv",
    [
        ("integrate", "--fn", "exp(z)/(z-0.5)", "--rect", "-1,1,-1,1", "--json"),
        ("roots", "--fn", "z^3-z", "--rect", "-2,2,-2,2", "--min-size", "0.01", "--json"),
        ("cover", "--rect", "-1,1,-1,1", "--max-diameter", "0.5", "--json"),
    ],
)
def test_json_round_trip(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    text = out.rstrip("\n")
    assert to_json(json.loads(text)) == text


def test_verify_is_reproducible():
    cmd = [sys.executable, "-m", "holorect", "verify", "--seed", "42"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0, first.stdout.decode() + first.stderr.decode()
    assert first.stdout == second.stdout
    assert b"11/11 criteria passed" in first.stdout


def test_tolerance_environment_variable():
    cmd = [sys.executable, "-m", "holorect", "integrate", "--fn", "exp(z)", "--segment", "0,0,1,0", "--json"]
    loose = subprocess.run(cmd, capture_output=True, env={"HOLORECT_TOL": "1e-3", "PATH": ""}, check=True)
    tight = subprocess.run(cmd, capture_output=True, env={"PATH": ""}, check=True)
    assert json.loads(loose.stdout)["k"] < json.loads(tight.stdout)["k"]
