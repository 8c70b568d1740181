import json
import math
import subprocess
import sys

import pytest

from cubature5.cli import main


def generate(tmp_path, *args, name="rule.json"):
    out = tmp_path / name
    code = main(["generate", *args, "--out", str(out)])
    return code, out


def test_generate_and_verify_cube(tmp_path, capsys):
    code, out = generate(tmp_path, "--region", "cube", "--n", "4")
    assert code == 0
    summary = capsys.readouterr().out
    assert "points: 39" in summary
    assert "Möller bound: 21" in summary
    assert "gap: 18" in summary
    data = json.loads(out.read_text())
    assert data["region"] == "cube" and len(data["weights"]) == 39
    assert main(["verify", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "degree 6:" in printed and "[FAIL]" in printed
    assert "pass (checked through degree 5" in printed


def test_generate_minimal_rule_flag(tmp_path, capsys):
    code, _ = generate(tmp_path, "--region", "gaussian", "--n", "7")
    assert code == 0
    summary = capsys.readouterr().out
    assert "points: 57" in summary
    assert "attains Möller bound: true" in summary
    assert "gap: 0" in summary


def test_generate_to_stdout(capsys):
    assert main(["generate", "--region", "ball", "--n", "4"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["dimension"] == 4
    assert "points: 31" in captured.err


def test_generate_csv(tmp_path):
    code, out = generate(tmp_path, "--region", "ball", "--n", "5", "--format", "csv", name="rule.csv")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,weight"
    assert len(lines) == 44


def test_generate_shell_warns(tmp_path, capsys):
    code, out = generate(tmp_path, "--region", "shell", "--n", "5", "--r", "0.5")
    assert code == 0
    captured = capsys.readouterr()
    assert "warning: origin outside region" in captured.err
    assert "points in region: false" in captured.out
    assert main(["verify", str(out)]) == 0


def test_generate_gegenbauer_cube(tmp_path):
    code, out = generate(tmp_path, "--region", "cube", "--n", "5", "--alpha", "1.5")
    assert code == 0
    assert json.loads(out.read_text())["region"] == "cube:alpha=1.5"
    assert main(["verify", str(out)]) == 0


def test_generate_gamma_override(tmp_path):
    code, out = generate(tmp_path, "--region", "cube", "--n", "5", "--gamma", "0.2")
    assert code == 0
    assert json.loads(out.read_text())["gamma"] == 0.2
    assert main(["verify", str(out)]) == 0


def test_generate_degree3(tmp_path, capsys):
    code, out = generate(tmp_path, "--region", "cube", "--n", "6", "--degree", "3")
    assert code == 0
    assert "Möller bound: 12" in capsys.readouterr().out
    assert main(["verify", str(out)]) == 0
    assert main(["verify", str(out), "--degree", "5"]) == 3


def test_degree3_gaussian_is_the_spherical_rule(tmp_path):
    # with Gaussian kurtosis the axis points vanish and the degree-5 rule comes out
    _, out3 = generate(tmp_path, "--region", "gaussian", "--n", "6", "--degree", "3", name="r3.json")
    _, out5 = generate(tmp_path, "--region", "gaussian", "--n", "6", name="r5.json")
    r3, r5 = json.loads(out3.read_text()), json.loads(out5.read_text())
    assert r3["gamma"] == pytest.approx(r5["gamma"], rel=1e-14)
    assert len(r3["weights"]) == len(r5["weights"])
    assert main(["verify", str(out3), "--degree", "5"]) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--region", "cube", "--n", "4", "--gamma", "1e-6"],
        ["generate", "--region", "cube", "--n", "4", "--gamma", "-1"],
    ],
)
def test_construction_failure_exit_code(argv, capsys):
    assert main(argv) == 2
    assert "construction failed" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--region", "shell", "--n", "5"],
        ["generate", "--region", "ball", "--n", "5", "--alpha", "1"],
        ["generate", "--region", "ball", "--n", "5", "--gamma", "0.3"],
        ["generate", "--region", "cube", "--n", "3"],
        ["generate", "--region", "shell", "--n", "5", "--r", "1.5"],
        ["bounds", "--n", "4", "--degree", "4"],
        ["integrate", "x1^2"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["generate", "--n", "4"],
        ["generate", "--region", "torus", "--n", "4"],
        ["verify"],
    ],
)
def test_argparse_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "nope.json")]) == 1
    assert "cannot read rule" in capsys.readouterr().err


def test_verify_corrupted_weight_exit_3(tmp_path, capsys):
    _, out = generate(tmp_path, "--region", "exp", "--n", "6")
    data = json.loads(out.read_text())
    data["weights"][0] += 1e-3
    out.write_text(json.dumps(data))
    assert main(["verify", str(out)]) == 3
    assert "fail (checked through degree 5" in capsys.readouterr().out


def test_verify_report_file(tmp_path):
    _, out = generate(tmp_path, "--region", "gaussian", "--n", "4")
    report = tmp_path / "report.json"
    assert main(["verify", str(out), "--report", str(report), "--max-degree", "5"]) == 0
    data = json.loads(report.read_text())
    assert data["pass"] is True
    assert [d["degree"] for d in data["degrees"]] == list(range(6))


def test_integrate_with_region(capsys):
    assert main(["integrate", "x1^2*x2^2", "--region", "cube", "--n", "4"]) == 0
    out = capsys.readouterr().out
    value = float(out.splitlines()[0].split(": ")[1])
    assert value == pytest.approx(1 / 9, rel=1e-12)
    assert "exact value: 0.111" in out


def test_integrate_with_rule_file(tmp_path, capsys):
    _, out = generate(tmp_path, "--region", "gaussian", "--n", "4")
    capsys.readouterr()
    assert main(["integrate", "x1^2*x2^4", "--rule", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    # degree 6: the rule is not exact, but the exact value is still reported
    assert float(lines[1].split(": ")[1]) == pytest.approx(3 * math.pi**2 / 8, rel=1e-13)


def test_integrate_parse_error(capsys):
    assert main(["integrate", "x1^2 + x5", "--region", "cube", "--n", "4"]) == 1
    err = capsys.readouterr().err
    assert "variable index 5 exceeds dimension 4" in err


def test_bounds(capsys):
    assert main(["bounds", "--n", "7", "--points", "57", "--verbose"]) == 0
    out = capsys.readouterr().out
    assert "Möller bound: 57" in out
    assert "dim P_n^k bound: 36" in out
    assert "gap: 0" in out
    assert "doubled dimension bound: 71" in out


def test_moments_table(capsys):
    assert main(["moments", "--region", "gaussian", "--n", "5"]) == 0
    out = capsys.readouterr().out
    ratio = float(out.splitlines()[-1].split()[-1])
    assert ratio == pytest.approx(3.0, rel=1e-12)


def test_moments_monomial(capsys):
    assert main(["moments", "--region", "cube", "--n", "4", "--monomial", "x1^4"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.2, rel=1e-14)


def test_module_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "cubature5", "bounds", "--n", "4"], capture_output=True, text=True
    )
    assert result.returncode == 0
    assert "Möller bound: 21" in result.stdout
