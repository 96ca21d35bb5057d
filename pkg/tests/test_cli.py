import json
import subprocess
import sys

import pytest

from magnoqcrb.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_UNSTABLE, main

ONE_POINT = """
[sweep]
outputs = ["c_mi", "ratio"]

[[sweep.axes]]
name = "delta_a_over_omega_d"
start = {x}
stop = {x}
count = 1
"""


def _cfg(tmp_path, text, name="c.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_point_ok(capsys):
    assert main(["point"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["status"] == "ok" and rec["c_mi"] > 0


def test_point_with_overrides(capsys):
    assert main(["point", "--set", "feedback_r=0.25", "--set", "options.estimands=['g_ma']"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert "F_sld[g_ma__g_ma]" in rec and "F_sld[g_ma__g_md]" not in rec


def test_point_unstable():
    assert main(["point", "--set", "feedback_r=0.6", "--set", "feedback_theta=0"]) == EXIT_UNSTABLE


def test_point_numerical_error(capsys):
    # far detuning at 10 mK with weak feedback gives an unphysical state
    assert main(["point", "--set", f"delta_a={1.8 * 62831853.071795866}"]) == EXIT_NUMERICAL
    assert json.loads(capsys.readouterr().out)["error_kind"] == "unphysical"


@pytest.mark.parametrize("argv", [
    ["point", "--set", "bogus=1"],
    ["point", "--set", "feedback_r=2"],
    ["point", "--set", "options.vacuum_penalty=0.3"],
    ["point", "--config", "/nonexistent/file.toml"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_parse_error_reports_location(tmp_path, capsys):
    assert main(["sweep", "--config", _cfg(tmp_path, "[params\n")]) == EXIT_CONFIG
    assert "line 1" in capsys.readouterr().err


def test_sweep_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "o.csv")
    assert main(["sweep", "--config", _cfg(tmp_path, ONE_POINT.format(x=1.0)), "--out", out]) == EXIT_OK
    assert main(["sweep", "--config", _cfg(tmp_path, ONE_POINT.format(x=1.8)), "--out", out]) == EXIT_NUMERICAL
    unstable = _cfg(tmp_path, "[params]\nfeedback_r = 0.7\nfeedback_theta = 0.0\n" + ONE_POINT.format(x=1.0))
    assert main(["sweep", "--config", unstable, "--out", out]) == EXIT_UNSTABLE
    assert main(["sweep", "--config", unstable, "--out", str(tmp_path / "missing" / "o.csv")]) == EXIT_CONFIG


def test_sweep_json_to_stdout(tmp_path, capsys):
    assert main(["sweep", "--config", _cfg(tmp_path, ONE_POINT.format(x=1.0)), "--format", "json"]) == EXIT_OK
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert doc["records"][0]["status"] == "ok"
    assert json.loads(captured.err)["n_ok"] == 1


def test_reproduce_with_overlay(tmp_path, capsys):
    code = main(["reproduce", "fig8b", "--out", str(tmp_path), "--set", "kappa_a_hz_over_2pi=1e5"])
    assert code == EXIT_OK
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].name == "fig8b_base.csv"
    assert main(["reproduce", "fig2a", "--out", str(tmp_path), "--overlay", "1,2"]) == EXIT_CONFIG


def test_selftest(capsys):
    assert main(["selftest"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "magnoqcrb", "point", "--set", "feedback_r=0.6",
                           "--set", "feedback_theta=0"], capture_output=True, text=True)
    assert proc.returncode == EXIT_UNSTABLE
    assert json.loads(proc.stdout)["status"] == "unstable"
