import json
import subprocess
import sys

import pytest

from tauforge.cli import SUITES, main, render_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_w_single(capsys):
    code, out, _ = run(capsys, "w", "--partition", "1")
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    assert doc["schema"] == "tauforge.report.v1"
    assert doc["result"]["mu"] == [1]
    # 1/[1] = -v/(1 - v^2)
    assert doc["result"]["W"] == {"num": [[1, "-1"]], "den": [[0, "1"], [2, "-1"]]}


def test_w_table(capsys):
    code, out, _ = run(capsys, "w", "--max-size", "3")
    rows = json.loads(out)["result"]["table"]
    assert code == 0 and len(rows) == 1 + 1 + 2 + 3


def test_ww_and_char(capsys):
    code, out, _ = run(capsys, "ww", "--partition", "1", "--partition2", "1")
    assert code == 0 and json.loads(out)["result"]["nu"] == [1]
    code, out, _ = run(capsys, "char", "--partition", "2,1", "--partition2", "3")
    assert code == 0 and json.loads(out)["result"]["chi"] == -1
    code, out, _ = run(capsys, "char", "--max-size", "3")
    doc = json.loads(out)["result"]
    assert doc["classes"] == [[3], [2, 1], [1, 1, 1]]
    assert doc["rows"][0]["values"] == [1, 1, 1]


def test_tau_commands(capsys, tmp_path):
    path = tmp_path / "kp.json"
    code, out, _ = run(capsys, "tau-kp", "--r", "1/2", "--degree", "3", "--order", "3", "--json", str(path))
    doc = json.loads(out)
    assert code == 0 and json.loads(path.read_text()) == doc
    assert doc["result"]["series"]["schema"] == "tauforge.series.v1"
    assert doc["result"]["connected_p1"] == {"low": -1, "high": 3,
                                             "coeffs": [[-1, "1"], [1, "-1/24"], [3, "7/5760"]]}
    code, out, _ = run(capsys, "tau-toda", "--r", "2", "--degree", "2", "--n-min", "-1", "--n-max", "1")
    doc = json.loads(out)["result"]
    assert code == 0 and doc["routes_agree"] and doc["root"] == 8
    assert doc["prefactor_exponents"]["1"] == "9/16"
    code, out, _ = run(capsys, "conifold", "--degree", "2")
    assert code == 0
    code, out, _ = run(capsys, "toric", "--degree", "2", "--n-min", "0", "--n-max", "1")
    assert code == 0 and json.loads(out)["result"]["sequence"]["prefactor_exponents"]["1"] == "1/4"


@pytest.mark.parametrize("argv", [
    ["w", "--partition", "1,x"],
    ["tau-kp", "--r", "abc"],
    ["tau-toda", "--r", "0"],
    ["verify", "--suite", "nope"],
    ["w", "--degree", "-1"],
    ["toric", "--n-min", "2", "--n-max", "1"],
    ["char", "--partition", "2", "--partition2", "1"],
])
def test_config_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert "error" in json.loads(err)


def test_argparse_errors_exit_2(capsys):
    assert main(["bogus"]) == 2
    assert main(["w", "--degree", "many"]) == 2


def test_verify_single_suite_and_text(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "wmu-identities", "--max-size", "4")
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    suite = doc["result"]["suites"][0]
    assert suite["suite"] == "wmu-identities"
    check = suite["checks"][0]
    assert set(check) >= {"check", "params", "certified_window", "max_residual", "pass"}
    code, out, _ = run(capsys, "verify", "--suite", "translation", "--format", "text")
    assert code == 0 and "translation: PASS" in out
    assert "[ok]" in out


def test_verify_suite_names():
    assert len(SUITES) == 10 and "vev-remark" in SUITES


def test_render_text_nested():
    text = render_text({"a": 1, "b": [1, {"c": 2}]})
    assert "a: 1" in text and "- 1" in text and "c: 2" in text


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "tauforge.cli", "char", "--partition", "1",
                           "--partition2", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["chi"] == 1
