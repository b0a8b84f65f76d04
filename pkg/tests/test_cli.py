import json
import subprocess
import sys

import pytest

from descent_quiver.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_quiver_dot(capsys):
    code, out, err = run(capsys, "quiver", "--n", "8")
    assert code == 0
    assert out.startswith("digraph Q8")
    assert "vertices=22" in err and "edges=28" in err


def test_quiver_json_lists_isolated(capsys):
    code, out, _ = run(capsys, "quiver", "--n", "8", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and sorted(doc["isolated"]) == ["1,1,1,1,1,1,1,1", "2,2,2,2"]


def test_kernel(capsys):
    code, out, err = run(capsys, "kernel", "--n", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["dim_quotient"] == 128
    assert doc["minimal_generators"]["total"] == 11
    assert "status=PASS" in err


def test_relations(capsys):
    code, out, _ = run(capsys, "relations", "--n", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["counts"] == {"branch": 4, "jacobi": 7, "branch_candidates": 4,
                             "jacobi_candidates": 7, "minimal": 11}


def test_verify_pass_and_corrupt(capsys):
    code, _, err = run(capsys, "verify", "--n", "8")
    assert code == 0 and "conjecture=PASS" in err
    code, _, err = run(capsys, "verify", "--n", "8", "--corrupt")
    assert code == 1 and "conjecture=FAIL" in err


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "5", "--format", "text")
    assert code == 0 and "solomon_closure: PASS" in out


def test_presentation_to_file(capsys, tmp_path):
    target = tmp_path / "q7.json"
    code, out, _ = run(capsys, "presentation", "--n", "7", "--out", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["conjecture"] == "PASS" and doc["quiver_dot"].startswith("digraph Q7")


@pytest.mark.parametrize("argv", [
    ["kernel", "--n", "13"],
    ["oracle", "--n", "9"],
    ["kernel", "--n", "0"],
    ["quiver", "--n", "-1"],
])
def test_caps_and_bounds(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error:" in err


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["kernel"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["quiver", "--n", "3", "--format", "yaml"])
    assert exc.value.code == 2


def test_parallel_output_identical(capsys):
    _, a, _ = run(capsys, "kernel", "--n", "8")
    _, b, _ = run(capsys, "kernel", "--n", "8", "--parallel")
    assert a == b


def test_console_module_runs():
    proc = subprocess.run([sys.executable, "-m", "descent_quiver.cli", "relations", "--n", "6", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "J((1,2),1,2)" in proc.stdout and "event=relations" in proc.stderr
    assert proc.stdout == subprocess.run(
        [sys.executable, "-m", "descent_quiver.cli", "relations", "--n", "6", "--format", "text"],
        capture_output=True, text=True, check=False).stdout
