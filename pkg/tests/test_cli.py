import json
import subprocess
import sys

import pytest

from geowronskian.cli import SCHEMA, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_fullsets_example(capsys):
    code, data = run_json(capsys, "fullsets", "--p", "2", "--m", "2")
    assert code == 0 and data["count"] == 3
    assert data["schema"] == SCHEMA and data["command"] == "fullsets"


def test_indep_example(capsys):
    code, data = run_json(capsys, "indep", "--p", "2", "1", "z1", "z2")
    assert code == 0
    assert data["independent"] is True and data["witness"] == [[1, 0], [0, 1]]
    assert data["rank"] == 3 and data["seed"] == 0
    code, data = run_json(capsys, "indep", "1", "z1", "2*z1+3")
    assert code == 0 and data["independent"] is False and data["witness"] is None


def test_wronskian_example(capsys):
    code, out, _ = run(capsys, "wronskian", "--set", "[[1],[2]]", "1", "z1", "z2")
    assert code == 0 and out == "1\n"
    code, out, _ = run(capsys, "wronskian", "--set", "[[1],[1,1]]", "1", "z1", "z1^2")
    assert code == 0 and out == "2\n"


def test_stats_and_vandermonde(capsys):
    code, data = run_json(capsys, "stats", "--set", '["1", "2", "12"]')
    assert code == 0 and data["full"] and data["stats"]["w"] == 4
    code, data = run_json(capsys, "vandermonde", "--set", "[[1],[1,1]]",
                          "--cols", "[[0],[1],[2]]")
    assert code == 0 and data["value"] == "2"
    code, data = run_json(capsys, "vandermonde", "--tilde", "--set", "[[1],[1,1]]",
                          "--cols", "[[1],[2]]")
    assert data["value"] == "2"


def test_reduce_emits_fraction_strings(capsys):
    code, data = run_json(capsys, "reduce", "z1", "z1+z1^2")
    assert code == 0 and data["ts"] == ["z1", "z1^2"]
    assert data["A"] == [["1", "-1"], ["0", "1"]]
    code, out, err = run(capsys, "reduce", "1", "z1", "2*z1+3")
    assert code == 2 and out == "" and err


def test_geometric_exit_codes(capsys):
    code, data = run_json(capsys, "geometric", "--set", '["1", "2", "12"]')
    assert code == 0 and data["geometric"]
    code, data = run_json(capsys, "geometric", "--set", '["1", "12"]', "--mode", "randomized")
    assert code == 1 and not data["geometric"]
    assert "counterexample" in data["certificate"] and data["seed"] == 0


def test_certify_fermat_asymptotics(capsys):
    code, data = run_json(capsys, "certify", "--p", "2", "--m", "2", "--samples", "10")
    assert code == 0 and all(r["ok"] for r in data["reports"])
    code, data = run_json(capsys, "fermat", "--N", "3", "--p", "2", "--delta", "3")
    assert code == 0 and data["ok"] and data["degrees"]["threshold"] == 4
    code, data = run_json(capsys, "fermat", "--N", "2", "--p", "1", "--delta", "3",
                          "--upto", "--jobs", "2")
    assert code == 0 and [r["delta"] for r in data["reports"]] == [1, 2, 3]
    code, data = run_json(capsys, "asymptotics", "--p", "1", "--n", "2", "3")
    assert code == 0 and [r["size"] for r in data["rows"]] == [2, 3]


def test_usage_and_cap_errors(capsys):
    code, out, err = run(capsys, "wronskian", "--set", "[[1]]", "z1 + * z2", "1")
    assert code == 2 and out == "" and "error" in err
    code, out, err = run(capsys, "nosuchcommand")
    assert code == 2 and out == ""
    code, out, err = run(capsys, "fullsets", "--p", "3", "--m", "8", "--cap", "10")
    assert code == 3 and out == "" and err
    code, out, err = run(capsys, "fermat", "--N", "2", "--p", "2", "--delta", "1")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["geometric", "--set", '["1", "12"]', "--mode", "randomized", "--seed", "7"],
    ["certify", "--p", "2", "--m", "2", "--samples", "5", "--seed", "3"],
    ["fullsets", "--p", "2", "--m", "3"],
])
def test_byte_identical_json(capsys, argv):
    a = run(capsys, *argv, "--format", "json")
    b = run(capsys, *argv, "--format", "json")
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geowronskian.cli", "indep", "1", "z1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "independent=True" in proc.stdout
