import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from rdbounds.cli import main

SCHEMA = json.loads(resources.files("rdbounds").joinpath("schemas/output.schema.json").read_text())


@pytest.fixture(autouse=True)
def fixed_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    monkeypatch.delenv("RDBOUNDS_SEED", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_bounds_g_text(capsys):
    assert run(capsys, "bounds", "g", "--m", "15")[:2] == (0, "3632428801\n")


def test_bounds_values(capsys):
    assert run(capsys, "bounds", "theta", "--d", "5", "--k", "11")[1] == "526\n"
    assert run(capsys, "bounds", "psi", "--d", "4", "--k", "8")[1] == "[8, 63, 778, 1557]\n"
    assert run(capsys, "bounds", "f", "--m", "17")[1] == "871782912001\n"
    code, out, _ = run(capsys, "bounds", "dims", "--d", "3", "--r", "778")
    assert "moduli_hyp: 78485029" in out


def test_table2_csv(capsys):
    code, out, _ = run(capsys, "bounds", "table2", "--from", "19", "--to", "24", "--format", "csv")
    lines = out.strip().split("\n")
    assert code == 0 and len(lines) == 7
    assert all(line.split(",")[3] == "5.000" for line in lines[1:])


def test_table_json_schema_and_strings(capsys):
    code, doc = run_json(capsys, "bounds", "table1", "--from", "14", "--to", "16")
    assert code == 0
    assert [r["G"] for r in doc["rows"]] == ["259459201", "3632428801", "54486432001"]
    assert doc["manifest"]["timestamp"] == "2023-11-14T22:13:20Z"


def test_table1_regression_flags_but_passes(capsys):
    code, doc = run_json(capsys, "bounds", "table1", "--regress")
    assert code == 0
    flagged = {(c["m"], c["field"]) for c in doc["checks"] if c["status"] == "flagged"}
    assert ("17", "G") in flagged


def test_ledger_case(capsys):
    code, out, _ = run(capsys, "audit", "ledger", "--case", "k2")
    assert code == 0
    assert out.strip().splitlines()[-1].strip() == "PASS k2 with eta = 108"


def test_ledger_json(capsys):
    code, doc = run_json(capsys, "audit", "ledger")
    assert code == 0 and len(doc["checks"]) == 11


def test_check_comparison(capsys):
    code, doc = run_json(capsys, "check", "comparison", "--max", "60", "--checkpoints", "11")
    assert code == 0 and all(c["passed"] for c in doc["checks"])


def test_verify_small(capsys):
    code, doc = run_json(capsys, "verify", "polar-identity", "--trials", "20", "--seed", "3")
    assert code == 0 and doc["manifest"]["seed"] == "3"


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RDBOUNDS_SEED", "41")
    code, doc = run_json(capsys, "tschirnhaus", "build", "--n", "4", "--upto", "2")
    assert doc["manifest"]["seed"] == "41" and doc["rows"][0]["seed"] == "41"
    monkeypatch.setenv("RDBOUNDS_SEED", "x")
    assert run(capsys, "tschirnhaus", "build", "--n", "4", "--upto", "2")[0] == 2


def test_find_plane(capsys):
    code, doc = run_json(capsys, "find", "plane", "--quadrics", "2", "--k", "2", "--dim", "8", "--seed", "1")
    assert code == 0 and doc["checks"][0]["passed"] is True


def test_pipeline_json(capsys):
    code, doc = run_json(capsys, "pipeline", "run", "--n", "9", "--depth", "1")
    assert code == 0 and doc["checks"][0]["solve_degrees"] == ["6", "12"]


@pytest.mark.parametrize("argv", [
    ("bounds", "theta", "--d", "2", "--k", "1"),
    ("bounds", "nope"),
    ("pipeline", "run", "--n", "25", "--depth", "2"),
    ("tschirnhaus", "build", "--n", "9", "--upto", "6"),
    ("find", "plane", "--quadrics", "1", "--k", "5", "--dim", "10"),
    ("audit", "ledger", "--case", "k42"),
    ("bounds", "table1", "--from", "9", "--to", "3"),
])
def test_usage_and_domain_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_failing_regression_exits_1(capsys):
    code, out, _ = run(capsys, "bounds", "table2", "--from", "25", "--to", "25", "--regress")
    assert code == 1 and out.strip().endswith("regression: FAIL")


def test_byte_identical_output():
    env = {"SOURCE_DATE_EPOCH": "1700000000", "PATH": "/usr/bin:/bin"}
    argv = [sys.executable, "-m", "rdbounds", "bounds", "table1", "--format", "json"]
    a = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    b = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    assert a == b and b"2023-11-14T22:13:20Z" in a


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "rdbounds 0.1.0" in capsys.readouterr().out
