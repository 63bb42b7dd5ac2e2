from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from qfeedback.cli import run


def test_solve(capsys):
    assert run(["solve", "--q", "3", "--state", "0,9", "--n", "4"]) == 0
    assert capsys.readouterr().out.strip() == "winning"
    assert run(["solve", "--q", "3", "--state", "0,2", "--n", "2"]) == 1
    assert capsys.readouterr().out.strip() == "losing"
    assert run(["solve", "--q", "3", "--state", "1,1,1", "--n", "3", "--no-prune"]) == 1


def test_solve_node_limit(capsys):
    assert run(["solve", "--state", "0,0,30", "--n", "9", "--node-limit", "5"]) == 1
    assert "node budget" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert run(["solve", "--state", "0,x", "--n", "2"]) == 2
    assert "bad state literal" in capsys.readouterr().err
    assert run(["bounds"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["codec", "decode"]) == 2


def test_strategy(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(["strategy", "--state", "4,1", "--n", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["state"] == [4, 1] and doc["n"] == 2 and len(doc["children"]) == 3
    assert run(["strategy", "--state", "0,2", "--n", "2"]) == 1


def test_rate_region(tmp_path):
    out = tmp_path / "region.csv"
    assert run(["rate-region", "--q", "3", "--points", "200", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 200
    assert float(rows[-1]["f"]) == 0.5
    assert float(rows[-1]["R_construction"]) == 0.0
    assert rows[0]["R_translation"] == ""


def test_bounds(capsys):
    assert run(["bounds", "--q", "3", "--state", "0,9", "--n", "4"]) == 0
    assert "volume=81" in capsys.readouterr().out
    assert run(["bounds", "--q", "3", "--state", "0,10", "--n", "4"]) == 1
    capsys.readouterr()
    assert run(["bounds", "--q", "3", "--M", "9", "--e", "1"]) == 0
    out = capsys.readouterr().out
    assert "converse_min_n=4" in out and "table_n=7" in out


def test_table(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(["table", "--q", "3", "--m", "4", "--k", "4", "--csv", "--check", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,k=1,k=2,k=3,k=4"
    assert lines[4].startswith("4,96,")
    assert "FAIL" not in capsys.readouterr().err


def test_codec_round_trip(tmp_path, capsys):
    code = tmp_path / "code.json"
    assert run(["codec", "build", "--q", "3", "--M", "9", "--e", "1", "--out", str(code)]) == 0
    assert "n=4" in capsys.readouterr().err
    assert run(["codec", "decode", "--code", str(code), "--received", "0,0,0,0"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert run(["verify", "--code", str(code), "--threads", "2"]) == 0
    assert capsys.readouterr().out.strip() == "ok=true runs=81 paths_per_message=9"
    assert run(["simulate", "--code", str(code), "--adversary", "greedy"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "theta,sent,received,errors,decoded,ok" and len(lines) == 10
    assert run(["simulate", "--code", str(code), "--theta", "3", "--adversary", "scripted", "--received", "0,0,0,0"]) == 1


def test_codec_table_route(tmp_path, capsys):
    code = tmp_path / "code.json"
    assert run(["codec", "build", "--via", "table", "--M", "6", "--e", "1", "--out", str(code)]) == 0
    assert json.loads(code.read_text())["n"] == 5
    assert run(["verify", "--code", str(code)]) == 0
    assert "runs=66" in capsys.readouterr().out
    assert run(["verify", "--code", str(code), "--cap", "10"]) == 1


def test_conservation_verify(capsys):
    assert run(["verify", "--state", "0,9", "--partition", "0,3|0,3|0,3", "--n", "4"]) == 0
    assert capsys.readouterr().out.strip() == "conservation=holds"
    assert run(["verify", "--state", "0,9", "--partition", "0,3|0,3|0,2", "--n", "4"]) == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "qfeedback.cli", "solve", "--state", "4,1", "--n", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "winning"


@pytest.mark.parametrize("env,expected", [("3", 3), ("zero", 1), (None, 1)])
def test_thread_default(monkeypatch, env, expected):
    from qfeedback import cli

    if env is None:
        monkeypatch.delenv(cli.THREADS_ENV, raising=False)
    else:
        monkeypatch.setenv(cli.THREADS_ENV, env)
    assert cli._default_threads() == expected
