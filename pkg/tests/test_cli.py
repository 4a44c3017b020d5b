import json
import subprocess
import sys

import pytest

from sumsetlab.cli import main
from sumsetlab.harness import SUITES, Suite

from test_harness import odd_sum_claim


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_kneser_z6(capsys):
    code, out, _ = run(capsys, "check", "kneser", "--group", "Z6", "--exhaustive")
    assert code == 0 and "fail=0" in out


def test_transform_trace(capsys):
    code, out, _ = run(capsys, "transform", "--family", "g=3;{1};{1,2}", "--trace")
    steps = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(steps) == 2
    assert steps[0]["before"] == "g=3;{1};{1,2}" and steps[-1]["after"] == "g=3;{1,2,3};{}"
    code, out, _ = run(capsys, "transform", "--family", "g=3;{1};{1,2}")
    assert json.loads(out)["T"] == [2]


def test_density(capsys):
    assert run(capsys, "density", "--ep", "0:{}|2:{1}")[1].strip() == "1/2"
    code, out, _ = run(capsys, "density", "--ep", "0:{}|5:{0,1}", "--json")
    assert json.loads(out) == {"set": "0:{}|5:{0,1}", "shnirelman": "1/4", "lower": "2/5"}


def test_operations(capsys):
    assert run(capsys, "sumset", "5:{1}", "5:{2}")[1].strip() == "5:{1,2,3}"
    assert run(capsys, "sumset", "4:{1,2}", "--h", "2")[1].strip() == "4:{1,2,3,4}"
    assert run(capsys, "sumset", "Z6:{0,3}", "Z6:{0,3}")[1].strip() == "Z6:{0,3}"
    code, out, _ = run(capsys, "phi", "--family", "g=3;{1};{1,2}", "--json")
    assert json.loads(out)["phi"] == {"1": [2, 3, 3], "2": [1, 2, 3]}
    assert run(capsys, "phi", "--family", "g=3;{1};{1,2}", "--r", "2", "--m", "3")[1].strip() == "3"
    assert run(capsys, "etransform", "Z5:{0,1}", "Z5:{0,2}", "--e", "1")[1].split() == ["Z5:{0,1,3}", "Z5:{0}"]
    assert run(capsys, "stabilizer", "Z6:{0,2,4}")[1].strip() == "Z6:{0,2,4}"
    assert len(run(capsys, "subgroups", "--group", "Z2xZ2")[1].split()) == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "nope"],
        ["sumset", "5:{9}"],
        ["density", "--ep", "garbage"],
        ["transform", "--family", "g=3;{1}"],
        ["etransform", "Z5:{0}", "Z5:{1}", "--e", "2"],
        ["stabilizer", "Z5:{}"],
        ["subgroups", "--group", "Z65"],
        ["check", "mann", "--g", "1-12"],
        ["check", "mann", "--g", "x"],
        ["replay", "/nonexistent/file.jsonl"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_resource_error_names_count(capsys, monkeypatch):
    monkeypatch.setenv("SUMSETLAB_BUDGET", "50")
    code, _, err = run(capsys, "check", "mann", "--g", "1-3")
    assert code == 2 and "84" in err and "50" in err


def test_fails_exit_1_and_replay(capsys, monkeypatch, tmp_path):
    monkeypatch.setitem(SUITES, "bogus", Suite("bogus", "pair", "never a singleton", odd_sum_claim))
    log = tmp_path / "w.jsonl"
    code, out, _ = run(capsys, "check", "bogus", "--g", "2", "--witness-log", str(log), "--json")
    assert code == 1 and json.loads(out)["counts"]["fail"] == 5
    code, out, _ = run(capsys, "replay", str(log), "--json")
    rep = json.loads(out)
    assert code == 1 and rep["replayed"] == rep["reproduced"] == rep["fails"] == 5


def test_replay_pass_log(capsys, tmp_path):
    log = tmp_path / "p.jsonl"
    assert run(capsys, "check", "mann", "--g", "3", "--witness-log", str(log), "--log-pass", "4")[0] == 0
    assert len(log.read_text().splitlines()) == 16
    code, out, _ = run(capsys, "replay", str(log))
    assert code == 0 and out.count("ok ") == 16


def test_json_determinism(capsys):
    argv = ["check", "dyson-bound", "--random", "--seed", "9", "--count", "300", "--g", "1-10", "--n", "1-4", "--json"]
    a = json.loads(run(capsys, *argv)[1])
    b = json.loads(run(capsys, *argv, "--workers", "2")[1])
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b and a["config"]["seed"] == 9 and a["instances"] == 300


def test_search_tight_cli(capsys):
    code, out, _ = run(capsys, "search-tight", "kneser", "--group", "Z4", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["scanned"] == 225 and rep["equalities"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sumsetlab", "density", "--ep", "0:{}|2:{1}"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1/2"
