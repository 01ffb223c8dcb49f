import csv
import io
import json

import pytest

from opcap.cli import main
from opcap.config import build_experiment
from opcap.engine import run_game
from opcap.errors import ConfigError

SPAN3 = {"family": {"name": "linear_real", "n": 3}, "learner": {"name": "span"},
         "adversary": {"name": "basis", "tail": 2}, "protocol": "standard", "rounds": 20, "seed": 0}


def write(tmp_path, doc, name="game.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_build_experiment_plays_span_game():
    exp = build_experiment(SPAN3)
    tr = run_game(exp.family, exp.learner, exp.adversary, exp.protocol, exp.config)
    assert tr.mistakes == 3 and tr.clean


@pytest.mark.parametrize("patch,path", [
    ({"family": {"name": "linear_real", "n": 0}}, "$.family.n"),
    ({"family": {"name": "nope"}}, "$.family.name"),
    ({"learner": {"name": "nope"}}, "$.learner.name"),
    ({"adversary": {"name": "nope"}}, "$.adversary.name"),
    ({"protocol": "telepathy"}, "$.protocol"),
    ({"cap": -1}, "$.cap"),
    ({"mode": "fuzzy"}, "$.mode"),
    ({"extra": 1}, "$.extra"),
    ({"reduction": {"name": "bandit_majority"}}, "$.reduction.M"),
])
def test_config_errors_carry_field_paths(patch, path):
    with pytest.raises(ConfigError) as info:
        build_experiment({**SPAN3, **patch})
    assert info.value.path == path


def test_hidden_member_and_lies_from_config():
    doc = {"family": {"name": "finite", "k": 2, "domain": [0, 1, 2], "members": [[0, 0, 1], [1, 0, 0]]},
           "hidden": 1, "learner": {"name": "sequential_elimination"},
           "reduction": {"name": "agnostic_strong_restart", "M": 1},
           "adversary": {"name": "hidden", "inputs": [0, 1, 2, 0], "lies": {"eta": 1, "schedule": [2]}},
           "protocol": {"kind": "agnostic_strong", "eta": 1}}
    exp = build_experiment(doc)
    tr = run_game(exp.family, exp.learner, exp.adversary, exp.protocol, exp.config)
    assert exp.adversary.lies == [2]
    assert tr.certification["disagreements"] <= 1


def test_cli_run_prints_summary_and_writes_transcript(tmp_path, capsys):
    cfg = write(tmp_path, SPAN3)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "--config", cfg, "--out", str(out1)]) == 0
    assert "mistakes=3" in capsys.readouterr().out
    assert main(["run", "--config", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["totals"]["mistakes"] == 3


def test_cli_run_csv_and_seed_override(tmp_path):
    cfg = write(tmp_path, {**SPAN3, "adversary": {"name": "hidden"}, "rounds": 5})
    out = tmp_path / "s.csv"
    assert main(["run", "--config", cfg, "--format", "csv", "--out", str(out), "--seed", "7",
                 "--max-rounds", "4"]) == 0
    row = next(csv.DictReader(io.StringIO(out.read_text())))
    assert row["seed"] == "7" and row["rounds"] == "4"


def test_cli_malformed_config_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, {**SPAN3, "family": {"name": "linear_real", "n": "three"}})
    assert main(["run", "--config", cfg]) == 2
    assert "$.family.n" in capsys.readouterr().err
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == 2


def test_cli_usage_errors():
    assert main(["verify", "--suite", "nonexistent"]) == 2
    assert main([]) == 2
    assert main(["run", "--config", "x.json", "--max-rounds", "0"]) == 2


def test_cli_verify_small_suite_json(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "impossibility", "--format", "json", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert rows and all(r["verdict"] == "pass" for r in rows)


def test_cli_verify_csv_matches_json(tmp_path):
    j, c = tmp_path / "r.json", tmp_path / "r.csv"
    main(["verify", "--suite", "dag-lemma", "--format", "json", "--out", str(j), "--seed", "1"])
    main(["verify", "--suite", "dag-lemma", "--format", "csv", "--out", str(c), "--seed", "1"])
    as_json = [{k: str(v) for k, v in r.items()} for r in json.loads(j.read_text())]
    as_csv = list(csv.DictReader(io.StringIO(c.read_text())))
    assert as_json == as_csv


def test_cli_dag_eval_dot_product(tmp_path, capsys):
    prog = tmp_path / "dot.dag"
    prog.write_text("i0; i1; i2; i3; i4; i5\nb mul 0 3\nb mul 1 4\nb mul 2 5\nb add 6 7\nb add 9 8\nout 10\n")
    assert main(["dag", "eval", str(prog), "1", "2", "3", "4", "5", "6"]) == 0
    assert capsys.readouterr().out.strip() == "32, ops=5"


def test_cli_dag_analyze_sum(tmp_path, capsys):
    prog = tmp_path / "sum.dag"
    prog.write_text("i0; i1; i2; b add 0 1; b add 3 2; out 4\n")
    assert main(["dag", "analyze", str(prog)]) == 0
    assert "semantic deps=3, static binary ops=2, bound=2, pass" in capsys.readouterr().out


def test_cli_dag_analyze_single_input(tmp_path, capsys):
    prog = tmp_path / "one.dag"
    prog.write_text("i0; out 0\n")
    assert main(["dag", "analyze", str(prog)]) == 0
    assert "bound=0" in capsys.readouterr().out


def test_cli_dag_parse_error_exits_2(tmp_path):
    prog = tmp_path / "bad.dag"
    prog.write_text("i0; zz; out 0\n")
    assert main(["dag", "eval", str(prog), "1"]) == 2
