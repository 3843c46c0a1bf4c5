import json

import pytest

from pursuit.arena import Transcript
from pursuit.cli import main
from pursuit.constructibility import Certificate, validate
from pursuit.graph import load_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_yes_and_no(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "check", "--graph", "family:two_k", "--out", str(cert))
    assert code == 0 and json.loads(out)["constructible"]
    g = load_graph_from_family("two_k")
    assert validate(g, Certificate.from_json(g, json.loads(cert.read_text()))) is None
    code, out, _ = run(capsys, "check", "--graph", "family:two_k", "--cert", str(cert))
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "check", "--graph", "family:cycle?n=4")
    assert code == 1 and len(json.loads(out)["witness"]) == 4


def load_graph_from_family(spec):
    from pursuit.families import make

    return make(spec)


def test_invalid_certificate_exits_1(capsys, tmp_path):
    g = load_graph_from_family("K")
    bad = tmp_path / "bad.json"
    order = list(reversed(g.labels))
    bad.write_text(json.dumps({"order": order, "parents": {v: order[0] for v in order[1:]}}))
    code, out, _ = run(capsys, "check", "--graph", "family:K", "--cert", str(bad))
    assert code == 1 and not json.loads(out)["valid"]


def test_family_export_round_trip(capsys, tmp_path):
    gpath, dpath = tmp_path / "k.json", tmp_path / "k.dot"
    code, out, _ = run(capsys, "family", "--spec", "K", "--out", str(gpath), "--dot", str(dpath))
    assert code == 0 and json.loads(out)["vertices"] == 7
    assert load_graph(gpath).dumps() == load_graph_from_family("K").dumps()
    assert dpath.read_text().startswith("graph ")
    code, out, _ = run(capsys, "family", "--spec", "path?n=3")
    assert code == 0 and json.loads(out)["format"] == "pursuit-graph-v1"
    code, _, _ = run(capsys, "check", "--graph", str(gpath))
    assert code == 0


def test_solve(capsys, tmp_path):
    path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "--graph", "family:K", "--policies", "--out", str(path))
    data = json.loads(out)
    assert code == 0 and data["capture_time"] == 3 and "cop_policy" not in data
    assert len(json.loads(path.read_text())["cop_policy"]) == 42
    code, out, _ = run(capsys, "solve", "--graph", "family:K", "--forbid", "y")
    assert code == 1 and not json.loads(out)["copwin"]
    code, _, _ = run(capsys, "solve", "--graph", "family:cycle?n=4")
    assert code == 1


def test_simulate_and_replay(capsys, tmp_path):
    path = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "simulate", "--graph", "family:gee", "--cop", "random", "--robber", "gee",
                       "--steps", "300", "--seed", "4", "--out", str(path), "--marks", "0")
    assert code == 0 and json.loads(out)["outcome"] == "horizon"
    tr = Transcript.load(path)
    assert tr.header["marks"] == ["0"]
    code, out, _ = run(capsys, "simulate", "--replay", str(path))
    assert code == 0 and json.loads(out)["identical"]
    code, _, _ = run(capsys, "simulate", "--graph", "K", "--cop", "solver", "--robber", "solver")
    assert code == 0


def test_simulate_marks_with_commas(capsys, tmp_path):
    from pursuit.families import hgraph as H

    key = H.h_key(H.origin(0))
    code, out, _ = run(capsys, "simulate", "--graph", "family:hgraph", "--cop", "random", "--robber", "hgraph",
                       "--steps", "50", "--marks", key)
    assert code == 0 and key in json.loads(out)["metrics"]["marks"]


def test_search_hom(capsys):
    code, out, _ = run(capsys, "search-hom", "--graph", "family:two_k")
    assert code == 1 and json.loads(out)["result"] == "none"
    code, out, _ = run(capsys, "search-hom", "--graph", "family:K")
    assert code == 0 and json.loads(out)["result"] == "found"


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["check", "--graph", "family:nope"],
        ["check", "--graph", "/no/such/file.json"],
        ["solve", "--graph", "family:gee"],
        ["family", "--spec", "kchain"],
        ["simulate", "--graph", "family:K", "--cop", "gee", "--robber", "random"],
        ["simulate", "--graph", "family:K", "--cop", "solver"],
        ["simulate", "--graph", "family:K", "--cop", "solver", "--robber", "solver", "--steps", "0"],
        ["search-hom", "--graph", "family:K", "--budget-ms", "0"],
        ["paper-suite", "--only", "x"],
        ["paper-suite", "--only", "42"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_budget_exit_3(capsys, monkeypatch):
    import pursuit.solver as S

    monkeypatch.setattr(S, "STATE_BUDGET", 10)
    code, _, _ = run(capsys, "solve", "--graph", "family:K")
    assert code == 3


def test_paper_suite_single_check(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "paper-suite", "--quick", "--only", "7", "--json", str(path))
    assert code == 0 and "[PASS]  7" in out
    assert json.loads(path.read_text())[0]["ok"]
