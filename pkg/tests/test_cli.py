import json

import pytest

from artifact import cli, decide, fixtures, generators, synth
from artifact.model import format_mdp, parse_mdp
from artifact.oracle import truth_table_sat

BROKEN = """mdp
states: s0 s1
actions: a
parity p: s0=0 s1=1
trans s0 a: s1=1/2
"""


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decide_exit_codes(capsys):
    code, out, _ = _run(capsys, "decide", "--mdp", "fixture:fig1", "--formula", "NZ(p1) & NZ(p2)", "--state", "s0")
    assert code == cli.EXIT_YES and out.startswith("yes")
    code, out, _ = _run(capsys, "decide", "--mdp", "fixture:fig1", "--formula", "A(p2)", "--state", "s1")
    assert code == cli.EXIT_NO and out.startswith("no")


@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "--mdp", "fixture:fig1", "--formula", "A(p1", "--state", "s0"],
        ["decide", "--mdp", "fixture:fig1", "--formula", "A(q)", "--state", "s0"],
        ["decide", "--mdp", "fixture:fig1", "--formula", "A(p1)", "--state", "nowhere"],
        ["decide", "--mdp", "fixture:nope", "--formula", "A(p1)", "--state", "s0"],
        ["decide", "--mdp", "missing.mdp", "--formula", "A(p1)", "--state", "s0"],
        ["decide", "--mdp", "fixture:fig1", "--state", "s0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert out == ""


def test_validate_broken(tmp_path, capsys):
    p = tmp_path / "broken.mdp"
    p.write_text(BROKEN)
    code, out, err = _run(capsys, "validate", "--mdp", str(p))
    assert code == cli.EXIT_USAGE
    assert len(err.strip().splitlines()) >= 2
    p.write_text(BROKEN + "trans s1 a: s9=1\n")
    code, _, err = _run(capsys, "validate", "--mdp", str(p))
    assert code == cli.EXIT_USAGE and "line 6" in err and "s9" in err
    good = tmp_path / "good.mdp"
    good.write_text(format_mdp(generators.random_mdp(1)))
    code, out, _ = _run(capsys, "validate", "--mdp", str(good))
    assert code == cli.EXIT_YES and out.startswith("ok")


def test_verdict_json_round_trip(capsys):
    code, out, _ = _run(capsys, "decide", "--mdp", "fixture:fig4", "--formula", "A(p1) & AS(p2)", "--state", "s", "--json")
    assert code == cli.EXIT_YES
    doc = json.loads(out)
    assert doc["answer"] == "yes"
    assert decide.Verdict.from_json(doc).to_json() == doc


def test_random_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.mdp", tmp_path / "b.mdp"
    for p in (a, b):
        assert _run(capsys, "random", "--seed", "42", "--states", "6", "--out", str(p))[0] == 0
    assert a.read_text() == b.read_text()
    assert "seed=42" in a.read_text().splitlines()[0]
    m = parse_mdp(a.read_text())
    assert len(m.states) == 6


@pytest.mark.parametrize("seed", range(12))
def test_verify_on_random_instances(tmp_path, capsys, seed):
    p = tmp_path / "r.mdp"
    p.write_text(format_mdp(generators.random_mdp(seed, states=5)))
    c = generators.random_clause(seed, ["p1", "p2"], max_atoms=2)
    f = str(c)
    code, out, err = _run(capsys, "decide", "--mdp", str(p), "--formula", f, "--state", "s0", "--verify")
    assert code in (cli.EXIT_YES, cli.EXIT_NO), err
    assert "oracle agrees" in err
    assert (code == cli.EXIT_YES) == decide.decide_formula(parse_mdp(p.read_text()), "s0", f).answer


def test_synth_then_simulate(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = _run(capsys, "synth", "--mdp", "fixture:fig7", "--formula", "A(p1) & AS(p2) & NZ(p3)", "--state", "s", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["epsilon"] == "1/2" and doc["strategy"]["kind"] == "exist_switch"
    code, text, _ = _run(
        capsys, "simulate", "--mdp", "fixture:fig7", "--state", "s", "--strategy", str(out),
        "--objective", "p1", "--objective", "reach:w", "--runs", "20", "--horizon", "200", "--seed", "4",
    )
    assert code == 0
    res = json.loads(text)
    assert res["seed"] == 4 and res["estimates"]["p1"]["value"] == 1.0
    again = _run(
        capsys, "simulate", "--mdp", "fixture:fig7", "--state", "s", "--strategy", str(out),
        "--objective", "p1", "--objective", "reach:w", "--runs", "20", "--horizon", "200", "--seed", "4",
    )[1]
    assert json.loads(again) == res


def test_synth_unrealizable(capsys):
    code, out, err = _run(capsys, "synth", "--mdp", "fixture:fig1", "--formula", "A(p2)", "--state", "s1")
    assert code == cli.EXIT_NO and "not realizable" in err


def test_ecs_classification(capsys):
    code, out, _ = _run(capsys, "ecs", "--mdp", "fixture:fig4", "--sure", "p1", "--almost", "p2")
    assert code == 0
    kinds = [e["type"] for e in json.loads(out)["ecs"]]
    assert "MEC" in kinds and "II" in kinds


def test_gen_sat_round_trip(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    mdp, formula = tmp_path / "f.mdp", tmp_path / "f.qpl"
    code, out, _ = _run(capsys, "gen-sat", "--cnf", str(cnf), "--out-mdp", str(mdp), "--out-formula", str(formula))
    assert code == 0
    info = json.loads(out)
    code, _, _ = _run(capsys, "decide", "--mdp", str(mdp), "--formula-file", str(formula), "--state", info["state"])
    assert (code == cli.EXIT_YES) == (truth_table_sat(info["cnf"]) is not None)


def test_invariant_violation_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise decide.InvariantViolation("forced")

    monkeypatch.setattr(decide, "decide_formula", boom)
    code, _, err = _run(capsys, "decide", "--mdp", "fixture:fig1", "--formula", "A(p1)", "--state", "s0")
    assert code == cli.EXIT_INVARIANT and "invariant" in err


def test_emit_dot(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    code, _, _ = _run(capsys, "decide", "--mdp", "fixture:fig2", "--formula", "A(p)", "--state", "s", "--emit-dot", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph")


def test_strategy_file_accepts_bare_strategy(tmp_path, capsys):
    m = fixtures.fig1()
    p = tmp_path / "bare.json"
    p.write_text(json.dumps(synth.MemorylessDet({0: 0, 1: 0, 2: 1}).to_json(m)))
    code, out, _ = _run(capsys, "simulate", "--mdp", "fixture:fig1", "--state", "s0", "--strategy", str(p), "--objective", "reach:s1", "--runs", "5", "--horizon", "3")
    assert code == 0 and json.loads(out)["estimates"]["reach:s1"]["successes"] == 5
