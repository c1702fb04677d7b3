"""Command-line behavior: exit codes, output shapes, JSON schemas."""

from __future__ import annotations

import io
import json

import pytest

from loctame import cli
from loctame.reduce import parse_reduction
from tests.conftest import (ANATOMY_TEXT, DEFS_TEXT, FREIGHT_TEXT,
                            ROUTES_TEXT, SPLIT_TEXT)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("defs", DEFS_TEXT), ("anatomy", ANATOMY_TEXT),
                       ("freight", FREIGHT_TEXT), ("routes", ROUTES_TEXT),
                       ("split", SPLIT_TEXT)]:
        p = tmp_path / f"{name}.lt"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_check_subsumed_queries_exit_zero(files, capsys):
    assert cli.main(["check", files["defs"]]) == 0
    out = capsys.readouterr().out
    assert "subsumed" in out and "not subsumed" not in out


def test_check_failing_query_exits_one(tmp_path, capsys):
    p = tmp_path / "bad.lt"
    p.write_text("A sub B\n? B sub A\n")
    assert cli.main(["check", str(p)]) == 1
    assert "not subsumed" in capsys.readouterr().out


def test_check_both_modes_give_the_same_verdicts(files, capsys):
    for mode in ("chase", "instantiate"):
        assert cli.main(["check", f"--mode={mode}", files["routes"]]) == 0
        assert "subsumed" in capsys.readouterr().out


def test_parse_error_exits_two(tmp_path, capsys):
    p = tmp_path / "broken.lt"
    p.write_text("A sub and\n")
    assert cli.main(["check", str(p)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_missing_file_exits_two(capsys):
    assert cli.main(["check", "/nonexistent/nowhere.lt"]) == 2
    assert "error:" in capsys.readouterr().err


def test_emit_psi_prints_the_eight_closure_terms(files, capsys):
    assert cli.main(["check", "--emit-psi", files["anatomy"]]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines == [
        "f_cont_in(Heart)",
        "f_cont_in(HeartValve)",
        "f_cont_in(HeartWall)",
        "f_has_loc(Endocard)",
        "f_has_loc(Heart)",
        "f_has_loc(HeartValve)",
        "f_has_loc(HeartWall)",
        "f_part_of(Heart)",
    ]


def test_emit_reduction_output_reparses(files, capsys):
    assert cli.main(["check", "--emit-reduction", files["defs"]]) == 0
    text = capsys.readouterr().out
    prob = parse_reduction(text)
    assert prob.goal is not None
    assert prob.facts and prob.clauses


def test_check_json_schema(files, capsys):
    assert cli.main(["check", "--json", files["anatomy"]]) == 0
    body = json.loads(capsys.readouterr().out)
    assert isinstance(body, list) and len(body) == 1
    assert set(body[0]) == {"query", "verdict", "psi_size", "clause_count",
                            "micros_per_stage"}
    assert body[0]["verdict"] == "subsumed"
    assert body[0]["psi_size"] == 8


def test_classify_lists_proper_subsumptions(files, capsys):
    assert cli.main(["classify", files["anatomy"]]) == 0
    out = capsys.readouterr().out
    assert "Endocarditis sub Heartdisease" in out
    assert out.strip().splitlines()[-1].startswith("#")


def test_classify_json_has_the_subsumer_map(files, capsys):
    assert cli.main(["classify", "--json", files["anatomy"]]) == 0
    body = json.loads(capsys.readouterr().out)
    assert "names" in body and "subsumers" in body
    assert "Heartdisease" in body["subsumers"]["Endocarditis"]
    assert "Endocarditis" in body["subsumers"]["Endocarditis"]


def test_explain_prints_labeled_steps(files, capsys):
    assert cli.main(["explain", files["anatomy"]]) == 0
    out = capsys.readouterr().out
    assert "subsumed" in out.splitlines()[0]
    assert "[input:" in out and "[trans:" in out


def test_explain_accepts_an_explicit_query(files, capsys):
    assert cli.main(["explain", files["anatomy"],
                     "Endocarditis sub Disease"]) == 0
    assert "subsumed" in capsys.readouterr().out


def test_explain_non_theorem_exits_one(files, capsys):
    assert cli.main(["explain", files["anatomy"],
                     "Heart sub Endocarditis"]) == 1
    assert "not subsumed" in capsys.readouterr().out


def test_explain_numeric_movements(files, capsys):
    assert cli.main(["explain", files["freight"]]) == 0
    out = capsys.readouterr().out
    assert "moved from the numeric side" in out
    assert "[Mon(f_price)]" in out and "[Mon(f_weight)]" in out


def test_solve_round_trip_derives_the_goal(files, tmp_path, capsys):
    assert cli.main(["check", "--emit-reduction", files["defs"]]) == 0
    red_file = tmp_path / "defs.red"
    red_file.write_text(capsys.readouterr().out)
    assert cli.main(["solve", str(red_file)]) == 0
    out = capsys.readouterr().out
    assert "goal derived" in out


def test_solve_underivable_goal_exits_one(tmp_path, capsys):
    p = tmp_path / "open.red"
    p.write_text("fact a <= b\ngoal b <= a\n")
    assert cli.main(["solve", str(p)]) == 1
    assert "goal not derived" in capsys.readouterr().out


def test_solve_without_goal_prints_the_least_model(tmp_path, capsys):
    p = tmp_path / "model.red"
    p.write_text("fact a <= b\nclause a <= b -> b <= c\n")
    assert cli.main(["solve", str(p)]) == 0
    out = capsys.readouterr().out
    assert "a <= b" in out and "b <= c" in out


def test_interpolate_prints_concept_inclusions(files, capsys):
    assert cli.main(["interpolate", files["split"]]) == 0
    assert capsys.readouterr().out.strip() == "exists r . D sub exists r . C"


def test_interpolate_json_schema(files, capsys):
    assert cli.main(["interpolate", "--json", files["split"]]) == 0
    body = json.loads(capsys.readouterr().out)
    assert set(body) == {"interpolant", "iterations", "ops_shared",
                         "shared_names"}
    assert body["interpolant"] == ["exists r . D sub exists r . C"]
    assert body["ops_shared"] is True
    assert "C" in body["shared_names"] and "D" in body["shared_names"]


def test_interpolate_satisfiable_sides_exit_one(tmp_path, capsys):
    p = tmp_path / "sat.lt"
    p.write_text("A: X sub Y\nB: Z nsub W\n")
    assert cli.main(["interpolate", str(p)]) == 1
    assert "no interpolant" in capsys.readouterr().err


def test_interpolate_trivial_case_prints_top(tmp_path, capsys):
    p = tmp_path / "triv.lt"
    p.write_text("A: P sub Q\nB: X sub Y\nB: X nsub Y\n")
    assert cli.main(["interpolate", str(p)]) == 0
    assert capsys.readouterr().out.strip() == "top"


def test_cross_check_file_and_samples_pass(files, capsys):
    assert cli.main(["cross-check", files["routes"], "--samples", "5",
                     "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "cross-check PASS" in out
    assert "0 failures" in out


def test_cross_check_without_work_exits_two(capsys):
    assert cli.main(["cross-check"]) == 2
    assert "error:" in capsys.readouterr().err


def test_check_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("A sub B\n? A sub B\n"))
    assert cli.main(["check", "-"]) == 0
    assert "subsumed" in capsys.readouterr().out


def test_check_normalize_flag(files, capsys):
    assert cli.main(["check", "--normalize", files["anatomy"]]) == 0
    assert "subsumed" in capsys.readouterr().out
