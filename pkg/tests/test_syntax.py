"""Parser and renderer: round-trips, precedence, rejection of malformed input."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loctame import randgen
from loctame.syntax import (And, CheckError, Exists, GCI, Interval, Name,
                            ParseError, Query, RoleInclusion, Top, check_cbox,
                            parse_cbox, parse_concept,
                            parse_interpolation_input, render_cbox,
                            resolve_roles)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_render_parse_round_trip_normal(seed):
    cbox = randgen.normal_cbox(random.Random(seed))
    assert parse_cbox(render_cbox(cbox)) == cbox


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_render_parse_round_trip_extended(seed):
    cbox = randgen.extended_cbox(random.Random(seed))
    assert parse_cbox(render_cbox(cbox)) == cbox


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_render_parse_round_trip_numeric(seed):
    cbox = randgen.numeric_cbox(random.Random(seed))
    assert parse_cbox(render_cbox(cbox)) == cbox


def test_conjunction_binds_loosest():
    got = parse_concept("A and exists r . B and C")
    assert got == And((Name("A"), Exists("r", (Name("B"),)), Name("C")))


def test_parenthesized_filler_keeps_conjunction():
    got = parse_concept("exists r . (B and C)")
    assert got == Exists("r", (And((Name("B"), Name("C"))),))


def test_nary_filler_tuple():
    got = parse_concept("exists w . (A, B and top)")
    assert got == Exists("w", (Name("A"), And((Name("B"), Top()))))


def test_intervals_parse_and_render():
    for text, want in [("num up 3", Interval(Fraction(3), None)),
                       ("num down 7/2", Interval(None, Fraction(7, 2))),
                       ("num [1, 2]", Interval(Fraction(1), Fraction(2)))]:
        got = parse_concept(text)
        assert got == want
        assert parse_concept(str(got)) == got


def test_empty_interval_rejected():
    with pytest.raises(ParseError):
        parse_concept("num [3, 1]")


def test_statements(defs_cbox):
    assert len(defs_cbox.gcis) == 6
    assert len(defs_cbox.queries) == 1
    q = defs_cbox.queries[0]
    assert isinstance(q, Query) and q.rhs == Name("A3")


def test_comments_and_blank_lines():
    cbox = parse_cbox("# a comment\n\nA sub B  # trailing\n")
    assert cbox.gcis == (GCI(Name("A"), Name("B")),)


def test_parse_errors():
    for bad in ["A sub", "sub B", "? A", "role", "A and sub B",
                "decl role r : 1", "exists r B sub C",
                "role r = restrict w at 0 to C"]:
        with pytest.raises(ParseError):
            parse_cbox(bad + "\n")


def test_underscore_names_reserved():
    with pytest.raises(ParseError):
        parse_cbox("_x sub B\n")


def test_role_arity_checks(routes_cbox):
    env = resolve_roles(routes_cbox)
    assert env.sigs["r_interm"] == ("concept", "concept", "concept")
    assert env.sigs["rp"] == ("concept", "concept")
    # restricting away the only filler leaves no slots
    with pytest.raises(CheckError):
        check_cbox(parse_cbox(
            "role p = restrict r at 1 to C\nA sub exists p . B\n"))


def test_composition_needs_binary_prefix():
    bad = parse_cbox("decl role w : 3\nrole w o w sub w\n")
    with pytest.raises(CheckError):
        check_cbox(bad)


def test_interpolation_input_parses():
    inp = parse_interpolation_input(
        "role r o s sub r\n"
        "A: D sub exists s . Ax\n"
        "B: Bx sub D\n"
        "B: exists r . Bx nsub exists r . C\n")
    assert len(inp.a_gcis) == 1
    assert len(inp.b_gcis) == 1
    assert inp.neg.lhs == Exists("r", (Name("Bx"),))
    assert inp.cbox.role_incls == (RoleInclusion(("r", "s"), "r"),)


def test_interpolation_input_rejects_misplaced_lines():
    with pytest.raises(ParseError):
        parse_interpolation_input("A: X nsub Y\nB: X sub Y\n")
    with pytest.raises(ParseError):
        parse_interpolation_input("A: X sub Y\n")  # no negated query
    with pytest.raises(ParseError):
        parse_interpolation_input(
            "A: X sub Y\nB: X nsub Y\nB: Y nsub X\n")  # two of them
    with pytest.raises(ParseError):
        parse_interpolation_input("X sub Y\nB: X nsub Y\n")  # untagged GCI
