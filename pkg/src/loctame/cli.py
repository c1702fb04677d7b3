"""Command-line front end.

Subcommands:

    check        evaluate every `?` query of a file
    classify     the full name-against-name subsumption matrix
    explain      print a derivation for a query
    solve        run the Horn solver on a raw reduction dump
    interpolate  ground interpolant for an A:/B: split file
    cross-check  compare the pipeline against the independent oracles

Exit codes: 0 when everything holds / agrees, 1 when some query fails
or a disagreement is found, 2 on usage, parse, or check errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import replace
from typing import Optional

from . import hornsat, oracle, pipeline, randgen
from . import reduce as red
from .interpolate import NotUnsat, interpolate_input
from .syntax import (Bot, CheckError, LoctameError, Name, Query, Top,
                     parse_cbox, parse_interpolation_input)


def _load(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _parse_query(text: str) -> Query:
    stripped = text.strip()
    if not stripped.startswith("?"):
        stripped = "? " + stripped
    box = parse_cbox(stripped + "\n")
    if len(box.queries) != 1 or box.gcis or box.role_incls or box.roles:
        raise CheckError(f"expected a single query, got {text!r}")
    return box.queries[0]


# ---------------------------------------------------------------------------
# dumps shared by check / classify / explain
# ---------------------------------------------------------------------------

def _wants_dump(args: argparse.Namespace) -> bool:
    return args.emit_psi or args.emit_reduction


def _emit_dumps(report: pipeline.Report, args: argparse.Namespace,
                header: Optional[str] = None) -> None:
    if header is not None:
        print(f"# {header}")
    if args.emit_psi:
        sys.stdout.write(pipeline.emit_psi(report))
    if args.emit_reduction:
        if report.sl is None:
            print("# no lattice problem: the goal was decided numerically")
        else:
            sys.stdout.write(red.render_reduction(report.sl))


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def cmd_check(args: argparse.Namespace) -> int:
    cbox = parse_cbox(_load(args.file))
    if not cbox.queries:
        raise CheckError("the file has no queries (add `? C sub D` lines)")
    reports = [pipeline.check_subsumption(cbox, q, mode=args.mode,
                                          normalize=args.normalize)
               for q in cbox.queries]
    if args.json:
        print(json.dumps([pipeline.json_report(r) for r in reports], indent=2))
    elif _wants_dump(args):
        many = len(reports) > 1
        for r in reports:
            _emit_dumps(r, args, header=str(r.query) if many else None)
    else:
        for r in reports:
            verdict = "subsumed" if r.subsumed else "not subsumed"
            print(f"{r.query}: {verdict}")
    return 0 if all(r.subsumed for r in reports) else 1


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args: argparse.Namespace) -> int:
    cbox = parse_cbox(_load(args.file))
    cls = pipeline.classify(cbox, mode=args.mode, normalize=args.normalize)
    names = sorted(cls.names)
    if args.json:
        body = pipeline.json_report(cls.report)
        body["names"] = names
        body["subsumers"] = {a: sorted(b for b in names if cls.holds(a, b))
                             for a in names}
        print(json.dumps(body, indent=2))
    elif _wants_dump(args):
        _emit_dumps(cls.report, args)
    else:
        pairs = [(a, b) for a in names for b in names
                 if a != b and cls.holds(a, b)]
        for a, b in pairs:
            print(f"{a} sub {b}")
        print(f"# {len(names)} names, {len(pairs)} proper subsumptions")
    return 0


# ---------------------------------------------------------------------------
# explain
# ---------------------------------------------------------------------------

def cmd_explain(args: argparse.Namespace) -> int:
    cbox = parse_cbox(_load(args.file))
    if args.query is not None:
        queries = [_parse_query(args.query)]
        cbox = replace(cbox, queries=tuple(queries))
    else:
        queries = list(cbox.queries)
    if not queries:
        raise CheckError("nothing to explain: pass a query or add `?` lines")

    all_hold = True
    out = []
    for q in queries:
        report, lines = pipeline.explain(cbox, q, mode=args.mode)
        all_hold &= report.subsumed
        if args.json:
            body = pipeline.json_report(report)
            body["derivation"] = lines
            out.append(body)
        elif _wants_dump(args):
            _emit_dumps(report, args,
                        header=str(q) if len(queries) > 1 else None)
        else:
            verdict = "subsumed" if report.subsumed else "not subsumed"
            print(f"{q}: {verdict}")
            for line in lines:
                print(f"  {line}")
    if args.json:
        print(json.dumps(out, indent=2))
    return 0 if all_hold else 1


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _render_steps(steps: list[hornsat.TraceStep]) -> list[str]:
    def atom(a: hornsat.AtomKey) -> str:
        return f"{a[0]} <= {a[1]}"

    lines = []
    for step in steps:
        if step.kind == "fact" or not step.premises:
            lines.append(f"{atom(step.atom)}   [{step.label}]")
        else:
            prems = "; ".join(atom(p) for p in step.premises)
            lines.append(f"{atom(step.atom)}   [{step.label}: {prems}]")
    return lines


def cmd_solve(args: argparse.Namespace) -> int:
    sl = red.parse_reduction(_load(args.file))
    result = hornsat.solve_problem(sl.facts, sl.clauses, sl.goal,
                                   transitive=args.mode == red.CHASE)
    if result.sat:
        hornsat.model_check(result, sl.facts, sl.clauses, sl.goal)
    model = sorted(result.model())
    if args.json:
        print(json.dumps({
            "verdict": "sat" if result.sat else "goal-derived",
            "goal": f"{sl.goal[0]} <= {sl.goal[1]}" if sl.goal else None,
            "atoms": len(model),
        }, indent=2))
    elif sl.goal is None:
        for a, b in model:
            print(f"{a} <= {b}")
    elif result.sat:
        print(f"goal not derived: {sl.goal[0]} <= {sl.goal[1]}")
    else:
        print(f"goal derived: {sl.goal[0]} <= {sl.goal[1]}")
        for line in _render_steps(result.solver.trace(sl.goal)):
            print(f"  {line}")
    if sl.goal is None:
        return 0
    return 1 if result.sat else 0


# ---------------------------------------------------------------------------
# interpolate
# ---------------------------------------------------------------------------

def cmd_interpolate(args: argparse.Namespace) -> int:
    inp = parse_interpolation_input(_load(args.file))
    try:
        result, gcis = interpolate_input(inp)
    except NotUnsat as exc:
        print(f"no interpolant: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({
            "interpolant": [str(g) for g in gcis],
            "iterations": result.iterations,
            "ops_shared": result.ops_shared,
            "shared_names": sorted(n for n in result.shared_consts
                                   if not n.startswith("__")),
        }, indent=2))
    elif not gcis:
        print("top")
    else:
        for g in gcis:
            print(g)
    return 0


# ---------------------------------------------------------------------------
# cross-check
# ---------------------------------------------------------------------------

def _atomic_key(c) -> Optional[str]:
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Top):
        return oracle.TOP_KEY
    if isinstance(c, Bot):
        return oracle.BOT_KEY
    return None


def _completion_holds(subs: dict[str, frozenset[str]], a: str, b: str) -> bool:
    below = subs.get(a, frozenset())
    return b in below or oracle.BOT_KEY in below


def _check_file_queries(cbox, failures: list[str], lines: list[str]) -> int:
    """Cross-check every query of a parsed file; returns the check count."""
    try:
        subs = oracle.completion_classify(cbox)
    except LoctameError:
        subs = None
    checks = 0
    for q in cbox.queries:
        checks += 1
        chase = pipeline.subsumes(cbox, q, mode=red.CHASE)
        inst = pipeline.subsumes(cbox, q, mode=red.INSTANTIATE)
        parts = [f"chase={'subsumed' if chase else 'not-subsumed'}",
                 f"instantiate={'subsumed' if inst else 'not-subsumed'}"]
        bad = []
        if chase != inst:
            bad.append("the two modes disagree")
        a, b = _atomic_key(q.lhs), _atomic_key(q.rhs)
        if subs is not None and a is not None and b is not None:
            want = _completion_holds(subs, a, b)
            parts.append(f"completion={'subsumed' if want else 'not-subsumed'}")
            if want != chase:
                bad.append("completion disagrees")
        try:
            model = oracle.bounded_model_search(cbox, q, max_size=3)
        except LoctameError:
            model = None
        else:
            if model is not None:
                parts.append(f"countermodel of size {model.size}")
                if chase:
                    bad.append("a countermodel refutes the subsumed verdict")
        status = "FAIL: " + "; ".join(bad) if bad else "OK"
        lines.append(f"{q}: {', '.join(parts)} -- {status}")
        if bad:
            failures.append(f"{q}: {'; '.join(bad)}")
    return checks


def _check_sample(seed: int, failures: list[str], lines: list[str]) -> int:
    """One random instance against the oracles; returns the pair count."""
    rng = random.Random(seed)
    if seed % 5 == 4:
        cbox = randgen.extended_cbox(rng)
        query = randgen.random_query(rng, cbox)
        chase = pipeline.subsumes(cbox, query, mode=red.CHASE)
        inst = pipeline.subsumes(cbox, query, mode=red.INSTANTIATE)
        bad = []
        if chase != inst:
            bad.append("the two modes disagree")
        if chase and oracle.bounded_model_search(cbox, query, 3) is not None:
            bad.append("a countermodel refutes the subsumed verdict")
        if bad:
            failures.append(f"seed {seed}: {'; '.join(bad)}")
            lines.append(f"seed {seed} (guarded): FAIL {'; '.join(bad)}")
        return 1

    cbox = randgen.normal_cbox(rng)
    subs = oracle.completion_classify(cbox)
    chase = pipeline.classify(cbox, mode=red.CHASE)
    inst = pipeline.classify(cbox, mode=red.INSTANTIATE)
    checked = 0
    for a in chase.names:
        for b in chase.names:
            checked += 1
            got = chase.holds(a, b)
            if got != inst.holds(a, b):
                failures.append(f"seed {seed}: modes split on {a} sub {b}")
                lines.append(f"seed {seed}: FAIL modes split on {a} sub {b}")
                return checked
            if got != _completion_holds(subs, a, b):
                failures.append(f"seed {seed}: {a} sub {b} is "
                                f"{'derivable' if got else 'underivable'} in "
                                "the pipeline but not for completion")
                lines.append(f"seed {seed}: FAIL completion split "
                             f"on {a} sub {b}")
                return checked
    return checked


def cmd_cross_check(args: argparse.Namespace) -> int:
    failures: list[str] = []
    lines: list[str] = []
    checks = 0
    if args.file is not None:
        checks += _check_file_queries(parse_cbox(_load(args.file)),
                                      failures, lines)
    for i in range(args.samples):
        checks += _check_sample(args.seed + i, failures, lines)
    if checks == 0:
        raise CheckError("nothing to cross-check: pass a file with queries "
                         "or --samples N")
    if args.json:
        print(json.dumps({
            "checks": checks,
            "samples": args.samples,
            "failures": failures,
        }, indent=2))
    else:
        for line in lines:
            print(line)
        verdict = "FAIL" if failures else "PASS"
        print(f"cross-check {verdict}: {checks} checks, "
              f"{len(failures)} failures")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser, emit: bool = False) -> None:
    sub.add_argument("--mode", choices=(red.INSTANTIATE, red.CHASE),
                     default=red.CHASE,
                     help="materialize the lattice theory, or chase it "
                          "inside the solver (default)")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable report on stdout")
    sub.add_argument("--seed", type=int, default=0,
                     help="base seed for anything randomized")
    if emit:
        sub.add_argument("--normalize", action="store_true",
                         help="rewrite to normal form first")
        sub.add_argument("--emit-psi", action="store_true",
                         help="print the closure term set instead of verdicts")
        sub.add_argument("--emit-reduction", action="store_true",
                         help="print the ground Horn problem instead of "
                              "verdicts (solve reads this format)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loctame",
        description="subsumption checking and ground interpolation for "
                    "EL-family concept boxes")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="evaluate every `?` query of a file")
    p.add_argument("file", help="input file, or - for stdin")
    _add_common(p, emit=True)
    p.set_defaults(func=cmd_check)

    p = subs.add_parser("classify", help="all name-against-name subsumptions")
    p.add_argument("file", help="input file, or - for stdin")
    _add_common(p, emit=True)
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("explain", help="print a derivation for a query")
    p.add_argument("file", help="input file, or - for stdin")
    p.add_argument("query", nargs="?",
                   help="a `C sub D` question (default: the file's queries)")
    _add_common(p, emit=True)
    p.set_defaults(func=cmd_explain)

    p = subs.add_parser("solve", help="run the solver on a reduction dump")
    p.add_argument("file", help="fact/clause/goal lines, or - for stdin")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("interpolate",
                        help="ground interpolant for an A:/B: split file")
    p.add_argument("file", help="input file, or - for stdin")
    _add_common(p)
    p.set_defaults(func=cmd_interpolate)

    p = subs.add_parser("cross-check",
                        help="compare the pipeline against the oracles")
    p.add_argument("file", nargs="?",
                   help="optional file whose queries are cross-checked")
    p.add_argument("--samples", type=int, default=0,
                   help="also run this many random instances")
    _add_common(p)
    p.set_defaults(func=cmd_cross_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LoctameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
