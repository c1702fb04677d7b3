"""End-to-end decision procedures: parse tree in, verdict out.

check_subsumption runs the full reduction for one query:

    translate -> closure -> instantiate -> purify -> split/solve

classify answers all name-against-name queries with a single goal-free
run: name queries contribute no operator terms to the closure seed, so
the reduction is the same for every such query and the verdict is just
membership of the pair in the least model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import algebra as alg
from . import concdom, hornsat, normalize as norm
from . import reduce as red
from .syntax import CBox, Name, Query, LoctameError


@dataclass
class Report:
    subsumed: bool
    query: Optional[Query]
    problem: alg.AlgebraicProblem
    psi: list[alg.Apply]
    instances: list[alg.Instance]
    purified: red.PurifiedProblem
    combine: concdom.CombineResult
    micros: dict[str, int] = field(default_factory=dict)

    @property
    def sl(self) -> Optional[red.SLProblem]:
        return self.combine.sl


def _now() -> int:
    return time.perf_counter_ns() // 1000


def _reduce(cbox: CBox, query: Optional[Query], mode: str,
            normalize: bool, mon_eq_variants: bool = True) -> Report:
    micros: dict[str, int] = {}
    t = _now()
    if normalize:
        cbox = norm.normalize(cbox)
        micros["normalize"] = _now() - t
        t = _now()
    problem = red.translate(cbox, query)
    micros["translate"] = _now() - t

    t = _now()
    psi = alg.psi_closure(alg.goal_seeds(problem.goal), problem.axioms)
    micros["closure"] = _now() - t

    t = _now()
    instances = alg.instantiate(problem.axioms, psi, mon_eq_variants)
    micros["instantiate"] = _now() - t

    t = _now()
    purified = red.flatten_purify(instances, problem.goal, problem)
    micros["purify"] = _now() - t

    t = _now()
    combine = concdom.combine_solve(purified, mode)
    micros["solve"] = _now() - t

    return Report(subsumed=combine.subsumed, query=query, problem=problem,
                  psi=psi, instances=instances, purified=purified,
                  combine=combine, micros=micros)


def check_subsumption(cbox: CBox, query: Query, mode: str = red.CHASE,
                      normalize: bool = False) -> Report:
    return _reduce(cbox, query, mode, normalize)


def subsumes(cbox: CBox, query: Query, mode: str = red.CHASE) -> bool:
    return check_subsumption(cbox, query, mode).subsumed


@dataclass
class Classification:
    names: list[str]
    report: Report

    def holds(self, a: str, b: str) -> bool:
        """Is the name a subsumed by the name b?"""
        res = self.report.combine.result
        if self.report.combine.vacuous:
            return True
        assert res is not None
        return res.holds((a, b))

    def pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.names for b in self.names
                if a != b and self.holds(a, b)]


def concept_names(cbox: CBox) -> list[str]:
    names: dict[str, None] = {}

    def walk(c) -> None:
        if isinstance(c, Name):
            names.setdefault(c.name, None)
        for attr in ("args", "fillers"):
            for a in getattr(c, attr, ()):
                walk(a)

    for g in cbox.gcis:
        walk(g.lhs)
        walk(g.rhs)
    for ri in cbox.role_incls:
        if ri.guard is not None:
            walk(ri.guard)
    for r in cbox.restrictions:
        walk(r.concept)
    for q in cbox.queries:
        walk(q.lhs)
        walk(q.rhs)
    return list(names)


def classify(cbox: CBox, mode: str = red.CHASE,
             normalize: bool = False) -> Classification:
    """All name-against-name subsumptions from one goal-free run."""
    report = _reduce(cbox, None, mode, normalize)
    return Classification(concept_names(cbox), report)


# ---------------------------------------------------------------------------
# explanations
# ---------------------------------------------------------------------------

def render_atom(purified: red.PurifiedProblem, atom: hornsat.AtomKey) -> str:
    return f"{purified.unfold(atom[0])} <= {purified.unfold(atom[1])}"


def explain(cbox: CBox, query: Query, mode: str = red.CHASE) -> tuple[Report, list[str]]:
    """The verdict together with a step list; proxies are unfolded back to
    operator/meet terms so the steps read in the reduction's own language."""
    report = check_subsumption(cbox, query, mode)
    lines: list[str] = []
    if not report.subsumed:
        lines.append("not subsumed: no derivation of the goal exists")
        return report, lines
    comb = report.combine
    if comb.vacuous:
        lines.append("subsumed vacuously: the numeric axioms are inconsistent")
        return report, lines
    if comb.result is None:
        lines.append("subsumed: the numeric axioms entail the goal endpoints")
        return report, lines
    for tag, atom in comb.movements:
        lines.append(f"moved from the numeric side [{tag}]: "
                     f"{render_atom(report.purified, atom)}")
    assert report.sl is not None and report.sl.goal is not None
    for step in comb.result.solver.trace(report.sl.goal):
        rendered = render_atom(report.purified, step.atom)
        if step.kind == "fact" or not step.premises:
            lines.append(f"{rendered}   [{step.label}]")
        else:
            prems = "; ".join(render_atom(report.purified, p) for p in step.premises)
            lines.append(f"{rendered}   [{step.label}: {prems}]")
    return report, lines


def emit_psi(report: Report) -> str:
    return "\n".join(sorted(str(t) for t in report.psi)) + "\n"


def json_report(report: Report) -> dict:
    sl = report.sl
    return {
        "query": str(report.query) if report.query is not None else None,
        "verdict": "subsumed" if report.subsumed else "not-subsumed",
        "psi_size": len(report.psi),
        "clause_count": len(sl.clauses) if sl is not None else 0,
        "micros_per_stage": report.micros,
    }
