"""Seeded instance generators for tests, benchmarks and `cross-check`.

Every generator takes a `random.Random` so runs are reproducible from a
seed.  None of them ever emit `bot` or numeric intervals unless that is
the point of the generator: the cross-check corpora must stay inside the
fragments their validating oracles understand.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from . import algebra as alg
from .syntax import (
    CONCEPT,
    NUM,
    And,
    CBox,
    Concept,
    Exists,
    GCI,
    InterpolationInput,
    Interval,
    Name,
    Query,
    RoleInclusion,
    RoleRestriction,
    Top,
)

_LETTERS = "ABCDEFGHIJKL"


def _names(n: int) -> list[str]:
    return list(_LETTERS[:n])


# ---------------------------------------------------------------------------
# normal-form binary corpus (completion-oracle territory)
# ---------------------------------------------------------------------------

def normal_cbox(rng: random.Random, max_names: int = 12, max_roles: int = 4,
                max_axioms: int = 30) -> CBox:
    """A random normal-form binary CBox: GCIs of the four normal shapes,
    role axioms plain or binary compositions, no guards, no bot."""
    names = _names(rng.randint(3, max_names))
    roles = ["r", "s", "t", "u"][:rng.randint(1, max_roles)]
    gcis: list[GCI] = []
    ris: list[RoleInclusion] = []
    for _ in range(rng.randint(4, max_axioms)):
        shape = rng.choice((0, 0, 1, 1, 2, 2, 3, 3, 4, 5))
        if shape == 0:
            gcis.append(GCI(Name(rng.choice(names)), Name(rng.choice(names))))
        elif shape == 1:
            a, b = rng.sample(names, 2) if len(names) > 1 else names * 2
            gcis.append(GCI(And((Name(a), Name(b))),
                            Name(rng.choice(names))))
        elif shape == 2:
            gcis.append(GCI(Name(rng.choice(names)),
                            Exists(rng.choice(roles),
                                   (Name(rng.choice(names)),))))
        elif shape == 3:
            gcis.append(GCI(Exists(rng.choice(roles),
                                   (Name(rng.choice(names)),)),
                            Name(rng.choice(names))))
        elif shape == 4:
            ris.append(RoleInclusion((rng.choice(roles),), rng.choice(roles)))
        else:
            ris.append(RoleInclusion((rng.choice(roles), rng.choice(roles)),
                                     rng.choice(roles)))
    return CBox(gcis=tuple(gcis), role_incls=tuple(ris))


# ---------------------------------------------------------------------------
# guarded / n-ary corpus (model-search territory)
# ---------------------------------------------------------------------------

def _concept(rng: random.Random, names: list[str],
             sigs: dict[str, tuple[str, ...]], depth: int) -> Concept:
    if depth <= 0 or rng.random() < 0.45:
        if rng.random() < 0.04:
            return Top()
        return Name(rng.choice(names))
    if rng.random() < 0.5:
        k = rng.randint(2, 3)
        return And(tuple(_concept(rng, names, sigs, depth - 1)
                         for _ in range(k)))
    role = rng.choice(list(sigs))
    nfill = len(sigs[role]) - 1
    return Exists(role, tuple(_concept(rng, names, sigs, depth - 1)
                              for _ in range(nfill)))


def extended_cbox(rng: random.Random, max_names: int = 6,
                  max_axioms: int = 12) -> CBox:
    """A random CBox exercising the full language except numerics and bot:
    n-ary roles, guards, restrictions, identity compositions, parallel
    compositions, long chains, nested concepts."""
    names = _names(rng.randint(2, max_names))
    sigs: dict[str, tuple[str, ...]] = {
        "r": (CONCEPT, CONCEPT), "s": (CONCEPT, CONCEPT)}
    declared: dict[str, tuple[str, ...]] = {}
    restrictions: list[RoleRestriction] = []
    have_ternary = rng.random() < 0.7
    if have_ternary:
        declared["w"] = (CONCEPT, CONCEPT, CONCEPT)
        sigs["w"] = declared["w"]
        if rng.random() < 0.5:
            declared["v"] = (CONCEPT, CONCEPT, CONCEPT)
            sigs["v"] = declared["v"]
    if have_ternary and rng.random() < 0.45:
        restrictions.append(RoleRestriction(
            "p", "w", rng.randint(1, 2), Name(rng.choice(names))))
        sigs["p"] = (CONCEPT, CONCEPT)

    def guard() -> Optional[Concept]:
        return Name(rng.choice(names)) if rng.random() < 0.5 else None

    gcis: list[GCI] = []
    ris: list[RoleInclusion] = []
    binary = [n for n, sg in sigs.items() if len(sg) == 2]
    for _ in range(rng.randint(3, max_axioms)):
        kind = rng.random()
        if kind < 0.62:
            gcis.append(GCI(_concept(rng, names, sigs, 2),
                            _concept(rng, names, sigs, 2)))
        elif kind < 0.72:
            pool = list(sigs)
            a = rng.choice(pool)
            same = [x for x in pool if len(sigs[x]) == len(sigs[a])]
            ris.append(RoleInclusion((a,), rng.choice(same), guard()))
        elif kind < 0.84:
            ris.append(RoleInclusion(
                (rng.choice(binary), rng.choice(binary)),
                rng.choice(binary), guard()))
        elif kind < 0.90:
            ris.append(RoleInclusion(
                (rng.choice(binary), rng.choice(binary), rng.choice(binary)),
                rng.choice(binary), guard()))
        elif kind < 0.96 and "w" in sigs and "v" in sigs:
            lead, rhs = rng.sample(("w", "v"), 2)
            ris.append(RoleInclusion(
                (lead, rng.choice(binary), rng.choice(binary)),
                rhs, guard(), parallel=True))
        else:
            ris.append(RoleInclusion(
                (rng.choice(binary), rng.choice(binary)), None, guard()))
    return CBox(roles=declared, restrictions=tuple(restrictions),
                gcis=tuple(gcis), role_incls=tuple(ris))


def random_query(rng: random.Random, cbox: CBox) -> Query:
    names = sorted({n.name for g in cbox.gcis
                    for n in _names_in(g.lhs) | _names_in(g.rhs)}) or ["A"]
    sigs: dict[str, tuple[str, ...]] = dict(cbox.roles)
    for g in cbox.gcis:
        for r in _roles_in(g.lhs) | _roles_in(g.rhs):
            sigs.setdefault(r, (CONCEPT, CONCEPT))
    for rr in cbox.restrictions:
        base = sigs.get(rr.base, (CONCEPT, CONCEPT, CONCEPT))
        sigs[rr.name] = base[:rr.position] + base[rr.position + 1:]
    sigs = {r: sg for r, sg in sigs.items()
            if all(x == CONCEPT for x in sg)}
    if not sigs:
        sigs["r"] = (CONCEPT, CONCEPT)
    depth = rng.randint(0, 2)
    return Query(_concept(rng, names, sigs, depth),
                 _concept(rng, names, sigs, depth))


def numeric_query(rng: random.Random, cbox: CBox) -> Query:
    names = sorted({n.name for g in cbox.gcis
                    for n in _names_in(g.lhs) | _names_in(g.rhs)}) or ["A"]

    def side() -> Concept:
        k = rng.random()
        if k < 0.5:
            return Name(rng.choice(names))
        role = rng.choice([r for r, sg in cbox.roles.items()
                           if sg == (CONCEPT, NUM)] or ["p"])
        return Exists(role, (_interval(rng),))

    return Query(side(), side())


def _names_in(c: Concept) -> set[Name]:
    if isinstance(c, Name):
        return {c}
    if isinstance(c, And):
        return set().union(*(_names_in(a) for a in c.args))
    if isinstance(c, Exists):
        return set().union(*(_names_in(f) for f in c.fillers)) if c.fillers else set()
    return set()


def _roles_in(c: Concept) -> set[str]:
    if isinstance(c, And):
        return set().union(*(_roles_in(a) for a in c.args))
    if isinstance(c, Exists):
        out = {c.role}
        for f in c.fillers:
            out |= _roles_in(f)
        return out
    return set()


# ---------------------------------------------------------------------------
# numeric corpus (mode-equivalence territory)
# ---------------------------------------------------------------------------

def _interval(rng: random.Random) -> Interval:
    def point() -> Fraction:
        return Fraction(rng.randint(-6, 6), rng.choice((1, 1, 2)))

    k = rng.randrange(3)
    if k == 0:
        return Interval(point(), None)
    if k == 1:
        return Interval(None, point())
    a, b = sorted((point(), point()))
    return Interval(a, b)


def numeric_cbox(rng: random.Random, max_names: int = 6,
                 max_axioms: int = 12) -> CBox:
    """A random CBox over binary concept roles plus interval-filler roles."""
    names = _names(rng.randint(2, max_names))
    declared = {"p": (CONCEPT, NUM), "q": (CONCEPT, NUM)}
    sigs = dict(declared)
    sigs["r"] = (CONCEPT, CONCEPT)

    def side() -> Concept:
        k = rng.random()
        if k < 0.35:
            return Name(rng.choice(names))
        if k < 0.6:
            return Exists(rng.choice(("p", "q")), (_interval(rng),))
        if k < 0.8:
            return And((Name(rng.choice(names)),
                        Exists(rng.choice(("p", "q")), (_interval(rng),))))
        return Exists("r", (Name(rng.choice(names)),))

    gcis = [GCI(side(), side()) for _ in range(rng.randint(3, max_axioms))]
    ris: list[RoleInclusion] = []
    if rng.random() < 0.5:
        ris.append(RoleInclusion(("r", rng.choice(("p", "q"))),
                                 rng.choice(("p", "q"))))
    if rng.random() < 0.3:
        ris.append(RoleInclusion(("p",), "q"))
    return CBox(roles=declared, gcis=tuple(gcis), role_incls=tuple(ris))


# ---------------------------------------------------------------------------
# raw algebra problems (closure-property territory)
# ---------------------------------------------------------------------------

def algebra_problem(rng: random.Random, allow_ri: bool = True,
                    ) -> tuple[list[alg.AlgAxiom], list[alg.FlatTerm]]:
    """Random (axioms, seed terms) pairs for closure experiments."""
    ops = ["f", "g", "h"][:rng.randint(1, 3)]
    axioms: list[alg.AlgAxiom] = [alg.Mon(o, 1) for o in ops]
    if allow_ri:
        for _ in range(rng.randrange(0, 4)):
            kind = rng.randrange(3)
            if kind == 0:
                axioms.append(alg.K1(alg.plain_template(rng.choice(ops), 1),
                                     alg.plain_template(rng.choice(ops), 1)))
            elif kind == 1:
                axioms.append(alg.K2(alg.plain_template(rng.choice(ops), 1),
                                     (alg.plain_template(rng.choice(ops), 1),),
                                     alg.plain_template(rng.choice(ops), 1)))
            else:
                axioms.append(alg.K3(alg.plain_template(rng.choice(ops), 1),
                                     (alg.plain_template(rng.choice(ops), 1),)))
    consts = [alg.Const(c) for c in "abc"]

    def term(depth: int) -> alg.FlatTerm:
        if depth <= 0 or rng.random() < 0.4:
            return rng.choice(consts)
        if rng.random() < 0.25:
            return alg.Meet((rng.choice(consts), rng.choice(consts)))
        return alg.Apply(rng.choice(ops), (term(depth - 1),))

    seeds = [alg.Apply(rng.choice(ops), (term(rng.randint(0, 2)),))
             for _ in range(rng.randint(1, 6))]
    return axioms, seeds


# ---------------------------------------------------------------------------
# interpolation splits (verified-by-pipeline territory)
# ---------------------------------------------------------------------------

def interpolation_split(rng: random.Random) -> Optional[InterpolationInput]:
    """A random unsatisfiable A/B split, or None when this draw produced no
    nontrivially subsumed name pair to negate."""
    from .oracle import completion_classify

    cbox = normal_cbox(rng, max_names=7, max_roles=2, max_axioms=14)
    subs = completion_classify(cbox)
    names = sorted({n.name for g in cbox.gcis
                    for n in _names_in(g.lhs) | _names_in(g.rhs)})
    pairs = [(a, b) for a in names for b in subs.get(a, frozenset())
             if b != a and b in names]
    if not pairs:
        return None
    a_name, b_name = pairs[rng.randrange(len(pairs))]
    a_gcis, b_gcis = [], []
    for g in cbox.gcis:
        (a_gcis if rng.random() < 0.5 else b_gcis).append(g)
    return InterpolationInput(
        cbox=CBox(role_incls=cbox.role_incls),
        a_gcis=tuple(a_gcis),
        b_gcis=tuple(b_gcis),
        neg=Query(Name(a_name), Name(b_name)),
    )


# ---------------------------------------------------------------------------
# deterministic scaling family (counting territory)
# ---------------------------------------------------------------------------

def scaling_family(n: int) -> CBox:
    """A CBox with exactly n concept axioms whose reduction grows linearly
    in n, used to measure how the instantiated clause set scales."""
    gcis: list[GCI] = []
    for i in range(n):
        a, b = Name(f"C{i}"), Name(f"C{i + 1}")
        if i % 3 == 0:
            gcis.append(GCI(a, Exists("r", (b,))))
        elif i % 3 == 1:
            gcis.append(GCI(Exists("r", (a,)), b))
        else:
            gcis.append(GCI(And((a, Name(f"C{i // 2}"))), b))
    ris = (RoleInclusion(("r", "r"), "r"),
           RoleInclusion(("r",), "s"))
    return CBox(gcis=tuple(gcis), role_incls=ris)
