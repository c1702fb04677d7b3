"""From concept boxes to ground Horn problems over a semilattice.

Three steps live here:

  translate       inclusions between concepts become inequations between
                  ground terms (names as constants, conjunction as meet,
                  existentials as monotone operators), role axioms become
                  the Horn axiom shapes of `algebra`;
  flatten_purify  every functional/meet term in the instantiated clause
                  set is replaced by a definitional proxy constant;
  sl_instantiate  the semilattice theory itself is unrolled over the
                  occurring constants (reflexivity, bounds, meet bounds,
                  meet introduction; in `instantiate` mode also explicit
                  transitivity and meet congruence, in `chase` mode those
                  two are delegated to the solver).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from . import algebra as alg
from .algebra import (Apply, Const, FixedSlot, FlatTerm, Goal, Instance, K1,
                      K2, K3, Leq, Lit, Meet, Mon, OpTemplate, VarSlot)
from .syntax import (BOT, CBox, CheckError, CONCEPT, Concept, GCI, Interval,
                     NUM, Query, RoleEnv, RoleInclusion, And, Bot, Exists,
                     Name, Top, check_cbox)

NUM_BOT = "__nbot"
NUM_TOP_LIT = Lit(Interval(None, None))

CHAIN_ROLE_PREFIX = "_chain"


def op_name(role: str) -> str:
    return f"f_{role}"


# ---------------------------------------------------------------------------
# translate
# ---------------------------------------------------------------------------

class _Translator:
    def __init__(self, cbox: CBox, env: Optional[RoleEnv] = None):
        self.cbox = cbox
        self.env = env if env is not None else check_cbox(cbox)
        self.ops: dict[str, tuple[str, ...]] = {}
        self.op_role: dict[str, str] = {}
        self.consts: dict[str, str] = {}
        self.chain_counter = 0

    def const(self, name: str, sort: str) -> Const:
        have = self.consts.setdefault(name, sort)
        if have != sort:
            raise CheckError(f"{name!r} used with sorts {have} and {sort}")
        return Const(name)

    def register_op(self, role: str) -> str:
        op = op_name(role)
        if op not in self.ops:
            self.ops[op] = self.env.fillers(role)
            self.op_role[op] = role
        return op

    def role_apply(self, role: str, args: list[FlatTerm]) -> Apply:
        """Apply a role's operator, expanding restriction chains."""
        exp = self.env.expansions.get(role)
        if exp is None:
            return Apply(self.register_op(role), tuple(args))
        base, pos, concept = exp
        plugged = self.term(concept, self.env.sigs[base][pos])
        return self.role_apply(base, args[:pos - 1] + [plugged] + args[pos - 1:])

    def term(self, c: Concept, sort: str) -> FlatTerm:
        if isinstance(c, Top):
            return NUM_TOP_LIT if sort == NUM else self.const(alg.TOP_CONST, CONCEPT)
        if isinstance(c, Bot):
            return self.const(NUM_BOT, NUM) if sort == NUM else self.const(alg.BOT_CONST, CONCEPT)
        if sort == NUM:
            return self.num_term(c)
        if isinstance(c, Name):
            return self.const(c.name, CONCEPT)
        if isinstance(c, Interval):
            raise CheckError(f"interval in a concept position: {c}")
        if isinstance(c, And):
            return Meet(tuple(self.term(a, CONCEPT) for a in c.args))
        if isinstance(c, Exists):
            fillers = self.env.fillers(c.role)
            args = [self.term(f, s) for f, s in zip(c.fillers, fillers)]
            return self.role_apply(c.role, args)
        raise CheckError(f"cannot translate {c!r}")

    def num_term(self, c: Concept) -> FlatTerm:
        """Numeric positions hold interval literals; meets intersect eagerly."""
        if isinstance(c, Interval):
            return Lit(c)
        if isinstance(c, Top):
            return NUM_TOP_LIT
        if isinstance(c, Bot):
            return self.const(NUM_BOT, NUM)
        if isinstance(c, And):
            lo, hi = None, None
            for a in c.args:
                t = self.num_term(a)
                if isinstance(t, Const):  # numeric bottom absorbs
                    return t
                iv = t.interval
                if iv.lo is not None and (lo is None or iv.lo > lo):
                    lo = iv.lo
                if iv.hi is not None and (hi is None or iv.hi < hi):
                    hi = iv.hi
            if lo is not None and hi is not None and lo > hi:
                return self.const(NUM_BOT, NUM)
            return Lit(Interval(lo, hi))
        raise CheckError(f"only intervals may appear in numeric positions: {c}")

    # -- role inclusion templates -------------------------------------------

    def raw_slots(self, role: str) -> tuple[str, list]:
        """The underlying operator of a (possibly restricted) role and its
        slot skeleton: None for an open filler, a ground term where a
        restriction fixed one."""
        exp = self.env.expansions.get(role)
        if exp is None:
            op = self.register_op(role)
            return op, [None] * len(self.env.fillers(role))
        base, pos, concept = exp
        op, slots = self.raw_slots(base)
        open_positions = [i for i, s in enumerate(slots) if s is None]
        idx = open_positions[pos - 1]
        slots[idx] = self.term(concept, self.env.sigs[base][pos])
        return op, slots

    def template(self, role: str, start: int) -> tuple[OpTemplate, int]:
        """Template over variables start.. ; returns it and the next index."""
        op, slots = self.raw_slots(role)
        out = []
        k = start
        for s in slots:
            if s is None:
                out.append(VarSlot(k))
                k += 1
            else:
                out.append(FixedSlot(s))
        return OpTemplate(op, tuple(out)), k

    def fresh_chain_role(self) -> str:
        name = f"{CHAIN_ROLE_PREFIX}{self.chain_counter}"
        self.chain_counter += 1
        self.env.sigs[name] = (CONCEPT, CONCEPT)
        return name

    def split_chain(self, ri: RoleInclusion) -> list[RoleInclusion]:
        """Rewrite a sequential chain of length > 2 into length-2 steps.

        The guard stays on the innermost step (the one producing the fresh
        role): the fresh role has no other source, so the guard still
        controls every derivation of the full composition.
        """
        if ri.parallel or len(ri.chain) <= 2:
            return [ri]
        out = []
        chain = list(ri.chain)
        guard = ri.guard
        while len(chain) > 2:
            aux = self.fresh_chain_role()
            out.append(RoleInclusion((chain[-2], chain[-1]), aux, guard))
            guard = None
            chain[-2:] = [aux]
        out.append(RoleInclusion(tuple(chain), ri.rhs, guard))
        return out

    def role_incl_axiom(self, ri: RoleInclusion) -> alg.AlgAxiom:
        guard = self.term(ri.guard, CONCEPT) if ri.guard is not None else None
        head, tails = ri.chain[0], ri.chain[1:]
        if not tails:
            g, n = self.template(head, 0)
            h, n2 = self.template(ri.rhs, 0)
            assert n == n2
            return K1(g, h, guard)
        f, _ = self.template(head, 0)
        gs = []
        start = 0
        for t in tails:
            g, start = self.template(t, start)
            gs.append(g)
        if ri.rhs is None:
            # identity: all tails are unary over the same variable
            shared = [OpTemplate(g.op, tuple(
                FixedSlot(s.term) if isinstance(s, FixedSlot) else VarSlot(0)
                for s in g.slots)) for g in gs]
            return K3(f, tuple(shared), guard)
        h, end = self.template(ri.rhs, 0)
        assert end == start
        return K2(f, tuple(gs), h, guard)


def translate(cbox: CBox, query: Optional[Query] = None,
              env: Optional[RoleEnv] = None) -> alg.AlgebraicProblem:
    """Build the algebraic problem for a CBox and (optionally) one query."""
    if env is None and query is not None and query not in cbox.queries:
        # the query's roles resolve exactly like the CBox's own
        env = check_cbox(replace(cbox, queries=cbox.queries + (query,)))
    tr = _Translator(cbox, env)

    axioms: list[alg.AlgAxiom] = []
    for ri in cbox.role_incls:
        for step in tr.split_chain(ri):
            axioms.append(tr.role_incl_axiom(step))

    assumptions = []
    for g in cbox.gcis:
        sort = _incl_sort(g.lhs, g.rhs, tr.env)
        assumptions.append(Leq(tr.term(g.lhs, sort), tr.term(g.rhs, sort)))
    target = None
    if query is not None:
        sort = _incl_sort(query.lhs, query.rhs, tr.env)
        target = Leq(tr.term(query.lhs, sort), tr.term(query.rhs, sort))

    for op in tr.ops:
        axioms.append(Mon(op, len(tr.ops[op])))

    return alg.AlgebraicProblem(
        axioms=tuple(axioms),
        goal=Goal(tuple(assumptions), target),
        ops=tr.ops,
        consts=tr.consts,
        op_role=tr.op_role,
    )


def _incl_sort(lhs: Concept, rhs: Concept, env: RoleEnv) -> str:
    from .syntax import concept_sort
    for side in (lhs, rhs):
        if not isinstance(side, (Top, Bot)):
            return concept_sort(side, env)
    return CONCEPT


# ---------------------------------------------------------------------------
# flatten / purify
# ---------------------------------------------------------------------------

@dataclass
class PurifiedProblem:
    """Ground Horn problem whose atoms relate constants and literals only."""

    facts: list[Leq]
    target: Optional[Leq]
    clauses: list[Instance]
    # proxy constant -> the (one-level) term it stands for
    defs: dict[str, FlatTerm]
    # meet proxies -> operand constant names
    meets: dict[str, tuple[str, ...]]
    # every constant in play -> sort
    consts: dict[str, str]
    ops: dict[str, tuple[str, ...]] = field(default_factory=dict)
    op_role: dict[str, str] = field(default_factory=dict)

    def unfold(self, name: str) -> FlatTerm:
        """Resolve a constant back to the operator/meet term it names."""
        t = self.defs.get(name)
        if t is None:
            return Const(name)
        if isinstance(t, Apply):
            return Apply(t.op, tuple(self._unfold_term(a) for a in t.args))
        if isinstance(t, Meet):
            return Meet(tuple(self._unfold_term(a) for a in t.args))
        return t

    def _unfold_term(self, t: FlatTerm) -> FlatTerm:
        return self.unfold(t.name) if isinstance(t, Const) else t


class _Purifier:
    def __init__(self, consts: dict[str, str]):
        self.defs_by_term: dict[FlatTerm, Const] = {}
        self.defs: dict[str, FlatTerm] = {}
        self.meets: dict[str, tuple[str, ...]] = {}
        self.consts = dict(consts)
        self.counter = 0

    def purify(self, t: FlatTerm) -> FlatTerm:
        if isinstance(t, (Const, Lit)):
            return t
        flat = (Apply(t.op, tuple(self.purify(a) for a in t.args))
                if isinstance(t, Apply)
                else Meet(tuple(self.purify(a) for a in t.args)))
        proxy = self.defs_by_term.get(flat)
        if proxy is None:
            proxy = Const(f"_t{self.counter}")
            self.counter += 1
            self.defs_by_term[flat] = proxy
            self.defs[proxy.name] = flat
            self.consts[proxy.name] = CONCEPT
            if isinstance(flat, Meet):
                ops = []
                for a in flat.args:
                    assert isinstance(a, Const), "numeric meets never reach purification"
                    ops.append(a.name)
                self.meets[proxy.name] = tuple(ops)
        return proxy

    def atom(self, a: Leq) -> Leq:
        return Leq(self.purify(a.lhs), self.purify(a.rhs))


def flatten_purify(instances: Iterable[Instance], goal: Goal,
                   problem: alg.AlgebraicProblem) -> PurifiedProblem:
    """Name every operator/meet term with a proxy constant.

    Proxies are handed out in first-encounter order walking the goal, then
    the instances; the definition map is a bijection between proxies and
    the one-level terms they abbreviate.
    """
    pur = _Purifier(problem.consts)
    pur.consts.setdefault(alg.BOT_CONST, CONCEPT)
    pur.consts.setdefault(alg.TOP_CONST, CONCEPT)

    facts = [pur.atom(a) for a in goal.assumptions]
    target = pur.atom(goal.target) if goal.target is not None else None
    clauses = [Instance(tuple(pur.atom(p) for p in inst.premises),
                        pur.atom(inst.conclusion), inst.tag)
               for inst in instances]
    return PurifiedProblem(
        facts=facts, target=target, clauses=clauses,
        defs=pur.defs, meets=pur.meets, consts=pur.consts,
        ops=problem.ops, op_role=problem.op_role,
    )


# ---------------------------------------------------------------------------
# semilattice instantiation
# ---------------------------------------------------------------------------

AtomKey = tuple[str, str]

INSTANTIATE = "instantiate"
CHASE = "chase"


@dataclass
class SLProblem:
    """Ground Horn problem over constant names, ready for the solver."""

    facts: list[tuple[AtomKey, str]]          # (atom, label)
    clauses: list[tuple[tuple[AtomKey, ...], AtomKey, str]]
    goal: Optional[AtomKey]
    universe: list[str]
    mode: str


def _atom_key(a: Leq) -> AtomKey:
    if not isinstance(a.lhs, Const) or not isinstance(a.rhs, Const):
        raise CheckError(f"numeric atom reached the lattice layer: {a}")
    return (a.lhs.name, a.rhs.name)


def sl_instantiate(purified: PurifiedProblem, mode: str = CHASE) -> SLProblem:
    """Unroll the lattice theory over the constants of a purified problem.

    Facts: the inputs, reflexivity, bottom/top bounds, and each meet below
    its operands.  Clauses: the purified axiom instances plus meet
    introduction (S4).  In `instantiate` mode, transitivity over all
    ordered triples and congruence between same-arity meet proxies are
    materialized too; in `chase` mode the solver's built-in transitive
    closure covers both.
    """
    if mode not in (INSTANTIATE, CHASE):
        raise ValueError(f"unknown mode {mode!r}")
    universe = [c for c, s in purified.consts.items() if s == CONCEPT]

    facts: dict[AtomKey, str] = {}

    def add_fact(atom: AtomKey, label: str) -> None:
        facts.setdefault(atom, label)

    for i, a in enumerate(purified.facts):
        add_fact(_atom_key(a), f"input:{i}")
    for x in universe:
        add_fact((x, x), "refl")
    for x in universe:
        add_fact((alg.BOT_CONST, x), "bound")
        add_fact((x, alg.TOP_CONST), "bound")
    for m, operands in purified.meets.items():
        for o in operands:
            add_fact((m, o), "meet-below")

    clauses: dict[tuple[frozenset[AtomKey], AtomKey], tuple[tuple[AtomKey, ...], str]] = {}

    def add_clause(premises: Iterable[AtomKey], concl: AtomKey, tag: str) -> None:
        prem: dict[AtomKey, None] = {}
        for p in premises:
            prem.setdefault(p, None)
        key = (frozenset(prem), concl)
        if key not in clauses:
            clauses[key] = (tuple(prem), tag)

    for inst in purified.clauses:
        add_clause([_atom_key(p) for p in inst.premises],
                   _atom_key(inst.conclusion), inst.tag)
    for m, operands in purified.meets.items():
        for z in universe:
            if z != m:
                add_clause([(z, o) for o in operands], (z, m), "meet-intro")
    if mode == INSTANTIATE:
        for x, y, z in itertools.permutations(universe, 3):
            add_clause([(x, y), (y, z)], (x, z), "trans")
        _meet_congruence(purified.meets, add_clause)

    goal = _atom_key(purified.target) if purified.target is not None else None
    return SLProblem(
        facts=[(a, lbl) for a, lbl in facts.items()],
        clauses=[(prem, key[1], tag) for key, (prem, tag) in clauses.items()],
        goal=goal,
        universe=universe,
        mode=mode,
    )


def _meet_congruence(meets: dict[str, tuple[str, ...]], add_clause) -> None:
    by_arity: dict[int, list[str]] = {}
    for m, operands in meets.items():
        by_arity.setdefault(len(operands), []).append(m)
    for arity, ms in by_arity.items():
        for m1, m2 in itertools.permutations(ms, 2):
            a1 = sorted(meets[m1])
            a2 = sorted(meets[m2])
            premises = []
            for x, y in zip(a1, a2):
                premises.append((x, y))
                premises.append((y, x))
            add_clause(premises, (m1, m2), "meet-cong")


def sl_clause_count(purified: PurifiedProblem, mode: str = INSTANTIATE) -> int:
    """The exact clause count of sl_instantiate without materializing the
    transitivity instances (which grow cubically in the universe)."""
    universe = [c for c, s in purified.consts.items() if s == CONCEPT]
    seen: set[tuple[frozenset[AtomKey], AtomKey]] = set()

    def add_clause(premises, concl, tag):
        prem = frozenset(premises)
        seen.add((prem, concl))

    for inst in purified.clauses:
        add_clause([_atom_key(p) for p in inst.premises],
                   _atom_key(inst.conclusion), inst.tag)
    for m, operands in purified.meets.items():
        for z in universe:
            if z != m:
                add_clause([(z, o) for o in operands], (z, m), "meet-intro")
    if mode == CHASE:
        return len(seen)
    _meet_congruence(purified.meets, add_clause)

    m = len(universe)
    s1_total = m * (m - 1) * (m - 2)
    collisions = 0
    for prem, concl in seen:
        if len(prem) != 2:
            continue
        a, c = concl
        if a == c:
            continue
        # the premise pair of the matching transitivity instance is
        # {(a,b),(b,c)} for some b distinct from both
        for (p1, p2) in (tuple(prem), tuple(reversed(tuple(prem)))):
            if p1[0] == a and p2[1] == c and p1[1] == p2[0]:
                b = p1[1]
                if b != a and b != c:
                    collisions += 1
                break
    return len(seen) + s1_total - collisions


# ---------------------------------------------------------------------------
# reduction text format
# ---------------------------------------------------------------------------

def render_reduction(sl: SLProblem) -> str:
    """Serialize as one fact/clause/goal per line (parse_reduction reads it)."""
    lines = []
    for (a, b), _ in sl.facts:
        lines.append(f"fact {a} <= {b}")
    for premises, (a, b), _ in sl.clauses:
        prem = ", ".join(f"{x} <= {y}" for x, y in premises)
        lines.append(f"clause {prem} -> {a} <= {b}")
    if sl.goal is not None:
        lines.append(f"goal {sl.goal[0]} <= {sl.goal[1]}")
    return "\n".join(lines) + "\n"


def parse_reduction(text: str) -> SLProblem:
    facts: list[tuple[AtomKey, str]] = []
    clauses: list[tuple[tuple[AtomKey, ...], AtomKey, str]] = []
    goal: Optional[AtomKey] = None
    names: dict[str, None] = {}

    def atom(s: str, lineno: int) -> AtomKey:
        parts = s.split("<=")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise CheckError(f"line {lineno}: bad atom {s.strip()!r}")
        a, b = parts[0].strip(), parts[1].strip()
        names.setdefault(a, None)
        names.setdefault(b, None)
        return (a, b)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("fact "):
            facts.append((atom(line[5:], lineno), f"line:{lineno}"))
        elif line.startswith("clause "):
            body = line[7:]
            if "->" not in body:
                raise CheckError(f"line {lineno}: a clause needs '->'")
            lhs, rhs = body.split("->", 1)
            premises = tuple(atom(p, lineno) for p in lhs.split(",") if p.strip())
            clauses.append((premises, atom(rhs, lineno), f"line:{lineno}"))
        elif line.startswith("goal "):
            if goal is not None:
                raise CheckError(f"line {lineno}: more than one goal")
            goal = atom(line[5:], lineno)
        else:
            raise CheckError(f"line {lineno}: expected fact/clause/goal")
    return SLProblem(facts=facts, clauses=clauses, goal=goal,
                     universe=list(names), mode=CHASE)
