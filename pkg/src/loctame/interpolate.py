"""Ground interpolants for refutable two-sided problems over semilattices
with monotone unary operators.

The input is a pair of conjunctions of ground atoms s <= t -- the A side
and the B side, the B side refuting one extra atom -- together with the
operator axioms.  When A and B are jointly inconsistent, the output is a
conjunction I of ground atoms such that A entails I, I together with B is
inconsistent, and I mentions only constants occurring on both sides (or
belonging to the axioms).

The construction is hierarchical.  Both sides are instantiated over the
closure of their terms, purified, and chained in the base semilattice,
with every clause instance assigned to the side whose local constants it
mentions.  An instance whose premise is entailed only jointly is split at
a separating term over shared constants: a monotonicity step on one side,
the same axiom applied to the separating term on the other, linked by a
fresh defined constant (the c_{f(t)} of the underlying method).  Once the
refutation decomposes into single-sided steps, the interpolant is the set
of atoms the A side hands across the boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import algebra as alg
from . import hornsat
from . import reduce as red
from .algebra import (AlgAxiom, Apply, Const, FlatTerm, Goal, K1, K2, K3,
                      Leq, Lit, Meet, Mon, apply_subterms, axiom_ops,
                      constants_of)
from .hornsat import AtomKey, HornSolver
from .syntax import (And, Bot, CBox, CheckError, Concept, CONCEPT, Exists,
                     GCI, InterpolationInput, LoctameError, Name, Query, Top)

_CAP = 64


class NotUnsat(LoctameError):
    """The two sides are jointly satisfiable; no interpolant exists."""


class _Stalled(Exception):
    """Internal: the current vocabulary policy cannot separate the proof."""


# ---------------------------------------------------------------------------
# problems and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterpolationProblem:
    """Axioms plus the two sides; `neg` is the single refuted atom and
    belongs to the B side."""

    axioms: tuple[AlgAxiom, ...]
    a_atoms: tuple[Leq, ...]
    b_atoms: tuple[Leq, ...]
    neg: Leq
    # operator name -> role it interprets, for rendering only
    op_role: dict[str, str] = field(default_factory=dict, hash=False, compare=False)


@dataclass
class InterpolationResult:
    interpolant: tuple[Leq, ...]       # empty tuple reads as "top"
    shared_consts: frozenset[str]
    shared_ops: frozenset[str]
    iterations: int
    # fresh defined constants introduced by separation, with their terms
    defined: dict[str, FlatTerm] = field(default_factory=dict)
    # whether every interpolant operator is shared under the axiom relation
    ops_shared: bool = True


# ---------------------------------------------------------------------------
# vocabulary
# ---------------------------------------------------------------------------

def _union_find_classes(axioms: Iterable[AlgAxiom], ops: Iterable[str]) -> dict[str, str]:
    parent: dict[str, str] = {op: op for op in ops}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ax in axioms:
        group = sorted(axiom_ops(ax))
        for a, b in zip(group, group[1:]):
            parent.setdefault(a, a)
            parent.setdefault(b, b)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return {op: find(op) for op in parent}


def _atom_ops(atoms: Iterable[Leq]) -> set[str]:
    out: set[str] = set()
    for a in atoms:
        for side in (a.lhs, a.rhs):
            out.update(t.op for t in apply_subterms(side))
    return out


def _atom_consts(atoms: Iterable[Leq]) -> set[str]:
    out: set[str] = set()
    for a in atoms:
        for side in (a.lhs, a.rhs):
            out.update(constants_of(side))
    return out


def _axiom_ground_terms(axioms: Iterable[AlgAxiom]) -> list[FlatTerm]:
    """Guards and fixed slots: the ground terms baked into the axioms."""
    out: list[FlatTerm] = []
    for ax in axioms:
        guard = getattr(ax, "guard", None)
        if guard is not None:
            out.append(guard)
        for tpl in _axiom_templates(ax):
            for slot in tpl.slots:
                if isinstance(slot, alg.FixedSlot):
                    out.append(slot.term)
    return out


def _axiom_templates(ax: AlgAxiom) -> list[alg.OpTemplate]:
    if isinstance(ax, Mon):
        return []
    if isinstance(ax, K1):
        return [ax.g, ax.h]
    if isinstance(ax, K2):
        return [ax.f, *ax.gs, ax.h]
    return [ax.f, *ax.gs]


@dataclass
class _Vocabulary:
    shared_consts: frozenset[str]
    a_local: frozenset[str]
    b_local: frozenset[str]
    shared_ops: frozenset[str]

    def const_color(self, name: str) -> str:
        if name in self.a_local:
            return "A"
        if name in self.b_local:
            return "B"
        return "S"


def _vocabulary(problem: InterpolationProblem) -> _Vocabulary:
    a_consts = _atom_consts(problem.a_atoms)
    b_atoms = problem.b_atoms + (problem.neg,)
    b_consts = _atom_consts(b_atoms)
    theory = {alg.TOP_CONST, alg.BOT_CONST}
    for t in _axiom_ground_terms(problem.axioms):
        theory.update(constants_of(t))
    shared = (a_consts & b_consts) | theory

    ops_a = _atom_ops(problem.a_atoms)
    ops_b = _atom_ops(b_atoms)
    all_ops = ops_a | ops_b
    for ax in problem.axioms:
        all_ops |= axiom_ops(ax)
    roots = _union_find_classes(problem.axioms, all_ops)
    by_class: dict[str, set[str]] = {}
    for op, root in roots.items():
        by_class.setdefault(root, set()).add(op)
    shared_ops = {op for op, root in roots.items()
                  if by_class[root] & ops_a and by_class[root] & ops_b}
    return _Vocabulary(
        shared_consts=frozenset(shared),
        a_local=frozenset(a_consts - shared),
        b_local=frozenset(b_consts - shared),
        shared_ops=frozenset(shared_ops),
    )


def _validate(problem: InterpolationProblem) -> None:
    for ax in problem.axioms:
        if isinstance(ax, Mon):
            if ax.arity != 1:
                raise CheckError(
                    f"interpolation supports unary operators only: {ax}")
            continue
        if isinstance(ax, (K2, K3)) and len(ax.gs) != 1:
            raise CheckError(
                f"interpolation supports single-tail compositions only: {ax}")
        for tpl in _axiom_templates(ax):
            if len(tpl.slots) != 1 or tpl.nvars != 1:
                raise CheckError(
                    f"interpolation supports unary operators only: {ax}")
    for a in problem.a_atoms + problem.b_atoms + (problem.neg,):
        for side in (a.lhs, a.rhs):
            for t in alg.subterms(side):
                if isinstance(t, Lit):
                    raise CheckError(
                        "interpolation over the numeric sort is not supported")


# ---------------------------------------------------------------------------
# separating terms
# ---------------------------------------------------------------------------

def separating_term(lhs: str, rhs: str,
                    a_model: set[AtomKey], b_model: set[AtomKey],
                    candidates: Sequence[str]) -> Optional[FlatTerm]:
    """A term over the candidate constants that splits a jointly entailed
    atom lhs <= rhs: one side entails lhs <= t, the other t <= rhs.

    Witnesses of one orientation are collected and their meet returned
    (the meet of witnesses is again a witness in a semilattice); None when
    neither orientation has a witness.
    """
    w1 = sorted(s for s in candidates if s not in (lhs, rhs)
                and (lhs, s) in a_model and (s, rhs) in b_model)
    w2 = sorted(s for s in candidates if s not in (lhs, rhs)
                and (lhs, s) in b_model and (s, rhs) in a_model)
    wit = w1 or w2
    if not wit:
        return None
    if len(wit) == 1:
        return Const(wit[0])
    return Meet(tuple(Const(w) for w in wit))


# ---------------------------------------------------------------------------
# the working state of one interpolation attempt
# ---------------------------------------------------------------------------

@dataclass
class _Inst:
    premises: tuple[AtomKey, ...]
    concl: AtomKey
    tag: str
    color: str                         # "A" | "B" | "S" | "X"


_INSTANCE_TAGS = ("Mon(", "K1", "K2", "K3")


class _Attempt:
    """One run of the layered procedure under a fixed vocabulary policy.

    op_strict asks for the ideal vocabulary (operators shared under the
    axiom relation); when that stalls the caller retries without the
    operator restriction, which the hard constant condition still bounds.
    """

    def __init__(self, problem: InterpolationProblem, vocab: _Vocabulary,
                 op_strict: bool):
        self.problem = problem
        self.vocab = vocab
        self.op_strict = op_strict

        goal = Goal(problem.a_atoms + problem.b_atoms, problem.neg)
        psi = alg.psi_closure(alg.goal_seeds(goal), problem.axioms)
        instances = alg.instantiate(problem.axioms, psi, mon_eq_variants=False)

        consts = {name: CONCEPT
                  for name in _atom_consts(goal.all_atoms())}
        for t in _axiom_ground_terms(problem.axioms):
            for name in constants_of(t):
                consts.setdefault(name, CONCEPT)
        base = alg.AlgebraicProblem(
            axioms=problem.axioms, goal=goal, ops={}, consts=consts,
            op_role=dict(problem.op_role))
        purified = red.flatten_purify(instances, goal, base)

        self.defs: dict[str, FlatTerm] = dict(purified.defs)
        self.by_term = {t: n for n, t in self.defs.items()}
        self.meets: dict[str, tuple[str, ...]] = dict(purified.meets)
        self.universe: list[str] = list(purified.consts)
        self.counter = 0
        self.defined: dict[str, FlatTerm] = {}

        n_a = len(problem.a_atoms)
        self.a_facts = [(self._key(a), "A") for a in purified.facts[:n_a]]
        self.b_facts = [(self._key(a), "B") for a in purified.facts[n_a:]]
        assert purified.target is not None
        self.goal = self._key(purified.target)

        self.theory_facts: list[tuple[AtomKey, str]] = []
        self.theory_clauses: list[tuple[tuple[AtomKey, ...], AtomKey, str]] = []
        self._clause_seen: set[tuple[frozenset[AtomKey], AtomKey]] = set()
        for x in self.universe:
            self._const_theory(x)
        for m in self.meets:
            self._meet_theory(m)

        self._color_memo: dict[str, str] = {}
        self._export_memo: dict[str, bool] = {}
        self.instances = [
            _Inst(tuple(self._key(p) for p in inst.premises),
                  self._key(inst.conclusion), inst.tag,
                  self._inst_color([self._key(p) for p in inst.premises]
                                   + [self._key(inst.conclusion)]))
            for inst in purified.clauses]
        self._inst_seen = {(frozenset(i.premises), i.concl) for i in self.instances}
        self._split_done: set[tuple] = set()

    # -- naming and terms ------------------------------------------------------

    @staticmethod
    def _key(a: Leq) -> AtomKey:
        assert isinstance(a.lhs, Const) and isinstance(a.rhs, Const)
        return (a.lhs.name, a.rhs.name)

    def unfold(self, name: str) -> FlatTerm:
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

    def _const_theory(self, name: str) -> None:
        self.theory_facts.append(((name, name), "refl"))
        self.theory_facts.append(((alg.BOT_CONST, name), "bound"))
        self.theory_facts.append(((name, alg.TOP_CONST), "bound"))
        for m, operands in self.meets.items():
            if name != m:
                self._add_theory_clause(
                    [(name, o) for o in operands], (name, m))

    def _meet_theory(self, m: str) -> None:
        for o in self.meets[m]:
            self.theory_facts.append(((m, o), "meet-below"))
        for z in self.universe:
            if z != m:
                self._add_theory_clause(
                    [(z, o) for o in self.meets[m]], (z, m))

    def _add_theory_clause(self, premises: list[AtomKey], concl: AtomKey) -> None:
        key = (frozenset(premises), concl)
        if key not in self._clause_seen:
            self._clause_seen.add(key)
            self.theory_clauses.append((tuple(premises), concl, "meet-intro"))

    def _new_const(self, name: str, term: FlatTerm) -> None:
        self.defs[name] = term
        self.by_term[term] = name
        self.universe.append(name)
        self._const_theory(name)
        if isinstance(term, Meet):
            self.meets[name] = tuple(a.name for a in term.args)
            self._meet_theory(name)

    def proxy_for(self, term: FlatTerm) -> str:
        have = self.by_term.get(term)
        if have is not None:
            return have
        name = f"_i{self.counter}"
        self.counter += 1
        self._new_const(name, term)
        self.defined[name] = self.unfold(name)
        return name

    # -- colors ----------------------------------------------------------------

    def color(self, name: str) -> str:
        memo = self._color_memo.get(name)
        if memo is not None:
            return memo
        term = self.defs.get(name)
        if term is None:
            out = self.vocab.const_color(name)
        else:
            colors = {self.color(c) for c in constants_of(term)}
            if "A" in colors and "B" in colors:
                raise LoctameError(f"term mixes both sides' constants: {term}")
            out = "A" if "A" in colors else "B" if "B" in colors else "S"
        self._color_memo[name] = out
        return out

    def exportable(self, name: str) -> bool:
        """May this constant appear in an interpolant atom?"""
        memo = self._export_memo.get(name)
        if memo is not None:
            return memo
        term = self.unfold(name)
        out = all(self.color(c) == "S" and self.defs.get(c) is None
                  for c in constants_of(term))
        if out and self.op_strict:
            out = all(t.op in self.vocab.shared_ops for t in apply_subterms(term))
        self._export_memo[name] = out
        return out

    def _inst_color(self, atoms: list[AtomKey]) -> str:
        colors = {self.color(n) for a in atoms for n in a}
        if "A" in colors and "B" in colors:
            return "X"
        if "A" in colors:
            return "A"
        if "B" in colors:
            return "B"
        return "S"

    def _add_instance(self, premises: tuple[AtomKey, ...], concl: AtomKey,
                      tag: str) -> None:
        key = (frozenset(premises), concl)
        if key in self._inst_seen:
            return
        self._inst_seen.add(key)
        self.instances.append(_Inst(
            premises, concl, tag,
            self._inst_color(list(premises) + [concl])))

    # -- solver runs -------------------------------------------------------------

    def _run(self, facts: Iterable[tuple[AtomKey, str]],
             clauses: Iterable[tuple[tuple[AtomKey, ...], AtomKey, str]],
             goal: Optional[AtomKey]) -> hornsat.Result:
        solver = HornSolver(transitive=True)
        for atom, label in facts:
            solver.add_fact(atom, label)
        for premises, concl, tag in clauses:
            solver.add_clause(premises, concl, tag)
        return solver.solve(goal)

    def _side_clauses(self, colors: tuple[str, ...]):
        picked = [(i.premises, i.concl, i.tag)
                  for i in self.instances if i.color in colors]
        return self.theory_clauses + picked

    def run(self) -> tuple[list[AtomKey], int]:
        """The layered loop; returns the purified interpolant atoms."""
        for iteration in range(1, _CAP + 1):
            joint = self._run(
                self.a_facts + self.b_facts + self.theory_facts,
                self._side_clauses(("A", "B", "S", "X")), self.goal)
            if joint.sat:
                if iteration == 1:
                    raise NotUnsat("the two sides are jointly satisfiable")
                raise LoctameError("separation lost the refutation")

            theory_model = self._run(self.theory_facts, self.theory_clauses,
                                     None).model()
            ma = self._run(self.a_facts + self.theory_facts,
                           self._side_clauses(("A", "S")), None)
            ma_model = ma.model()
            itp = sorted(
                (x, y) for x, y in ma_model
                if (x, y) not in theory_model
                and self.exportable(x) and self.exportable(y))

            mb = self._run(
                self.b_facts + self.theory_facts
                + [(a, "itp") for a in itp],
                self._side_clauses(("B", "S")), self.goal)
            if not mb.sat:
                atoms = [s.atom for s in mb.solver.trace(self.goal)
                         if s.kind == "fact" and s.label == "itp"]
                return list(dict.fromkeys(atoms)), iteration

            if not self._separate(joint, ma_model, mb.model()):
                raise _Stalled
        raise LoctameError("interpolation did not converge")

    # -- separation --------------------------------------------------------------

    def _separate(self, joint: hornsat.Result, ma_model: set[AtomKey],
                  mb_model: set[AtomKey]) -> bool:
        trace = joint.solver.trace(self.goal)
        joint_model = joint.model()
        progress = False
        for step in trace:
            if step.kind != "clause" or not step.label.startswith(_INSTANCE_TAGS):
                continue
            if step.label.startswith("K1"):
                continue
            for prem in step.premises:
                if prem in ma_model or prem in mb_model:
                    continue
                if self._split(step, prem, ma_model, mb_model, joint,
                               joint_model):
                    progress = True
        return progress

    def _split(self, step: hornsat.TraceStep, prem: AtomKey,
               ma_model: set[AtomKey], mb_model: set[AtomKey],
               joint: hornsat.Result, joint_model: set[AtomKey]) -> bool:
        """Replace one use of an instance whose premise crosses the sides
        by a monotonicity half and a same-axiom half through a fresh
        defined term."""
        fdef = self.defs.get(step.atom[0])
        if not isinstance(fdef, Apply) or len(fdef.args) != 1:
            return False
        arg = fdef.args[0]
        if not isinstance(arg, Const) or arg.name != prem[0]:
            return False          # a guard premise, not the operator premise
        if sum(1 for p in step.premises if p[0] == prem[0]) != 1:
            return False          # ambiguous binding; leave untouched

        candidates = [c for c in self.universe if self.exportable(c)]
        term = separating_term(prem[0], prem[1], ma_model, mb_model, candidates)
        if term is None:
            term = self._chain_candidate(joint, prem, joint_model)
        if term is None:
            return False
        t_name = term.name if isinstance(term, Const) else self.proxy_for(term)

        done_key = (step.atom, frozenset(step.premises), prem, t_name)
        if done_key in self._split_done:
            return False
        self._split_done.add(done_key)

        linked = self.proxy_for(Apply(fdef.op, (Const(t_name),)))
        rest = tuple(p for p in step.premises if p != prem)
        self._add_instance(((prem[0], t_name),), (step.atom[0], linked),
                           f"Mon({fdef.op})")
        self._add_instance(((t_name, prem[1]),) + rest,
                           (linked, step.atom[1]), step.label)
        return True

    def _chain_candidate(self, joint: hornsat.Result, prem: AtomKey,
                         joint_model: set[AtomKey]) -> Optional[FlatTerm]:
        """Fall back to the inequality chain of the joint derivation: any
        exportable constant strictly inside the chain splits the atom,
        and later rounds separate the halves further."""
        solver = joint.solver
        aid = solver.atom_ids.get(prem)
        if aid is None:
            return None

        def chain(aid: int) -> list[str]:
            reason = solver.reasons[aid]
            if reason[0] == "trans":
                left, right = reason[1], reason[2]
                return chain(left)[:-1] + chain(right)
            key = solver.atom_keys[aid]
            return [key[0], key[1]]

        for node in chain(aid)[1:-1]:
            if node in prem or not self.exportable(node):
                continue
            if (prem[0], node) in joint_model and (node, prem[1]) in joint_model:
                return Const(node)
        return None


# ---------------------------------------------------------------------------
# entailment (used by the verification gate and by tests)
# ---------------------------------------------------------------------------

def entails(axioms: Iterable[AlgAxiom], facts: Iterable[Leq], target: Leq) -> bool:
    """Does the conjunction of facts entail the target over the axioms?"""
    axioms = tuple(axioms)
    goal = Goal(tuple(facts), target)
    psi = alg.psi_closure(alg.goal_seeds(goal), axioms)
    instances = alg.instantiate(axioms, psi)
    consts = {name: CONCEPT for name in _atom_consts(goal.all_atoms())}
    for t in _axiom_ground_terms(axioms):
        for name in constants_of(t):
            consts.setdefault(name, CONCEPT)
    base = alg.AlgebraicProblem(axioms=axioms, goal=goal, ops={},
                                consts=consts, op_role={})
    purified = red.flatten_purify(instances, goal, base)
    sl = red.sl_instantiate(purified, red.CHASE)
    result = hornsat.solve_problem(sl.facts, sl.clauses, sl.goal,
                                   transitive=True)
    return not result.sat


# ---------------------------------------------------------------------------
# the operation
# ---------------------------------------------------------------------------

def interpolate(problem: InterpolationProblem,
                verify: bool = True) -> InterpolationResult:
    """Compute a ground interpolant; raises NotUnsat when the sides are
    jointly satisfiable.

    With verify (the default), both defining entailments are re-checked
    through the standard reduction before the result is returned.
    """
    _validate(problem)
    vocab = _vocabulary(problem)

    attempt = _Attempt(problem, vocab, op_strict=True)
    try:
        keys, iterations = attempt.run()
    except _Stalled:
        attempt = _Attempt(problem, vocab, op_strict=False)
        try:
            keys, iterations = attempt.run()
        except _Stalled:
            raise LoctameError(
                "no separating term over the shared constants") from None

    interpolant = tuple(Leq(attempt.unfold(x), attempt.unfold(y))
                        for x, y in keys)
    ops: set[str] = set()
    for atom in interpolant:
        for side in (atom.lhs, atom.rhs):
            for name in constants_of(side):
                if name not in vocab.shared_consts:
                    raise LoctameError(
                        f"interpolant leaks a one-sided constant: {name}")
            ops.update(t.op for t in apply_subterms(side))

    result = InterpolationResult(
        interpolant=interpolant,
        shared_consts=vocab.shared_consts,
        shared_ops=vocab.shared_ops,
        iterations=iterations,
        defined=dict(attempt.defined),
        ops_shared=ops <= vocab.shared_ops,
    )
    if verify:
        _verify(problem, result)
    return result


def _verify(problem: InterpolationProblem, result: InterpolationResult) -> None:
    for atom in result.interpolant:
        if not entails(problem.axioms, problem.a_atoms, atom):
            raise LoctameError(
                f"interpolant atom is not entailed by the A side: {atom}")
    if not entails(problem.axioms,
                   tuple(result.interpolant) + problem.b_atoms, problem.neg):
        raise LoctameError(
            "interpolant joined with the B side fails to refute the goal")


# ---------------------------------------------------------------------------
# concept-level wrapping
# ---------------------------------------------------------------------------

def from_input(inp: InterpolationInput) -> InterpolationProblem:
    """Translate a two-sided concept-level problem to the algebraic one.

    Role axioms -- shared or side-tagged -- become background axioms; the
    sides' inclusions become the ground atoms.
    """
    full = CBox(
        roles=dict(inp.cbox.roles),
        restrictions=inp.cbox.restrictions,
        gcis=inp.a_gcis + inp.b_gcis,
        role_incls=(inp.cbox.role_incls + inp.a_role_incls
                    + inp.b_role_incls),
        queries=(inp.neg,),
    )
    prob = red.translate(full, inp.neg)
    if any(sorts != (CONCEPT,) for sorts in prob.ops.values()):
        raise CheckError("interpolation supports plain binary roles only")
    n_a = len(inp.a_gcis)
    assert prob.goal.target is not None
    return InterpolationProblem(
        axioms=prob.axioms,
        a_atoms=prob.goal.assumptions[:n_a],
        b_atoms=prob.goal.assumptions[n_a:],
        neg=prob.goal.target,
        op_role=dict(prob.op_role),
    )


def _concept_of(t: FlatTerm, op_role: dict[str, str]) -> Concept:
    if isinstance(t, Const):
        if t.name == alg.TOP_CONST:
            return Top()
        if t.name == alg.BOT_CONST:
            return Bot()
        return Name(t.name)
    if isinstance(t, Apply):
        role = op_role.get(t.op)
        if role is None:
            role = t.op[2:] if t.op.startswith("f_") else t.op
        return Exists(role, tuple(_concept_of(a, op_role) for a in t.args))
    if isinstance(t, Meet):
        return And(tuple(_concept_of(a, op_role) for a in t.args))
    raise LoctameError(f"cannot render {t!r} as a concept")


def interpolant_gcis(result: InterpolationResult,
                     op_role: dict[str, str]) -> list[GCI]:
    """The interpolant as concept inclusions (empty list: top holds)."""
    return [GCI(_concept_of(a.lhs, op_role), _concept_of(a.rhs, op_role))
            for a in result.interpolant]


def interpolate_input(inp: InterpolationInput,
                      verify: bool = True) -> tuple[InterpolationResult, list[GCI]]:
    problem = from_input(inp)
    result = interpolate(problem, verify=verify)
    return result, interpolant_gcis(result, problem.op_role)
