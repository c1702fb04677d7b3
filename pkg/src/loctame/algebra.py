"""Ground terms and Horn axiom shapes over semilattices with monotone
operators, the closure of a term set under the axiom heads, and the
instantiation of the axioms with closure terms.

Terms are constants, interval literals, meets, and operator applications.
The axiom shapes are:

    Mon(f):    x1<=y1 & ... & xn<=yn  ->  f(x)<=f(y)
    K1(g,h):   [guards]               ->  g(x)<=h(x)
    K2(f,g,h): z1<=g1(x1) & ... & zn<=gn(xn) [guards] -> f(z)<=h(x1..xn)
    K3(f,g):   z1<=g1(y) & ... & zn<=gn(y)   [guards] -> f(z)<=y

Operator argument positions in K1-K3 are slot templates: either a shared
variable or a fixed ground term (fixed slots arise when a role restriction
pins one argument to a concept).  Guards are ground terms; a guarded axiom
additionally requires x<=guard for every variable x of the conclusion's
right-hand side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .syntax import CONCEPT, NUM, Interval, LoctameError

BOT_CONST = "__bot"
TOP_CONST = "__top"


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Lit:
    """An interval literal used as a ground term of the numeric sort."""

    interval: Interval

    def __str__(self) -> str:
        lo, hi = self.interval.lo, self.interval.hi
        left = "(-inf" if lo is None else f"[{lo}"
        right = "+inf)" if hi is None else f"{hi}]"
        return f"{left},{right}"


@dataclass(frozen=True)
class Apply:
    op: str
    args: tuple["FlatTerm", ...]

    def __str__(self) -> str:
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Meet:
    args: tuple["FlatTerm", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("a meet needs at least two operands")

    def __str__(self) -> str:
        return "(" + " & ".join(str(a) for a in self.args) + ")"


FlatTerm = Union[Const, Lit, Apply, Meet]


@dataclass(frozen=True)
class Leq:
    lhs: FlatTerm
    rhs: FlatTerm

    def __str__(self) -> str:
        return f"{self.lhs} <= {self.rhs}"


def subterms(t: FlatTerm) -> Iterator[FlatTerm]:
    yield t
    if isinstance(t, (Apply, Meet)):
        for a in t.args:
            yield from subterms(a)


def apply_subterms(t: FlatTerm) -> Iterator[Apply]:
    for s in subterms(t):
        if isinstance(s, Apply):
            yield s


def constants_of(t: FlatTerm) -> Iterator[str]:
    for s in subterms(t):
        if isinstance(s, Const):
            yield s.name


# ---------------------------------------------------------------------------
# axiom shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarSlot:
    index: int

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class FixedSlot:
    term: FlatTerm

    def __str__(self) -> str:
        return str(self.term)


Slot = Union[VarSlot, FixedSlot]


@dataclass(frozen=True)
class OpTemplate:
    """An operator applied to a mix of variables and fixed ground terms.

    Variable indices appear at most once each and in increasing order.
    """

    op: str
    slots: tuple[Slot, ...]

    def __str__(self) -> str:
        return f"{self.op}({', '.join(str(s) for s in self.slots)})"

    @property
    def nvars(self) -> int:
        return sum(1 for s in self.slots if isinstance(s, VarSlot))

    def var_indices(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.slots if isinstance(s, VarSlot))

    def match(self, term: FlatTerm) -> Optional[dict[int, FlatTerm]]:
        """Bind the variable slots against a ground term, or None."""
        if not isinstance(term, Apply) or term.op != self.op:
            return None
        if len(term.args) != len(self.slots):
            return None
        binding: dict[int, FlatTerm] = {}
        for slot, arg in zip(self.slots, term.args):
            if isinstance(slot, FixedSlot):
                if slot.term != arg:
                    return None
            else:
                binding[slot.index] = arg
        return binding

    def build(self, binding: dict[int, FlatTerm]) -> Apply:
        args = tuple(
            slot.term if isinstance(slot, FixedSlot) else binding[slot.index]
            for slot in self.slots)
        return Apply(self.op, args)


def plain_template(op: str, arity: int, start: int = 0) -> OpTemplate:
    return OpTemplate(op, tuple(VarSlot(start + i) for i in range(arity)))


@dataclass(frozen=True)
class Mon:
    op: str
    arity: int

    def __str__(self) -> str:
        return f"Mon({self.op}/{self.arity})"


@dataclass(frozen=True)
class K1:
    g: OpTemplate
    h: OpTemplate
    guard: Optional[FlatTerm] = None

    def __post_init__(self):
        if self.g.var_indices() != self.h.var_indices():
            raise ValueError(f"template variables differ: {self.g} vs {self.h}")

    def __str__(self) -> str:
        s = f"{self.g} <= {self.h}"
        return s if self.guard is None else f"{s} [guard {self.guard}]"


@dataclass(frozen=True)
class K2:
    """z_i <= g_i(x_i) -> f(z) <= h(x_1...x_n).

    f's variable slots are the z_i in order, one per tail; the g_i use
    disjoint blocks of x-variables whose concatenation is h's variables.
    """

    f: OpTemplate
    gs: tuple[OpTemplate, ...]
    h: OpTemplate
    guard: Optional[FlatTerm] = None

    def __post_init__(self):
        if self.f.nvars != len(self.gs):
            raise ValueError("the outer operator needs one variable per tail")
        xs = tuple(i for g in self.gs for i in g.var_indices())
        if xs != self.h.var_indices():
            raise ValueError("tail variables must concatenate to the rhs variables")

    def __str__(self) -> str:
        prem = " & ".join(f"z{i} <= {g}" for i, g in enumerate(self.gs))
        f = _z_render(self.f)
        s = f"{prem} -> {f} <= {self.h}"
        return s if self.guard is None else f"{s} [guard {self.guard}]"


def _z_render(tpl: OpTemplate) -> str:
    parts = [f"z{s.index}" if isinstance(s, VarSlot) else str(s) for s in tpl.slots]
    return f"{tpl.op}({', '.join(parts)})"


@dataclass(frozen=True)
class K3:
    """z_i <= g_i(y) -> f(z) <= y, every g_i applied to the same variable."""

    f: OpTemplate
    gs: tuple[OpTemplate, ...]
    guard: Optional[FlatTerm] = None

    def __post_init__(self):
        if self.f.nvars != len(self.gs):
            raise ValueError("the outer operator needs one variable per tail")
        for g in self.gs:
            if g.nvars != 1:
                raise ValueError("identity compositions need unary tails")

    def __str__(self) -> str:
        prem = " & ".join(f"z{i} <= {g}" for i, g in enumerate(self.gs))
        s = f"{prem} -> {_z_render(self.f)} <= y"
        return s if self.guard is None else f"{s} [guard {self.guard}]"


AlgAxiom = Union[Mon, K1, K2, K3]


def axiom_ops(ax: AlgAxiom) -> set[str]:
    if isinstance(ax, Mon):
        return {ax.op}
    if isinstance(ax, K1):
        return {ax.g.op, ax.h.op}
    if isinstance(ax, K2):
        return {ax.f.op, ax.h.op} | {g.op for g in ax.gs}
    return {ax.f.op} | {g.op for g in ax.gs}


@dataclass(frozen=True)
class Goal:
    """Assumption atoms together with the single atom to refute.

    target None asks only for the least model of the assumptions (used for
    classification, where one goal-free run answers all name queries).
    """

    assumptions: tuple[Leq, ...]
    target: Optional[Leq]

    def all_atoms(self) -> tuple[Leq, ...]:
        if self.target is None:
            return self.assumptions
        return self.assumptions + (self.target,)


@dataclass
class AlgebraicProblem:
    axioms: tuple[AlgAxiom, ...]
    goal: Goal
    # operator name -> argument sorts (the result sort is always concept)
    ops: dict[str, tuple[str, ...]]
    # constant name -> sort
    consts: dict[str, str]
    # operator name -> the role it interprets (for rendering)
    op_role: dict[str, str]


def term_sort(t: FlatTerm, consts: dict[str, str]) -> str:
    if isinstance(t, Const):
        return consts[t.name]
    if isinstance(t, Lit):
        return NUM
    return CONCEPT


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------

def goal_seeds(goal: Goal) -> list[Apply]:
    """All operator applications inside the goal atoms, in first-seen order."""
    seen: dict[Apply, None] = {}
    for atom in goal.all_atoms():
        for side in (atom.lhs, atom.rhs):
            for t in apply_subterms(side):
                seen.setdefault(t, None)
    return list(seen)


def psi_closure(seeds: Iterable[Apply], axioms: Iterable[AlgAxiom]) -> list[Apply]:
    """Close the seed terms under the conclusion operators of K1 and K2.

    K1 adds h(x) whenever g(x) is present; K2 adds h(x1..xn) whenever all
    g_i(x_i) are present.  Mon and K3 conclusions introduce no new
    operator terms.  Returns the closure in deterministic insertion order.
    """
    psi: dict[Apply, None] = {}
    for s in seeds:
        psi.setdefault(s, None)

    k1s = [ax for ax in axioms if isinstance(ax, K1)]
    k2s = [ax for ax in axioms if isinstance(ax, K2)]

    changed = True
    while changed:
        changed = False
        terms = list(psi)
        for ax in k1s:
            for t in terms:
                binding = ax.g.match(t)
                if binding is None:
                    continue
                new = ax.h.build(binding)
                if new not in psi:
                    psi[new] = None
                    changed = True
        for ax in k2s:
            # candidate bindings per tail, then the product
            per_tail: list[list[dict[int, FlatTerm]]] = []
            for g in ax.gs:
                cands = [b for t in terms if (b := g.match(t)) is not None]
                per_tail.append(cands)
            if any(not c for c in per_tail):
                continue
            for combo in itertools.product(*per_tail):
                binding: dict[int, FlatTerm] = {}
                for b in combo:
                    binding.update(b)
                new = ax.h.build(binding)
                if new not in psi:
                    psi[new] = None
                    changed = True
    return list(psi)


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A ground Horn clause produced from one axiom and closure terms."""

    premises: tuple[Leq, ...]
    conclusion: Leq
    tag: str

    def __str__(self) -> str:
        if not self.premises:
            return f"-> {self.conclusion}"
        return " & ".join(str(p) for p in self.premises) + f" -> {self.conclusion}"


def _guard_atoms(guard: Optional[FlatTerm], args: Iterable[FlatTerm]) -> tuple[Leq, ...]:
    if guard is None:
        return ()
    return tuple(Leq(a, guard) for a in args)


def _binding_args(tpl: OpTemplate, binding: dict[int, FlatTerm]) -> list[FlatTerm]:
    return [binding[i] for i in tpl.var_indices()]


def instantiate(axioms: Iterable[AlgAxiom], psi: Iterable[Apply],
                mon_eq_variants: bool = True) -> list[Instance]:
    """All closure-local instances of the axioms, duplicates removed.

    Mon yields, for every ordered pair of distinct closure terms with the
    same operator, a plain instance and (with mon_eq_variants) a variant
    whose premises state equality of the arguments; for operators with k
    closure terms that is 2*k*(k-1) instances.
    """
    psi_list = list(psi)
    by_op: dict[str, list[Apply]] = {}
    for t in psi_list:
        by_op.setdefault(t.op, []).append(t)

    out: list[Instance] = []
    seen: set[tuple[frozenset[Leq], Leq]] = set()

    def emit(premises: Iterable[Leq], conclusion: Leq, tag: str) -> None:
        # drop duplicate premises, then duplicate clauses
        prem: dict[Leq, None] = {}
        for p in premises:
            prem.setdefault(p, None)
        key = (frozenset(prem), conclusion)
        if key in seen:
            return
        seen.add(key)
        out.append(Instance(tuple(prem), conclusion, tag))

    for ax in axioms:
        if isinstance(ax, Mon):
            terms = by_op.get(ax.op, [])
            for t, u in itertools.permutations(terms, 2):
                plain = [Leq(a, b) for a, b in zip(t.args, u.args)]
                emit(plain, Leq(t, u), f"Mon({ax.op})")
                if mon_eq_variants:
                    both = plain + [Leq(b, a) for a, b in zip(t.args, u.args)]
                    emit(both, Leq(t, u), f"Mon={ax.op}")
        elif isinstance(ax, K1):
            for t in psi_list:
                binding = ax.g.match(t)
                if binding is None:
                    continue
                guards = _guard_atoms(ax.guard, _binding_args(ax.h, binding))
                emit(guards, Leq(t, ax.h.build(binding)), "K1")
        elif isinstance(ax, K2):
            f_terms = [(t, b) for t in by_op.get(ax.f.op, [])
                       if (b := ax.f.match(t)) is not None]
            per_tail = []
            for g in ax.gs:
                per_tail.append([(t, b) for t in by_op.get(g.op, [])
                                 if (b := g.match(t)) is not None])
            if not f_terms or any(not c for c in per_tail):
                continue
            for (ft, fb), combo in itertools.product(f_terms, itertools.product(*per_tail)):
                zs = _binding_args(ax.f, fb)
                xbind: dict[int, FlatTerm] = {}
                premises = []
                for z, (gt, gb) in zip(zs, combo):
                    premises.append(Leq(z, gt))
                    xbind.update(gb)
                guards = _guard_atoms(ax.guard, _binding_args(ax.h, xbind))
                emit(premises + list(guards), Leq(ft, ax.h.build(xbind)), "K2")
        elif isinstance(ax, K3):
            f_terms = [(t, b) for t in by_op.get(ax.f.op, [])
                       if (b := ax.f.match(t)) is not None]
            if not f_terms:
                continue
            # candidate y: every term c such that each g_i(c) is in the closure
            psi_set = set(psi_list)
            cands: Optional[set[FlatTerm]] = None
            for g in ax.gs:
                here: set[FlatTerm] = set()
                for t in by_op.get(g.op, []):
                    b = g.match(t)
                    if b is not None:
                        here.add(next(iter(b.values())))
                cands = here if cands is None else cands & here
            if not cands:
                continue
            for (ft, fb), y in itertools.product(f_terms, sorted(cands, key=str)):
                zs = _binding_args(ax.f, fb)
                premises = []
                ok = True
                for z, g in zip(zs, ax.gs):
                    gterm = g.build({g.var_indices()[0]: y})
                    if gterm not in psi_set:
                        ok = False
                        break
                    premises.append(Leq(z, gterm))
                if not ok:
                    continue
                guards = _guard_atoms(ax.guard, [y])
                emit(premises + list(guards), Leq(ft, y), "K3")
        else:
            raise LoctameError(f"unknown axiom shape {ax!r}")
    return out
