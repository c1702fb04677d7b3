"""Forward chaining for ground Horn clauses over inequality atoms.

Atoms are pairs (a, b) of constant names read as a <= b.  Clauses carry a
premise counter; when an atom first becomes true, the counter of every
clause it appears in is decremented once, so the total number of
decrements is bounded by the total number of premise occurrences.

With transitive=True the solver additionally closes the derived atom set
under  a<=b, b<=c  =>  a<=c  (used by the chase mode, where transitivity
is not materialized as clauses).  Each transitivity step is binary and is
recorded in the derivation like a clause firing, so proofs stay auditable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import LoctameError

AtomKey = tuple[str, str]

# reasons: ("fact", label) | ("clause", clause_index) | ("trans", left, right)
Reason = tuple


@dataclass
class _Clause:
    premises: tuple[int, ...]
    concl: int
    tag: str
    missing: int


@dataclass
class Stats:
    premise_occurrences: int = 0
    decrements: int = 0
    trans_steps: int = 0
    fired_clauses: int = 0


@dataclass
class Result:
    sat: bool
    goal: Optional[AtomKey]
    solver: "HornSolver"
    stats: Stats

    def model(self) -> set[AtomKey]:
        return {self.solver.atom_keys[a] for a in self.solver.reasons}

    def holds(self, atom: AtomKey) -> bool:
        return self.solver.has(atom)


@dataclass
class TraceStep:
    atom: AtomKey
    kind: str                       # "fact" | "clause" | "trans"
    label: str                      # fact label or clause tag
    premises: tuple[AtomKey, ...]


class HornSolver:
    def __init__(self, transitive: bool = False):
        self.transitive = transitive
        self.atom_ids: dict[AtomKey, int] = {}
        self.atom_keys: list[AtomKey] = []
        self.reasons: dict[int, Reason] = {}
        self.queue: deque[int] = deque()
        self.occ: dict[int, list[int]] = {}
        self.clauses: list[_Clause] = []
        self.stats = Stats()
        if transitive:
            self.succ: dict[str, set[str]] = {}
            self.pred: dict[str, set[str]] = {}

    # -- construction --------------------------------------------------------

    def atom(self, key: AtomKey) -> int:
        aid = self.atom_ids.get(key)
        if aid is None:
            aid = len(self.atom_keys)
            self.atom_ids[key] = aid
            self.atom_keys.append(key)
        return aid

    def add_fact(self, key: AtomKey, label: str = "fact") -> None:
        self._derive(self.atom(key), ("fact", label))

    def add_clause(self, premises: Iterable[AtomKey], concl: AtomKey,
                   tag: str = "clause") -> None:
        prem_ids: dict[int, None] = {}
        for p in premises:
            prem_ids.setdefault(self.atom(p), None)
        cid = len(self.clauses)
        concl_id = self.atom(concl)
        missing = 0
        for pid in prem_ids:
            # premises that are already derived are settled; registering
            # them in the occurrence lists would decrement the counter a
            # second time when they are popped
            if pid not in self.reasons:
                missing += 1
                self.occ.setdefault(pid, []).append(cid)
        clause = _Clause(tuple(prem_ids), concl_id, tag, missing)
        self.clauses.append(clause)
        self.stats.premise_occurrences += len(clause.premises)
        if missing == 0:
            self._fire(cid)

    # -- propagation ---------------------------------------------------------

    def _derive(self, aid: int, reason: Reason) -> None:
        if aid in self.reasons:
            return
        self.reasons[aid] = reason
        self.queue.append(aid)

    def _fire(self, cid: int) -> None:
        clause = self.clauses[cid]
        self.stats.fired_clauses += 1
        self._derive(clause.concl, ("clause", cid))

    def has(self, key: AtomKey) -> bool:
        aid = self.atom_ids.get(key)
        return aid is not None and aid in self.reasons

    def _result(self, sat: bool, goal: Optional[AtomKey]) -> Result:
        # the work bound the algorithm's linearity rests on: each premise
        # occurrence is decremented at most once
        assert self.stats.decrements <= self.stats.premise_occurrences
        return Result(sat, goal, self, self.stats)

    def solve(self, goal: Optional[AtomKey] = None) -> Result:
        """Propagate to fixpoint (or until the goal atom is derived).

        Can be called again after add_fact/add_clause; propagation resumes
        where it stopped.
        """
        goal_id = self.atom(goal) if goal is not None else None
        if goal_id is not None and goal_id in self.reasons:
            return self._result(False, goal)
        while self.queue:
            aid = self.queue.popleft()
            for cid in self.occ.get(aid, ()):
                clause = self.clauses[cid]
                clause.missing -= 1
                self.stats.decrements += 1
                if clause.missing == 0:
                    self._fire(cid)
            if self.transitive:
                self._trans_close(aid)
            if goal_id is not None and goal_id in self.reasons:
                return self._result(False, goal)
        return self._result(goal_id is None or goal_id not in self.reasons,
                            goal)

    def _trans_close(self, aid: int) -> None:
        a, b = self.atom_keys[aid]
        self.succ.setdefault(a, set()).add(b)
        self.pred.setdefault(b, set()).add(a)
        if a == b:
            return
        # extend to the left, then to the right
        for w in list(self.pred.get(a, ())):
            if w != a and b not in self.succ.get(w, ()):
                left = self.atom_ids[(w, a)]
                self.stats.trans_steps += 1
                self._derive(self.atom((w, b)), ("trans", left, aid))
        for c in list(self.succ.get(b, ())):
            if c != b and c not in self.succ.get(a, ()):
                right = self.atom_ids[(b, c)]
                self.stats.trans_steps += 1
                self._derive(self.atom((a, c)), ("trans", aid, right))

    # -- inspection ------------------------------------------------------------

    def trace(self, atom: AtomKey) -> list[TraceStep]:
        """The derivation of an atom, premises before conclusions."""
        root = self.atom_ids.get(atom)
        if root is None or root not in self.reasons:
            raise LoctameError(f"atom was not derived: {atom}")
        steps: list[TraceStep] = []
        emitted: set[int] = set()
        on_path: set[int] = set()
        stack: list[tuple[int, bool]] = [(root, False)]
        while stack:
            aid, expanded = stack.pop()
            if aid in emitted:
                continue
            reason = self.reasons[aid]
            if reason[0] == "fact":
                emitted.add(aid)
                steps.append(TraceStep(self.atom_keys[aid], "fact", reason[1], ()))
                continue
            if reason[0] == "clause":
                deps = self.clauses[reason[1]].premises
                kind, label = "clause", self.clauses[reason[1]].tag
            else:
                deps = reason[1:]
                kind, label = "trans", "trans"
            if not expanded:
                if aid in on_path:
                    raise LoctameError("cyclic derivation record")
                on_path.add(aid)
                stack.append((aid, True))
                for d in reversed(deps):
                    if d not in emitted:
                        stack.append((d, False))
                continue
            on_path.discard(aid)
            emitted.add(aid)
            steps.append(TraceStep(
                self.atom_keys[aid], kind, label,
                tuple(self.atom_keys[d] for d in deps)))
        return steps


def solve_problem(facts: Iterable[tuple[AtomKey, str]],
                  clauses: Iterable[tuple[tuple[AtomKey, ...], AtomKey, str]],
                  goal: Optional[AtomKey],
                  transitive: bool = False) -> Result:
    solver = HornSolver(transitive=transitive)
    for atom, label in facts:
        solver.add_fact(atom, label)
    for premises, concl, tag in clauses:
        solver.add_clause(premises, concl, tag)
    return solver.solve(goal)


def model_check(result: Result,
                facts: Iterable[tuple[AtomKey, str]],
                clauses: Iterable[tuple[tuple[AtomKey, ...], AtomKey, str]],
                goal: Optional[AtomKey]) -> None:
    """Audit a satisfiable verdict: the derived set contains the facts, is
    closed under the clauses (and transitivity, if enabled), and misses
    the goal.  Raises LoctameError on any violation."""
    model = result.model()
    for atom, label in facts:
        if atom not in model:
            raise LoctameError(f"model misses fact {atom} ({label})")
    for premises, concl, tag in clauses:
        if all(p in model for p in premises) and concl not in model:
            raise LoctameError(f"model not closed under {tag}: {premises} -> {concl}")
    if result.solver.transitive:
        by_lhs: dict[str, set[str]] = {}
        for a, b in model:
            by_lhs.setdefault(a, set()).add(b)
        for a, bs in by_lhs.items():
            for b in list(bs):
                for c in by_lhs.get(b, ()):
                    if c not in bs:
                        raise LoctameError(
                            f"model not transitively closed: {a}<={b}<={c}")
    if result.sat and goal is not None and goal in model:
        raise LoctameError(f"satisfiable verdict but the goal {goal} was derived")
