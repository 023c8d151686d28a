"""CNF formulas and the monotone predicates built on them.

Clauses are addressed by their 1-based position in the formula; those
indices are the element ids handed to :func:`msmp_kit.core.qx`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .core import (
    EvaluationError,
    InstanceError,
    ProblemInstance,
    QxError,
    SplitStrategy,
    qx,
    split_half,
)

Clause = Tuple[int, ...]


class DimacsError(QxError, ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ResourceLimitExceeded(EvaluationError):
    """Raised when a satisfiability check exceeds its decision budget."""


class PredicateContractError(QxError, ValueError):
    """The predicate would not be monotone with ``p({}) == 0``."""


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Clause, ...]

    def __init__(self, num_vars: int, clauses: Iterable[Iterable[int]], *,
                 allow_tautologies: bool = False):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        cls = []
        for idx, clause in enumerate(clauses, start=1):
            clause = tuple(int(lit) for lit in clause)
            if not clause:
                raise ValueError(f"clause {idx} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"clause {idx}: literal {lit} out of range")
            if not allow_tautologies and any(-lit in clause for lit in clause):
                raise ValueError(f"clause {idx} is a tautology")
            cls.append(clause)
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", tuple(cls))

    @property
    def clause_ids(self) -> Tuple[int, ...]:
        return tuple(range(1, len(self.clauses) + 1))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


# The clause set {~C, A | ~B, C | ~B, ~A, B} with A=1, B=2, C=3.
INTRO_FORMULA = CnfFormula(3, [[-3], [1, -2], [3, -2], [-1], [2]])


def parse_dimacs(text: str, allow_tautologies: bool = False) -> CnfFormula:
    """Parse DIMACS CNF text.

    Clauses may span lines; each is terminated by a ``0``. With
    ``allow_tautologies`` a clause containing ``v`` and ``-v`` is accepted
    (with a warning) instead of rejected.
    """
    header = None
    clauses = []
    current = []
    current_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if nv < 1 or nc < 0:
                raise DimacsError(f"malformed header {line!r}", lineno)
            header = (nv, nc)
            continue
        if header is None:
            raise DimacsError("clause before header", lineno)
        if line.startswith("%"):
            # some benchmark suites end files with "%\n0"
            break
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if current_line is None:
                current_line = lineno
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause", lineno)
                if any(-x in current for x in current):
                    if not allow_tautologies:
                        raise DimacsError(f"tautological clause {current}", current_line)
                    warnings.warn(f"line {current_line}: tautological clause {current}")
                clauses.append(current)
                current, current_line = [], None
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} out of range", lineno)
            current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause not terminated by 0", current_line)
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], clauses, allow_tautologies=allow_tautologies)


def _check_ids(formula: CnfFormula, ids: Iterable[int]) -> FrozenSet[int]:
    ids = frozenset(ids)
    bad = [i for i in ids if not 1 <= i <= len(formula.clauses)]
    if bad:
        raise InstanceError(f"clause indices out of range: {sorted(bad)}")
    return ids


def dpll_sat(formula: CnfFormula, active: Iterable[int],
             decision_limit: Optional[int] = None) -> bool:
    """Decide satisfiability of the clauses selected by ``active``.

    Plain DPLL: unit propagation to a fixpoint, then branch on the
    lowest-numbered unassigned variable still occurring in an open clause,
    true first. No learning, no randomness.
    """
    active = _check_ids(formula, active)
    clauses = [formula.clauses[i - 1] for i in sorted(active)]
    decisions = 0

    def solve(clauses):
        nonlocal decisions
        assignment = {}
        while True:
            unit = None
            remaining = []
            for clause in clauses:
                open_lits = []
                sat = False
                for lit in clause:
                    val = assignment.get(abs(lit))
                    if val is None:
                        open_lits.append(lit)
                    elif val == (lit > 0):
                        sat = True
                        break
                if sat:
                    continue
                if not open_lits:
                    return False
                if len(open_lits) == 1 and unit is None:
                    unit = open_lits[0]
                remaining.append(tuple(open_lits))
            if unit is None:
                break
            assignment[abs(unit)] = unit > 0
            clauses = remaining
        if not remaining:
            return True
        var = min(abs(lit) for clause in remaining for lit in clause)
        for value in (var, -var):
            decisions += 1
            if decision_limit is not None and decisions > decision_limit:
                raise ResourceLimitExceeded(
                    f"decision limit {decision_limit} exceeded"
                )
            if solve(remaining + [(value,)]):
                return True
        return False

    return solve(clauses)


class MusPredicate:
    """``p(X) = 1`` iff the clauses indexed by ``X`` are unsatisfiable."""

    def __init__(self, formula: CnfFormula, decision_limit: Optional[int] = None):
        self.formula = formula
        self.decision_limit = decision_limit

    def __call__(self, xs: FrozenSet[int]) -> bool:
        return not dpll_sat(self.formula, xs, self.decision_limit)


class McsPredicate:
    """``q(X) = 1`` iff removing the clauses ``X`` leaves a satisfiable formula.

    ``hard`` clauses stay in every check and may not appear in ``X``.
    Construction fails unless the full clause set is unsatisfiable, since
    otherwise ``q({}) == 1``.
    """

    def __init__(self, formula: CnfFormula, hard: Iterable[int] = (),
                 decision_limit: Optional[int] = None):
        self.formula = formula
        self.hard = _check_ids(formula, hard)
        self.scope = frozenset(formula.clause_ids)
        self.decision_limit = decision_limit
        if dpll_sat(formula, self.scope, decision_limit):
            raise PredicateContractError(
                "formula is satisfiable; the correction predicate would hold on the empty set"
            )

    def __call__(self, xs: FrozenSet[int]) -> bool:
        if xs & self.hard:
            raise InstanceError(f"hard clauses cannot be removed: {sorted(xs & self.hard)}")
        return dpll_sat(self.formula, self.scope - xs, self.decision_limit)


class SupersetPredicate:
    """``p(X) = 1`` iff ``X`` contains at least one of the target sets."""

    def __init__(self, targets: Iterable[Iterable[int]]):
        self.targets = tuple(frozenset(t) for t in targets)
        if not self.targets or not all(self.targets):
            raise PredicateContractError("targets must be a non-empty list of non-empty sets")

    def __call__(self, xs: FrozenSet[int]) -> bool:
        return any(t <= xs for t in self.targets)

    def __repr__(self):
        return f"SupersetPredicate({[sorted(t) for t in self.targets]})"


# Targets {3,4,7} and {4,5,8} over A = 1..8 give the classic walkthrough.
EXAMPLE_TARGETS = ((3, 4, 7), (4, 5, 8))


def example_instance() -> Tuple[ProblemInstance, SupersetPredicate]:
    return ProblemInstance(range(1, 9)), SupersetPredicate(EXAMPLE_TARGETS)


def _soft_instance(formula: CnfFormula, background: Iterable[int]):
    background = _check_ids(formula, background)
    analyzed = [i for i in formula.clause_ids if i not in background]
    return analyzed, background


def mus(formula: CnfFormula, background: Iterable[int] = (),
        split: SplitStrategy = split_half, trace=None,
        decision_limit: Optional[int] = None):
    """Minimal set of non-background clauses that is unsatisfiable together with the background."""
    analyzed, background = _soft_instance(formula, background)
    instance = ProblemInstance(analyzed, background)
    return qx(instance, MusPredicate(formula, decision_limit), split, trace)


def mcs(formula: CnfFormula, background: Sequence[int] = (),
        split: SplitStrategy = split_half, trace=None,
        decision_limit: Optional[int] = None):
    """Minimal set of non-background clauses whose removal restores satisfiability.

    Background clauses are hard: they are never removed. In the underlying
    instance they are therefore part of every predicate check but not of the
    instance's background, which stays empty.
    """
    analyzed, hard = _soft_instance(formula, background)
    q = McsPredicate(formula, hard, decision_limit)
    return qx(ProblemInstance(analyzed), q, split, trace)
