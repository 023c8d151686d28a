"""Brute-force ground truth: subset enumeration, monotonicity checks,
counting wrappers, truth tables and seeded random instances.

Everything here is deliberately naive. It is meant to be obviously correct on
small universes, not fast.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .cnf import CnfFormula, SupersetPredicate
from .core import ProblemInstance, _eval

ORACLE_LIMIT = 20
EXHAUSTIVE_MONOTONE_LIMIT = 15
# Bump when the random generators change, so stored seeds stay meaningful.
GENERATOR_VERSION = 1


@dataclass(frozen=True)
class OracleReport:
    minimal_p_sets: Tuple[Tuple[int, ...], ...]
    exists: bool
    evaluations_used: int

    def contains(self, xs: Iterable[int]) -> bool:
        return tuple(sorted(xs)) in self.minimal_p_sets


def enumerate_minimal_p_sets(instance: ProblemInstance, p, limit: int = ORACLE_LIMIT) -> OracleReport:
    """All minimal p-sets of ``instance``, by scanning subsets smallest first.

    Subsets are visited by ascending size, then lexicographically by id. A
    p-set is minimal iff no previously collected set is contained in it;
    supersets of collected sets are skipped without evaluating ``p``.
    """
    ids = sorted(instance.analyzed)
    if len(ids) > limit:
        raise ValueError(f"refusing to enumerate 2^{len(ids)} subsets (limit {limit})")
    found: List[FrozenSet[int]] = []
    evals = 0
    for size in range(len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            xs = frozenset(combo)
            if any(f <= xs for f in found):
                continue
            evals += 1
            if _eval(p, xs | instance.background):
                found.append(xs)
    sets = tuple(tuple(sorted(f)) for f in found)
    return OracleReport(sets, bool(sets), evals)


@dataclass(frozen=True)
class MonotonicityReport:
    verdict: str  # "verified-exhaustive" | "verified-sampled" | "violated"
    witness: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    empty_set_ok: bool

    @property
    def ok(self) -> bool:
        return self.verdict != "violated" and self.empty_set_ok


def check_monotone(p, universe: Iterable[int], trials: Optional[int] = None,
                   seed: Optional[int] = None) -> MonotonicityReport:
    """Check ``p({}) == 0`` and ``p(X) <= p(X | {e})``.

    Adjacent pairs suffice: a violation ``p(X') > p(X'')`` for ``X' < X''``
    implies one along any chain of single-element additions from ``X'`` to
    ``X''``. Exhaustive mode (``trials=None``) scans sets by size, then
    lexicographically, so the first witness found is a smallest one.
    Sampled mode draws ``trials`` seeded random pairs.
    """
    ids = sorted(set(universe))
    empty_ok = not _eval(p, frozenset())
    if trials is None:
        if len(ids) > EXHAUSTIVE_MONOTONE_LIMIT:
            raise ValueError(f"exhaustive check limited to {EXHAUSTIVE_MONOTONE_LIMIT} elements")
        for size in range(len(ids)):
            for combo in itertools.combinations(ids, size):
                xs = frozenset(combo)
                if not _eval(p, xs):
                    continue
                for e in ids:
                    if e not in xs and not _eval(p, xs | {e}):
                        return MonotonicityReport(
                            "violated", (tuple(combo), tuple(sorted(xs | {e}))), empty_ok)
        return MonotonicityReport("verified-exhaustive", None, empty_ok)

    rng = random.Random(seed)
    if len(ids) == 0:
        return MonotonicityReport("verified-sampled", None, empty_ok)
    for _ in range(trials):
        xs = frozenset(e for e in ids if rng.random() < 0.5)
        rest = [e for e in ids if e not in xs]
        if not rest:
            continue
        e = rng.choice(rest)
        if _eval(p, xs) and not _eval(p, xs | {e}):
            return MonotonicityReport(
                "violated", (tuple(sorted(xs)), tuple(sorted(xs | {e}))), empty_ok)
    return MonotonicityReport("verified-sampled", None, empty_ok)


class CountingPredicate:
    """Wraps a predicate, counting calls and optionally caching results.

    ``calls`` counts every logical evaluation; ``distinct`` counts distinct
    sets seen. With ``memo=True`` the wrapped predicate runs once per
    distinct set. Not thread-safe.
    """

    def __init__(self, p, memo: bool = False):
        self.p = p
        self.memo = memo
        self.calls = 0
        self._seen: Dict[FrozenSet[int], bool] = {}
        self.inner_calls = 0

    @property
    def distinct(self) -> int:
        return len(self._seen)

    def __call__(self, xs: FrozenSet[int]) -> bool:
        xs = frozenset(xs)
        self.calls += 1
        if self.memo and xs in self._seen:
            return self._seen[xs]
        self.inner_calls += 1
        bit = bool(self.p(xs))
        self._seen[xs] = bit
        return bit


def counting_wrapper(p, memo: bool = False) -> CountingPredicate:
    return CountingPredicate(p, memo)


class ParityPredicate:
    """Deliberately non-monotone: ``p(X) = |X| mod 2``."""

    def __call__(self, xs):
        return len(xs) % 2 == 1


# -- CNF ground truth -------------------------------------------------------

def truth_table_sat(formula: CnfFormula, active: Iterable[int]) -> bool:
    """Satisfiability by evaluating every assignment at once with numpy."""
    active = sorted(set(active))
    n = formula.num_vars
    if n > 22:
        raise ValueError("truth table limited to 22 variables")
    rows = np.arange(1 << n, dtype=np.int64)
    # column v-1 holds the value of variable v in each assignment
    values = ((rows[:, None] >> np.arange(n)) & 1).astype(bool)
    ok = np.ones(len(rows), dtype=bool)
    for i in active:
        clause = formula.clauses[i - 1]
        sat = np.zeros(len(rows), dtype=bool)
        for lit in clause:
            col = values[:, abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        ok &= sat
        if not ok.any():
            return False
    return bool(ok.any())


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int,
               max_width: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, min(max_width, num_vars))
        vs = rng.sample(range(1, num_vars + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return CnfFormula(num_vars, clauses)


def dpll_corpus(seed: int = 0, count: int = 120, max_vars: int = 15) -> List[CnfFormula]:
    """Seeded formulas with up to ``max_vars`` variables, around the 3-SAT threshold."""
    rng = random.Random(f"dpll-corpus/{GENERATOR_VERSION}/{seed}")
    corpus = []
    for _ in range(count):
        n = rng.randint(1, max_vars)
        m = rng.randint(1, max(1, int(n * 4.3) + 2))
        corpus.append(random_cnf(rng, n, m))
    return corpus


# -- random MSMP instances ----------------------------------------------------

@dataclass(frozen=True)
class RandomCase:
    seed: int
    instance: ProblemInstance
    predicate: SupersetPredicate

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "generator_version": GENERATOR_VERSION,
            "analyzed": list(self.instance.analyzed),
            "background": sorted(self.instance.background),
            "targets": [sorted(t) for t in self.predicate.targets],
        }


def random_case(seed, max_analyzed: int = 10, min_analyzed: int = 1) -> RandomCase:
    """A random instance with a superset predicate of 1-3 targets.

    ``A`` is a shuffled set of ids; ``B`` holds up to three extra ids; a few
    ids belong to neither, so some targets can never be covered and the
    instance may have no p-set at all.
    """
    rng = random.Random(f"qx-case/{GENERATOR_VERSION}/{seed}")
    n = rng.randint(min_analyzed, max_analyzed)
    nb = rng.randint(0, 3)
    ghosts = rng.randint(0, 2)
    ids = list(range(1, n + nb + ghosts + 1))
    rng.shuffle(ids)
    analyzed = ids[:n]
    background = ids[n:n + nb]
    universe = analyzed + background
    pool = universe + ids[n + nb:]
    targets = []
    for _ in range(rng.randint(1, 3)):
        src = pool if rng.random() < 0.25 else universe
        size = rng.randint(1, min(4, len(src)))
        targets.append(rng.sample(src, size))
    return RandomCase(seed, ProblemInstance(analyzed, background), SupersetPredicate(targets))


def random_partition(rng: random.Random, items: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Split ``items`` into two non-empty parts, not necessarily contiguous."""
    while True:
        mask = [rng.random() < 0.5 for _ in items]
        a1 = tuple(e for e, m in zip(items, mask) if m)
        a2 = tuple(e for e, m in zip(items, mask) if not m)
        if a1 and a2:
            return a1, a2
