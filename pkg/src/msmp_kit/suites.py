"""Seeded self-check suites, shared by ``msmp-kit verify`` and the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional

from .cnf import INTRO_FORMULA, MusPredicate, SupersetPredicate, dpll_sat, example_instance
from .core import SPLITS, NO_P_SET, ProblemInstance, is_minimal_p_set
from .trace import TraceTree, check_tree, run_traced
from .verification import (
    GENERATOR_VERSION,
    ParityPredicate,
    check_monotone,
    dpll_corpus,
    enumerate_minimal_p_sets,
    random_case,
    random_partition,
    truth_table_sat,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    trials: int
    message: str = ""
    counterexample: Optional[dict] = None
    trace: Optional[TraceTree] = field(default=None, repr=False)


def oracle_agreement(trials: int = 500, seed: int = 0, split: str = "half",
                     max_analyzed: int = 10) -> SuiteResult:
    """qx's answer is one of the oracle's minimal p-sets; 'no p-set' iff none exist."""
    name = "oracle-agreement"
    for i in range(trials):
        case = random_case(f"{seed}/{i}", max_analyzed=max_analyzed)
        tree = run_traced(case.instance, case.predicate, SPLITS[split])
        report = enumerate_minimal_p_sets(case.instance, case.predicate)
        out = tree.outcome
        if out is NO_P_SET:
            ok = not report.exists
        else:
            ok = report.contains(out.elements)
        if not ok:
            ce = case.describe()
            ce["qx"] = None if out is NO_P_SET else list(out.elements)
            ce["oracle"] = [list(s) for s in report.minimal_p_sets]
            return SuiteResult(name, False, i + 1, f"disagreement on case {i}", ce, tree)
    return SuiteResult(name, True, trials, f"{trials} random instances agree")


def tree_invariants(trials: int = 500, seed: int = 0) -> SuiteResult:
    """check_tree on the walkthrough, the intro MUS and random instances, every split."""
    name = "trace-invariants"
    checked = 0
    runs = []
    inst, p = example_instance()
    runs.append(("walkthrough", inst, p))
    mus_instance = ProblemInstance(INTRO_FORMULA.clause_ids)
    runs.append(("intro-mus", mus_instance, MusPredicate(INTRO_FORMULA)))
    for i in range(trials):
        case = random_case(f"{seed}/{i}")
        runs.append((case.describe(), case.instance, case.predicate))
    for label, instance, pred in runs:
        for split_name, split in SPLITS.items():
            tree = run_traced(instance, pred, split)
            report = check_tree(tree, pred)
            checked += 1
            if not report.ok:
                ce = {"case": label, "split": split_name,
                      "failures": [str(f) for f in report.failures]}
                return SuiteResult(name, False, checked, "trace check failed", ce, tree)
    return SuiteResult(name, True, checked, f"{checked} traces pass every node check")


def lemma_composition(trials: int = 200, seed: int = 0) -> SuiteResult:
    """Gluing oracle-minimal halves across a partition gives an oracle-minimal whole."""
    name = "lemma-composition"
    for i in range(trials):
        rng = random.Random(f"lemma/{GENERATOR_VERSION}/{seed}/{i}")
        n = rng.randint(2, 8)
        nb = rng.randint(0, 2)
        ids = list(range(1, n + nb + 1))
        rng.shuffle(ids)
        a, b = ids[:n], frozenset(ids[n:])
        universe = ids
        targets = [rng.sample(universe, rng.randint(1, min(4, len(universe))))
                   for _ in range(rng.randint(1, 3))]
        p = SupersetPredicate(targets)
        a1, a2 = random_partition(rng, a)
        left = enumerate_minimal_p_sets(ProblemInstance(a2, b | set(a1)), p)
        x2 = frozenset(rng.choice(left.minimal_p_sets))
        right = enumerate_minimal_p_sets(ProblemInstance(a1, b | x2), p)
        x1 = frozenset(rng.choice(right.minimal_p_sets))
        whole = ProblemInstance(a, b)
        full = enumerate_minimal_p_sets(whole, p)
        if not (full.contains(x1 | x2) and is_minimal_p_set(x1 | x2, whole, p)):
            ce = {"A": a, "B": sorted(b), "A1": list(a1), "A2": list(a2),
                  "targets": [sorted(t) for t in p.targets],
                  "X1": sorted(x1), "X2": sorted(x2),
                  "oracle": [list(s) for s in full.minimal_p_sets]}
            return SuiteResult(name, False, i + 1, f"composition failed on tuple {i}", ce)
    return SuiteResult(name, True, trials, f"{trials} compositions are minimal")


def dpll_equivalence(count: int = 120, seed: int = 0) -> SuiteResult:
    """DPLL agrees with a full truth table, on whole formulas and random clause subsets."""
    name = "dpll-equivalence"
    rng = random.Random(f"dpll-subsets/{GENERATOR_VERSION}/{seed}")
    corpus = dpll_corpus(seed, count)
    checks = 0
    for j, f in enumerate(corpus):
        subsets = [f.clause_ids] + [
            [i for i in f.clause_ids if rng.random() < 0.5] for _ in range(3)
        ]
        for active in subsets:
            checks += 1
            if dpll_sat(f, active) != truth_table_sat(f, active):
                ce = {"formula": f.to_dimacs(), "active": list(active), "index": j}
                return SuiteResult(name, False, checks, "DPLL disagrees with truth table", ce)
    return SuiteResult(name, True, checks, f"{count} formulas, {checks} checks agree")


def monotonicity(predicate: str = "superset", trials: int = 500, seed: int = 0) -> SuiteResult:
    """Exhaustive check on random superset predicates, sampled check on the intro MUS predicate.

    ``predicate="parity"`` swaps in a non-monotone predicate; the suite is
    expected to fail and report a witness.
    """
    name = "monotonicity"
    if predicate == "parity":
        report = check_monotone(ParityPredicate(), range(1, 5))
        if report.ok:
            return SuiteResult(name, True, 1, "parity predicate unexpectedly passed")
        return SuiteResult(name, False, 1, "parity predicate is not monotone",
                           {"witness": [list(w) for w in report.witness]})
    if predicate != "superset":
        raise ValueError(f"unknown predicate family {predicate!r}")
    for i in range(trials):
        case = random_case(f"{seed}/{i}")
        report = check_monotone(case.predicate, case.instance.universe)
        if not report.ok:
            ce = case.describe()
            ce["witness"] = report.witness and [list(w) for w in report.witness]
            return SuiteResult(name, False, i + 1, "superset predicate not monotone", ce)
    if trials:
        report = check_monotone(MusPredicate(INTRO_FORMULA), INTRO_FORMULA.clause_ids,
                                trials=1000, seed=42)
        if not report.ok:
            return SuiteResult(name, False, trials + 1, "MUS predicate not monotone",
                               {"witness": report.witness})
    return SuiteResult(name, True, trials + bool(trials), "all predicates monotone")


def run_all(seed: int = 0, trials: int = 500, predicate: str = "superset") -> List[SuiteResult]:
    return [
        monotonicity(predicate, trials, seed),
        oracle_agreement(trials, seed),
        tree_invariants(trials, seed),
        lemma_composition(min(trials, 200) if trials else 0, seed),
        dpll_equivalence(max(100, trials // 4) if trials else 0, seed),
    ]
