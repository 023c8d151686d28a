"""
Conflicts and corrections in a five-clause formula
==================================================

Clauses: 1: -C, 2: A|-B, 3: C|-B, 4: -A, 5: B  (A=1, B=2, C=3).
The formula has two minimal unsatisfiable subsets. Every minimal correction
subset (clauses whose removal restores satisfiability) hits both of them.
"""

from msmp_kit import ProblemInstance, SPLITS
from msmp_kit.cnf import INTRO_FORMULA, McsPredicate, MusPredicate, mcs, mus
from msmp_kit.verification import enumerate_minimal_p_sets

print(INTRO_FORMULA.to_dimacs())

for name, split in SPLITS.items():
    print(f"{name:>6}: MUS {mus(INTRO_FORMULA, split=split).elements}"
          f"  MCS {mcs(INTRO_FORMULA, split=split).elements}")

everything = ProblemInstance(INTRO_FORMULA.clause_ids)
print("all MUSes:", enumerate_minimal_p_sets(everything, MusPredicate(INTRO_FORMULA)).minimal_p_sets)
print("all MCSes:", enumerate_minimal_p_sets(everything, McsPredicate(INTRO_FORMULA)).minimal_p_sets)

# Keep clause 5 fixed: it is background for MUS and hard for MCS.
print("MUS given clause 5:", mus(INTRO_FORMULA, background=[5]).elements)
print("MCS keeping clause 5:", mcs(INTRO_FORMULA, background=[5]).elements)
