"""
Random instances against brute force
====================================

Compare QuickXPlain with exhaustive enumeration on seeded random instances,
and look at how the split strategy changes the number of predicate calls.
"""

import numpy as np

from msmp_kit import NO_P_SET, SPLITS, qx
from msmp_kit.verification import counting_wrapper, enumerate_minimal_p_sets, random_case

calls = {name: [] for name in SPLITS}
disagreements = 0
for i in range(300):
    case = random_case(f"gallery/{i}")
    oracle = enumerate_minimal_p_sets(case.instance, case.predicate)
    for name, split in SPLITS.items():
        p = counting_wrapper(case.predicate)
        out = qx(case.instance, p, split)
        ok = (not oracle.exists) if out is NO_P_SET else oracle.contains(out.elements)
        disagreements += not ok
        calls[name].append(p.calls)

print("disagreements:", disagreements)
for name, c in calls.items():
    c = np.array(c)
    print(f"{name:>6}: mean calls {c.mean():5.2f}  max {c.max()}")
