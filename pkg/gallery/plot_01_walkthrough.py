"""
Eight elements, two hidden answers
==================================

The predicate below holds for any set containing {3,4,7} or {4,5,8}.
QuickXPlain with the balanced split finds {3,4,7} in ten predicate calls.
"""

from msmp_kit import ProblemInstance, SupersetPredicate, qx
from msmp_kit.trace import TraceRecorder, render_flat
from msmp_kit.verification import counting_wrapper

p = counting_wrapper(SupersetPredicate([[3, 4, 7], [4, 5, 8]]))
instance = ProblemInstance(range(1, 9))

rec = TraceRecorder()
result = qx(instance, p, trace=rec)
print(result)
print("predicate calls:", p.calls)

# Each line is one background test. _e_ marks tested elements, #e# marks
# elements already fixed in the answer, (e) marks elements ruled out.
print(render_flat(rec.tree))
