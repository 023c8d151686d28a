"""
Re-checking a run node by node
==============================

A recorded call tree can be audited after the fact: every call must satisfy
the loop invariant, return at the right line and hand back a minimal answer
for its own sub-instance. Tampering with the tree is caught.
"""

import copy
import json

from msmp_kit.cnf import example_instance
from msmp_kit.trace import check_tree, dumps, run_traced

instance, p = example_instance()
tree = run_traced(instance, p)
print("nodes:", tree.node_count, "depth:", tree.max_depth)
print("clean tree ok:", check_tree(tree, p).ok)

broken = copy.deepcopy(tree)
broken.root.left, broken.root.right = broken.root.right, broken.root.left
for failure in check_tree(broken, p).failures[:4]:
    print("  ", failure)

doc = json.loads(dumps(tree))
print("schema:", doc["schema"], "root returned:", doc["root"]["returned"])
