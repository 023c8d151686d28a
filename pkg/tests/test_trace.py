import copy
import json
import math
import pathlib
import random

import pytest

from msmp_kit import ProblemInstance, SPLITS, SupersetPredicate, qx
from msmp_kit.cnf import EXAMPLE_TARGETS
from msmp_kit.trace import (
    SCHEMA,
    TraceNode,
    TraceRecorder,
    check_invar,
    check_tree,
    dumps,
    render_flat,
    run_traced,
    tree_from_json,
    tree_to_json,
)

GOLDEN = pathlib.Path(__file__).parent / "golden"
EX = SupersetPredicate(EXAMPLE_TARGETS)


@pytest.fixture
def walkthrough():
    return run_traced(ProblemInstance(range(1, 9)), EX)


def test_tree_shape(walkthrough):
    t = walkthrough
    assert t.root.site == "line7" and t.root.c == frozenset()
    assert t.root.line10 is None
    assert t.node_count == 11
    assert t.evaluation_count == 10
    assert t.max_depth == 4
    assert [n.site for n in t.root.walk()][:3] == ["line7", "line16", "line16"]


def test_check_invar_examples(walkthrough):
    assert check_invar(walkthrough.root, EX)
    left = walkthrough.root.left
    assert (left.c, left.a, left.b) == (frozenset({1, 2, 3, 4}), (5, 6, 7, 8),
                                        frozenset({1, 2, 3, 4}))
    assert check_invar(left, EX)
    bad = TraceNode("line7", frozenset(), (1,), frozenset({3, 4, 7}))
    assert not check_invar(bad, EX)


def test_walkthrough_passes_tree_check(walkthrough):
    report = check_tree(walkthrough, EX)
    assert report.ok, report.failures
    assert report.nodes_checked == 11


def test_swapped_children_fail(walkthrough):
    t = copy.deepcopy(walkthrough)
    t.root.left, t.root.right = t.root.right, t.root.left
    report = check_tree(t, EX)
    assert not report.ok
    assert any(f.check == "structure" and f.path == "root" for f in report.failures)


def test_non_minimal_return_fails(walkthrough):
    t = copy.deepcopy(walkthrough)
    # a leaf claiming {8} where the true answer is the empty set
    leaf = t.root.left.left.left
    assert leaf.return_line == 11
    leaf.returned = frozenset({8})
    report = check_tree(t, EX)
    checks = {(f.path, f.check) for f in report.failures}
    assert ("root.L.L.L", "minimality") in checks


def test_wrong_child_arguments_fail(walkthrough):
    t = copy.deepcopy(walkthrough)
    t.root.right.b = frozenset({7, 1})
    report = check_tree(t, EX)
    assert any(f.check == "arguments" for f in report.failures)


def test_missing_line10_evaluation_fails(walkthrough):
    t = copy.deepcopy(walkthrough)
    t.root.left.line10 = None
    assert any(f.check == "line-10" for f in check_tree(t, EX).failures)


def test_golden_sequence(walkthrough):
    evs = walkthrough.evaluations
    assert [sorted(s) for s, _ in evs] == [
        [1, 2, 3, 4], [1, 2, 3, 4, 5, 6], [1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 7],
        [7], [1, 2, 7], [1, 2, 3, 7], [1, 2, 4, 7], [3, 4, 7],
    ]
    assert [int(b) for _, b in evs] == [0, 0, 1, 1, 0, 0, 0, 0, 1]


def test_flat_rendering_matches_golden(walkthrough):
    text = render_flat(walkthrough)
    assert text == (GOLDEN / "walkthrough_flat.txt").read_text(encoding="utf-8")
    lines = text.splitlines()
    step3 = next(l for l in lines if l.startswith("(3)"))
    assert "_1__2__3__4__5__6__7_ 8 => 1" in step3
    assert "7 found, 8 irrelevant" in step3
    step5 = next(l for l in lines if l.startswith("(5)"))
    assert "#7#" in step5 and "_" not in step5 and "=> 0" in step5


def test_flat_rendering_trivial_run():
    t = run_traced(ProblemInstance([1, 2]), lambda xs: False)
    text = render_flat(t)
    assert "no recursion entered" in text
    assert text.endswith("result: no p-set\n")


def test_json_schema_and_roundtrip(walkthrough):
    doc = json.loads(dumps(walkthrough))
    assert doc["schema"] == SCHEMA
    assert doc["root_check"] == {"tested": list(range(1, 9)), "bit": 1}
    root = doc["root"]
    assert set(root) == {"site", "C", "A", "B", "line10", "split_k", "return_line",
                         "returned", "left", "right"}
    assert root["line10"] is None and root["split_k"] == 4 and root["return_line"] == 18
    assert root["returned"] == [3, 4, 7]
    back = tree_from_json(doc)
    assert dumps(back) == dumps(walkthrough)
    assert render_flat(back) == render_flat(walkthrough)
    assert check_tree(back, EX).ok


def test_json_rejects_other_schema():
    with pytest.raises(ValueError):
        tree_from_json({"schema": "something-else"})


def test_trivial_runs_have_no_nodes():
    t = run_traced(ProblemInstance([], [9]), SupersetPredicate([[9]]))
    assert t.root is None and t.qx_return_line == 5
    assert tree_to_json(t)["root"] is None
    assert check_tree(t, SupersetPredicate([[9]])).ok


@pytest.mark.parametrize("split", sorted(SPLITS))
def test_depth_bounds(split):
    # bounds confirmed by enumeration for |A| <= 12 before being fixed here
    rng = random.Random(split)
    for n in range(1, 13):
        for _ in range(60):
            targets = [rng.sample(range(1, n + 1), rng.randint(1, min(4, n)))
                       for _ in range(rng.randint(1, 3))]
            t = run_traced(ProblemInstance(range(1, n + 1)), SupersetPredicate(targets),
                           SPLITS[split])
            assert t.max_depth <= n
            assert t.node_count <= 2 * n - 1
            if split == "half":
                assert t.max_depth <= math.ceil(math.log2(n)) + 1
            assert check_tree(t, SupersetPredicate(targets)).ok


def test_recorder_usable_directly():
    rec = TraceRecorder()
    out = qx(ProblemInstance(range(1, 9)), EX, trace=rec)
    assert rec.tree.outcome == out
    assert rec.tree.analyzed == tuple(range(1, 9))
