"""Call-tree recording for :func:`msmp_kit.core.qx`.

A :class:`TraceRecorder` passed as ``trace=`` collects one :class:`TraceNode`
per recursive call, so the finished :class:`TraceTree` mirrors the binary
call-recursion tree: the left child is the call made at line 16, the right
child the call made at line 17.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

from .core import (
    InstanceError,
    MinimalPSet,
    NO_P_SET,
    ProblemInstance,
    SplitStrategy,
    _eval,
    get,
    is_minimal_p_set,
    qx,
    split_half,
)

SCHEMA = "qx-trace/1"
TOOL = "msmp-kit"


@dataclass
class TraceNode:
    site: str
    c: FrozenSet[int]
    a: Tuple[int, ...]
    b: FrozenSet[int]
    depth: int = 1
    line10: Optional[Tuple[FrozenSet[int], bool]] = None
    split_k: Optional[int] = None
    return_line: Optional[int] = None
    returned: Optional[FrozenSet[int]] = None
    left: Optional["TraceNode"] = None
    right: Optional["TraceNode"] = None
    seq: Optional[int] = None  # index of the line-10 evaluation, if any

    def walk(self):
        yield self
        for child in (self.left, self.right):
            if child is not None:
                yield from child.walk()


@dataclass
class TraceTree:
    root_check: Tuple[FrozenSet[int], bool]
    root: Optional[TraceNode]
    outcome: object
    qx_return_line: int
    analyzed: Tuple[int, ...] = ()
    background: FrozenSet[int] = frozenset()
    events: List[tuple] = field(default_factory=list, repr=False)

    @property
    def nodes(self) -> List[TraceNode]:
        return list(self.root.walk()) if self.root else []

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def evaluations(self) -> List[Tuple[FrozenSet[int], bool]]:
        """Line-10 evaluations in chronological order."""
        evs = [n for n in self.nodes if n.line10 is not None]
        return [n.line10 for n in sorted(evs, key=lambda n: n.seq)]

    @property
    def evaluation_count(self) -> int:
        """All logical predicate evaluations, the line-2 check included."""
        return 1 + len(self.evaluations)

    @property
    def max_depth(self) -> int:
        return max((n.depth for n in self.nodes), default=0)


class TraceRecorder:
    """Sink that builds a :class:`TraceTree` while ``qx`` runs."""

    def __init__(self):
        self._stack: List[TraceNode] = []
        self._root: Optional[TraceNode] = None
        self._root_check = None
        self._seq = 0
        self._events: List[tuple] = []
        self._analyzed = ()
        self._background = frozenset()
        self.tree: Optional[TraceTree] = None

    def begin(self, analyzed, background):
        self._analyzed = tuple(analyzed)
        self._background = frozenset(background)

    def root_check(self, tested, bit):
        self._root_check = (frozenset(tested), bool(bit))

    def enter(self, site, c, a, b):
        node = TraceNode(site, frozenset(c), tuple(a), frozenset(b),
                         depth=len(self._stack) + 1)
        if self._stack:
            parent = self._stack[-1]
            if site == "line16":
                parent.left = node
            else:
                parent.right = node
        else:
            self._root = node
        self._stack.append(node)

    def line10(self, tested, bit):
        node = self._stack[-1]
        node.line10 = (frozenset(tested), bool(bit))
        node.seq = self._seq
        self._seq += 1
        self._events.append(("eval", node))

    def split(self, k):
        self._stack[-1].split_k = k

    def leave(self, line, returned):
        node = self._stack.pop()
        node.return_line = line
        node.returned = frozenset(returned)
        if line in (11, 12):
            self._events.append(("leaf", node))

    def finish(self, outcome, line):
        self.tree = TraceTree(self._root_check, self._root, outcome, line,
                              self._analyzed, self._background, self._events)


def run_traced(instance: ProblemInstance, p, split: SplitStrategy = split_half) -> TraceTree:
    rec = TraceRecorder()
    qx(instance, p, split, rec)
    return rec.tree


# -- invariant checks -------------------------------------------------------

def check_invar(node: TraceNode, p) -> bool:
    """``(C != {} or p(B) == 0) and p(A | B) == 1`` with fresh evaluations."""
    if not _eval(p, node.b | frozenset(node.a)):
        return False
    return bool(node.c) or not _eval(p, node.b)


@dataclass
class Failure:
    path: str
    check: str
    message: str

    def __str__(self):
        return f"{self.path}: [{self.check}] {self.message}"


@dataclass
class TreeReport:
    failures: List[Failure]
    nodes_checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def check_tree(tree: TraceTree, p) -> TreeReport:
    """Re-verify a finished trace against the algorithm's correctness argument.

    Checks, per node: the loop invariant, the conditions under which lines
    11 and 12 return, how the children's arguments were formed, that
    line 18 returns the union of its children, and that the returned set is
    a minimal p-set of the node's own instance.
    """
    failures: List[Failure] = []
    fail = lambda path, check, msg: failures.append(Failure(path, check, msg))

    tested, bit = tree.root_check
    if tree.outcome is NO_P_SET:
        if bit or tree.root is not None:
            fail("qx", "no-p-set", "'no p-set' returned although p(A | B) = 1")
    elif isinstance(tree.outcome, MinimalPSet):
        if not bit:
            fail("qx", "no-p-set", "p-set returned although p(A | B) = 0")
        if tree.root is not None and tree.outcome.as_set() != tree.root.returned:
            fail("qx", "structure", "outcome differs from the root call's result")
    count = 0
    if tree.root is not None:
        root = tree.root
        if root.site != "line7":
            fail("root", "structure", f"root call site is {root.site}, expected line7")
        if root.c != root.b:
            fail("root", "structure", "root call must pass the background as C")
        stack = [("root", root)]
        while stack:
            path, node = stack.pop()
            count += 1
            _check_node(path, node, p, fail)
            if node.right is not None:
                stack.append((path + ".R", node.right))
            if node.left is not None:
                stack.append((path + ".L", node.left))
    return TreeReport(failures, count)


def _check_node(path, node: TraceNode, p, fail):
    a_set = frozenset(node.a)
    if not check_invar(node, p):
        fail(path, "invariant", f"invariant fails for C={sorted(node.c)} "
             f"A={list(node.a)} B={sorted(node.b)}")
    if not node.a:
        fail(path, "structure", "empty analyzed set")
    if node.c:
        if node.line10 is None:
            fail(path, "line-10", "C is non-empty but p(B) was not evaluated")
        elif node.line10[0] != node.b:
            fail(path, "line-10", "line-10 evaluation did not test B")
        elif node.line10[1] != _eval(p, node.b):
            fail(path, "line-10", "recorded p(B) disagrees with the predicate")
    elif node.line10 is not None:
        fail(path, "line-10", "p(B) evaluated although C is empty")

    fired = node.line10 is not None and node.line10[1]
    if (node.return_line == 11) != fired:
        fail(path, "line-11", f"returned at line {node.return_line}, "
             f"but line-10 test {'fired' if fired else 'did not fire'}")
    if node.return_line == 11 and node.returned:
        fail(path, "line-11", "line 11 must return the empty set")
    if not fired and (node.return_line == 12) != (len(node.a) == 1):
        fail(path, "line-12", f"returned at line {node.return_line} with |A|={len(node.a)}")
    if node.return_line == 12 and node.returned != a_set:
        fail(path, "line-12", "line 12 must return A")

    if node.return_line == 18:
        if node.left is None or node.right is None:
            fail(path, "structure", "line-18 return without two children")
        else:
            _check_children(path, node, fail)
    elif node.left is not None or node.right is not None:
        fail(path, "structure", f"leaf returning at line {node.return_line} has children")
    elif node.return_line not in (11, 12):
        fail(path, "structure", f"unknown return line {node.return_line}")

    try:
        instance = ProblemInstance(node.a, node.b)
    except InstanceError as exc:
        fail(path, "structure", f"call arguments are not a valid instance: {exc}")
        return
    if node.returned is None or not is_minimal_p_set(node.returned, instance, p):
        got = None if node.returned is None else sorted(node.returned)
        fail(path, "minimality", f"returned {got} is not a minimal p-set of this call")


def _check_children(path, node: TraceNode, fail):
    k = node.split_k
    n = len(node.a)
    if k is None or not 1 <= k <= n - 1:
        fail(path, "structure", f"invalid split k={k} for |A|={n}")
        return
    a1, a2 = get(node.a, 1, k), get(node.a, k + 1, n)
    left, right = node.left, node.right
    if left.site != "line16" or right.site != "line17":
        fail(path, "structure", f"child call sites are ({left.site}, {right.site}), "
             "expected (line16, line17)")
    if (left.c, left.a, left.b) != (frozenset(a1), a2, node.b | frozenset(a1)):
        fail(path + ".L", "arguments", "left call arguments are not (A1, A2, B | A1)")
    x2 = left.returned or frozenset()
    if (right.c, right.a, right.b) != (x2, a1, node.b | x2):
        fail(path + ".R", "arguments", "right call arguments are not (X2, A1, B | X2)")
    if node.returned != (left.returned or frozenset()) | (right.returned or frozenset()):
        fail(path, "line-18", "returned set is not the union of the children's results")


# -- flat rendering ---------------------------------------------------------

def _fmt(ids) -> str:
    return ",".join(str(e) for e in ids)


def render_flat(tree: TraceTree) -> str:
    """One line per line-10 evaluation, in the order they happened.

    Markers: ``_e_`` tested element, ``#e#`` element already fixed in the
    result (and part of the tested set), ``(e)`` element already ruled out.
    Unmarked elements are still undecided and not tested.
    """
    order = tree.analyzed
    tested, bit = tree.root_check
    lines = [f"A = [{_fmt(order)}]  B = {{{_fmt(sorted(tree.background))}}}",
             f"p(A u B) => {int(bit)}"]
    if tree.root is None:
        lines.append("no recursion entered")
    else:
        fixed, eliminated = set(), set()
        events = tree.events
        evals = [i for i, (kind, _) in enumerate(events) if kind == "eval"]
        for step, pos in enumerate(evals, start=1):
            node = events[pos][1]
            b, bit = node.line10
            tokens = []
            for e in order:
                if e in eliminated:
                    tokens.append(f"({e})")
                elif e in b and e in fixed:
                    tokens.append(f"#{e}#")
                elif e in b:
                    tokens.append(f"_{e}_")
                else:
                    tokens.append(f" {e} ")
            # conclusions reached before the next evaluation
            end = evals[step] if step < len(evals) else len(events)
            found, irrelevant = [], []
            for kind, leaf in events[pos:end]:
                if kind != "leaf":
                    continue
                if leaf.return_line == 12:
                    found += sorted(leaf.returned)
                    fixed.update(leaf.returned)
                else:
                    irrelevant += [e for e in leaf.a if e not in eliminated]
                    eliminated.update(leaf.a)
            notes = []
            if found:
                notes.append(f"{_fmt(found)} found")
            if irrelevant:
                notes.append(f"{_fmt(sorted(irrelevant))} irrelevant")
            if not notes and not bit:
                notes.append(f"relevant element among {_fmt(node.a)}")
            body = "".join(tokens).rstrip()
            lines.append(f"({step}) {body} => {int(bit)}  {', '.join(notes)}".rstrip())
    if tree.outcome is NO_P_SET:
        lines.append("result: no p-set")
    else:
        lines.append(f"result: {{{_fmt(tree.outcome.elements)}}}")
    return "\n".join(lines) + "\n"


# -- JSON -------------------------------------------------------------------

def _ids(s) -> List[int]:
    return sorted(s)


def _node_to_json(node: Optional[TraceNode]):
    if node is None:
        return None
    return {
        "site": node.site,
        "C": _ids(node.c),
        "A": list(node.a),
        "B": _ids(node.b),
        "line10": None if node.line10 is None else
        {"tested": _ids(node.line10[0]), "bit": int(node.line10[1])},
        "split_k": node.split_k,
        "return_line": node.return_line,
        "returned": _ids(node.returned or ()),
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def tree_to_json(tree: TraceTree) -> dict:
    tested, bit = tree.root_check
    if tree.outcome is NO_P_SET:
        outcome = {"result": "none"}
    else:
        outcome = {"result": "p-set", "elements": list(tree.outcome.elements)}
    return {
        "schema": SCHEMA,
        "tool": TOOL,
        "analyzed": list(tree.analyzed),
        "background": _ids(tree.background),
        "root_check": {"tested": _ids(tested), "bit": int(bit)},
        "qx_return_line": tree.qx_return_line,
        "root": _node_to_json(tree.root),
        "outcome": outcome,
        "counters": {
            "nodes": tree.node_count,
            "evaluations": tree.evaluation_count,
            "max_depth": tree.max_depth,
        },
    }


def dumps(tree: TraceTree) -> str:
    return json.dumps(tree_to_json(tree), indent=2) + "\n"


def tree_from_json(doc: dict) -> TraceTree:
    """Rebuild a tree from :func:`tree_to_json` output.

    Evaluation order is recovered from a pre-order walk, which is the order
    the calls were made in.
    """
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported trace schema {doc.get('schema')!r}")
    events = []
    seq = 0

    def build(d, depth):
        nonlocal seq
        if d is None:
            return None
        node = TraceNode(d["site"], frozenset(d["C"]), tuple(d["A"]), frozenset(d["B"]),
                         depth=depth, split_k=d["split_k"], return_line=d["return_line"],
                         returned=frozenset(d["returned"]))
        if d["line10"] is not None:
            node.line10 = (frozenset(d["line10"]["tested"]), bool(d["line10"]["bit"]))
            node.seq = seq
            seq += 1
            events.append(("eval", node))
        node.left = build(d["left"], depth + 1)
        node.right = build(d["right"], depth + 1)
        if node.return_line in (11, 12):
            events.append(("leaf", node))
        return node

    root = build(doc["root"], 1)
    out = doc["outcome"]
    outcome = NO_P_SET if out["result"] == "none" else MinimalPSet(out["elements"])
    rc = doc["root_check"]
    return TraceTree((frozenset(rc["tested"]), bool(rc["bit"])), root, outcome,
                     doc["qx_return_line"], tuple(doc["analyzed"]),
                     frozenset(doc["background"]), events)
