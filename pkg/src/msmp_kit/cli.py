"""``msmp-kit``: MUS/MCS extraction from DIMACS files, the walkthrough demo,
and the self-check harness.

Exit codes: 0 success (including "no p-set"), 1 a verify suite failed,
2 bad input, 3 solver resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import suites
from .cnf import (
    DimacsError,
    PredicateContractError,
    ResourceLimitExceeded,
    example_instance,
    mcs,
    mus,
    parse_dimacs,
)
from .core import NO_P_SET, SPLITS, InstanceError, qx
from .trace import TraceRecorder, dumps, render_flat

TOOL = "msmp-kit"
OUTPUT_SCHEMA = "msmp-kit/1"


def _style(text, code, stream=sys.stdout):
    if os.environ.get("QX_NO_COLOR") or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _emit(doc: dict):
    out = {"tool": TOOL, "schema": OUTPUT_SCHEMA}
    out.update(doc)
    print(json.dumps(out))


def _background(text):
    if not text:
        return []
    try:
        ids = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad clause index list {text!r}") from None
    if len(set(ids)) != len(ids):
        raise argparse.ArgumentTypeError("duplicate background indices")
    return ids


def _write_trace(path, rec):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(rec.tree))


def _extract(args, kind):
    try:
        with open(args.cnf, encoding="utf-8") as fh:
            formula = parse_dimacs(fh.read())
    except OSError as exc:
        print(f"error: cannot read {args.cnf}: {exc}", file=sys.stderr)
        return 2
    except DimacsError as exc:
        print(f"error: {args.cnf}: {exc}", file=sys.stderr)
        return 2
    rec = TraceRecorder() if args.trace else None
    run = mus if kind == "mus" else mcs
    try:
        outcome = run(formula, args.background, SPLITS[args.split], rec,
                      args.decision_limit)
    except (InstanceError, PredicateContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitExceeded as exc:
        print(f"error: solver resource limit: {exc}", file=sys.stderr)
        return 3
    _write_trace(args.trace, rec)
    if args.format == "json":
        if outcome is NO_P_SET:
            _emit({"result": "none"})
        else:
            _emit({"result": kind, "clauses": list(outcome.elements)})
    elif outcome is NO_P_SET:
        print("no p-set")
    else:
        label = "MUS" if kind == "mus" else "MCS"
        print(f"{_style(label, '1')}: {' '.join(map(str, outcome.elements))}")
    return 0


def cmd_mus(args):
    return _extract(args, "mus")


def cmd_mcs(args):
    return _extract(args, "mcs")


def cmd_demo(args):
    instance, p = example_instance()
    rec = TraceRecorder()
    outcome = qx(instance, p, SPLITS[args.split], rec)
    _write_trace(args.trace, rec)
    if args.format == "json":
        _emit({"result": list(outcome.elements),
               "evaluations": rec.tree.evaluation_count})
    else:
        sys.stdout.write(render_flat(rec.tree))
        print(_style(f"minimal p-set: {{{','.join(map(str, outcome.elements))}}}", "1"))
    return 0


def cmd_verify(args):
    if args.trials == 0:
        print("warning: --trials 0, suites pass vacuously", file=sys.stderr)
    results = suites.run_all(args.seed, args.trials, args.predicate)
    failed = False
    report = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if args.format == "text":
            colour = "32" if r.passed else "31"
            print(f"{_style(status, colour)} {r.name}: {r.message}")
        entry = {"suite": r.name, "passed": r.passed, "trials": r.trials, "message": r.message}
        if not r.passed:
            failed = True
            ce = dict(r.counterexample or {})
            ce["seed"] = args.seed
            if r.trace is not None:
                fd, path = tempfile.mkstemp(prefix="qx-counterexample-", suffix=".json")
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(dumps(r.trace))
                ce["trace_path"] = path
            entry["counterexample"] = ce
            if args.format == "text":
                print("  counterexample: " + json.dumps(ce, default=list))
        report.append(entry)
    if args.format == "json":
        _emit({"result": "verify", "passed": not failed, "suites": report})
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trace=True):
        p.add_argument("--split", choices=sorted(SPLITS), default="half")
        p.add_argument("--format", choices=["text", "json"], default="text")
        if trace:
            p.add_argument("--trace", metavar="PATH", help="write the call tree as JSON")

    for name, fn, help_ in [("mus", cmd_mus, "minimal unsatisfiable subset"),
                            ("mcs", cmd_mcs, "minimal correction subset")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--cnf", required=True, metavar="PATH")
        p.add_argument("--background", type=_background, default=[],
                       metavar="I,J,K", help="1-based clause indices kept fixed")
        p.add_argument("--decision-limit", type=int, default=None, metavar="N")
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("demo", help="run the built-in eight-element walkthrough")
    common(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("verify", help="run the seeded self-check suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--predicate", choices=["superset", "parity"], default="superset")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
