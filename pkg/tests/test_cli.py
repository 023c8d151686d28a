import json
import pathlib

import pytest

from msmp_kit.cli import main
from msmp_kit.trace import SCHEMA, check_tree, tree_from_json
from msmp_kit.cnf import INTRO_FORMULA, MusPredicate

GOLDEN = pathlib.Path(__file__).parent / "golden"
INTRO = str(GOLDEN / "intro.cnf")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("QX_NO_COLOR", "1")


def test_mus_json(capsys):
    code, out, _ = run(capsys, "mus", "--cnf", INTRO, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["tool"] == "msmp-kit" and "schema" in doc
    assert doc["result"] == "mus"
    assert doc["clauses"] == [1, 3, 5]


def test_mus_text(capsys):
    code, out, _ = run(capsys, "mus", "--cnf", INTRO)
    assert code == 0 and out == "MUS: 1 3 5\n"


def test_mus_satisfiable(tmp_path, capsys):
    f = tmp_path / "sat.cnf"
    f.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    code, out, _ = run(capsys, "mus", "--cnf", str(f), "--format", "json")
    assert code == 0
    assert json.loads(out)["result"] == "none"
    code, out, _ = run(capsys, "mus", "--cnf", str(f))
    assert out == "no p-set\n"


def test_mus_background_everything(capsys):
    code, out, _ = run(capsys, "mus", "--cnf", INTRO, "--background", "1,2,3,4,5",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "mus" and doc["clauses"] == []


def test_mus_with_background_and_trace(tmp_path, capsys):
    trace = tmp_path / "t.json"
    code, out, _ = run(capsys, "mus", "--cnf", INTRO, "--background", "5",
                       "--trace", str(trace), "--format", "json")
    assert code == 0
    assert json.loads(out)["clauses"] in ([1, 3], [2, 4])
    doc = json.loads(trace.read_text())
    assert doc["schema"] == SCHEMA and doc["background"] == [5]
    assert check_tree(tree_from_json(doc), MusPredicate(INTRO_FORMULA)).ok


@pytest.mark.parametrize("split", ["half", "prefix", "suffix"])
def test_mcs(capsys, split):
    code, out, _ = run(capsys, "mcs", "--cnf", INTRO, "--split", split, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == "mcs"
    assert tuple(doc["clauses"]) in {(5,), (1, 2), (1, 4), (2, 3), (3, 4)}


def test_mcs_satisfiable_is_input_error(tmp_path, capsys):
    f = tmp_path / "sat.cnf"
    f.write_text("p cnf 1 1\n1 0\n")
    code, _, err = run(capsys, "mcs", "--cnf", str(f))
    assert code == 2 and "satisfiable" in err


@pytest.mark.parametrize("argv", [
    ["mus", "--cnf", "/nonexistent.cnf"],
    ["mus", "--cnf", INTRO, "--background", "6"],
    ["mus", "--cnf", INTRO, "--background", "1,1"],
    ["mus", "--cnf", INTRO, "--split", "thirds"],
    ["mus"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_bad_dimacs_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.cnf"
    f.write_text("p cnf 1 1\n0\n")
    code, out, err = run(capsys, "mus", "--cnf", str(f))
    assert code == 2 and "line 2" in err and out == ""


def test_decision_limit_exit_3(tmp_path, capsys):
    var = lambda p, h: 2 * p + h + 1
    clauses = [[var(p, 0), var(p, 1)] for p in range(3)]
    clauses += [[-var(p, h), -var(q, h)] for h in range(2)
                for p in range(3) for q in range(p + 1, 3)]
    f = tmp_path / "php.cnf"
    f.write_text(f"p cnf 6 {len(clauses)}\n" + "".join(
        " ".join(map(str, c)) + " 0\n" for c in clauses))
    trace = tmp_path / "t.json"
    code, out, _ = run(capsys, "mus", "--cnf", str(f), "--decision-limit", "1",
                       "--trace", str(trace))
    assert code == 3 and out == "" and not trace.exists()


def test_demo_text(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    steps = [l for l in out.splitlines() if l.startswith("(")]
    assert len(steps) == 9
    assert out.rstrip().endswith("minimal p-set: {3,4,7}")


def test_demo_json_and_trace(tmp_path, capsys):
    trace = tmp_path / "demo.json"
    code, out, _ = run(capsys, "demo", "--format", "json", "--trace", str(trace))
    assert code == 0
    assert json.loads(out) == {"tool": "msmp-kit", "schema": "msmp-kit/1",
                               "result": [3, 4, 7], "evaluations": 10}
    assert json.loads(trace.read_text())["schema"] == SCHEMA


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "60")
    assert code == 0
    assert out.count("PASS") == 5


def test_verify_parity_fails_with_witness(capsys):
    code, out, _ = run(capsys, "verify", "--predicate", "parity", "--trials", "20",
                       "--format", "json")
    assert code == 1
    doc = json.loads(out)
    mono = next(s for s in doc["suites"] if s["suite"] == "monotonicity")
    assert not mono["passed"]
    assert mono["counterexample"]["witness"] == [[1], [1, 2]]


def test_verify_zero_trials_warns(capsys):
    code, out, err = run(capsys, "verify", "--trials", "0")
    assert code == 0 and "vacuous" in err


def test_color_only_on_tty(monkeypatch, capsys):
    monkeypatch.delenv("QX_NO_COLOR")
    code, out, _ = run(capsys, "mus", "--cnf", INTRO)
    assert "\033[" not in out  # captured stdout is not a tty
