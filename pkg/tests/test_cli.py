import io
import json
import os
import random
import subprocess
import sys

import pydot
import pytest

from coalg.bisim import CoalgebraPair
from coalg.cli import run_command
from coalg.corpus import deadlock_vs_step, milner_abc, p32_separator, random_lts, rename
from coalg.lts import minimize
from coalg.sequences import greatest_fixpoint
from coalg.systemfile import dumps_aut, dumps_system


def run(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    if env:
        old = {k: os.environ.get(k) for k in env}
        os.environ.update(env)
    try:
        code = run_command([str(a) for a in argv], out, err)
    finally:
        if env:
            for k, v in old.items():
                if v is None:
                    os.environ.pop(k, None)
                else:
                    os.environ[k] = v
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def twosys(tmp_path):
    P = deadlock_vs_step()
    path = tmp_path / "twosys.toml"
    path.write_text(dumps_system(P, relations={"R": [("x1", "y0")], "Full": list(P.full().pairs)}))
    return path


@pytest.fixture
def milner(tmp_path):
    path = tmp_path / "milner.toml"
    path.write_text(dumps_system(milner_abc()))
    return path


@pytest.fixture
def separator(tmp_path):
    P = p32_separator()
    path = tmp_path / "sep.toml"
    path.write_text(dumps_system(P.left, relations={"Full": list(P.full().pairs)}))
    return path


def test_fixpoint_json(twosys):
    code, out, _ = run("fixpoint", twosys)
    assert code == 0
    js = json.loads(out)
    assert js["stepsToConverge"] == 2
    assert js["steps"][-1] == [["x1", "y0"]]
    assert js["functor"] == "Pf(Times(Const({a}),Id))"


def test_fixpoint_am_operator(twosys):
    code, out, _ = run("fixpoint", twosys, "--op", "am")
    assert code == 0 and json.loads(out)["operator"] == "am"


def test_json_output_is_byte_stable(twosys):
    first = run("fixpoint", twosys)[1]
    assert first == run("fixpoint", twosys)[1]
    assert first.endswith("\n")
    assert first == json.dumps(json.loads(first), indent=2, sort_keys=True) + "\n"


def test_check_bisimulation(twosys):
    code, out, _ = run("check", twosys, "--relation", "R")
    js = json.loads(out)
    assert code == 0
    assert js["flags"] == {"amBisim": True, "hjBisim": True, "amPrecongruence": True,
                           "kernelBisim": "Yes"}
    assert js["consistent"]


def test_check_needs_relation_name_when_ambiguous(twosys):
    code, _, err = run("check", twosys)
    assert code == 2 and "--relation" in err
    code, _, err = run("check", twosys, "--relation", "Nope")
    assert code == 2 and "Nope" in err


def test_check_separator_is_consistent(separator):
    code, out, _ = run("check", separator, "--relation", "Full")
    js = json.loads(out)
    assert code == 0
    assert js["flags"]["amPrecongruence"] and not js["flags"]["amBisim"]


def test_sequence(twosys):
    code, out, _ = run("sequence", twosys, "--steps", 3)
    js = json.loads(out)
    assert code == 0 and js["steps"] == 3 and len(js["relations"]) == 4
    assert js["relations"][1] == [["x1", "y0"]] and js["stabilizedAt"] == 1


def test_sequence_cap_exit_code(milner):
    code, _, err = run("sequence", milner, "--steps", 6, "--cap", 3)
    assert code == 3 and "cap" in err


def test_props_single_property_counterexample():
    code, out, _ = run("props", "--functor", "P32", "--property", "PreservesWeakPullbacks")
    js = json.loads(out)
    assert code == 1
    assert js["status"] == "Counterexample" and js["functor"] == "P32"
    assert set(js) == {"functor", "property", "status", "witness", "corpusSize", "capErrors"}


def test_props_holds_exit_zero():
    code, out, _ = run("props", "--functor", "Times(Const({0,1}),Id)")
    js = json.loads(out)
    assert code == 0
    assert all(v["status"] == "HoldsOnCorpus" for v in js["verdicts"])


def test_props_from_file_and_bad_property(twosys):
    code, out, _ = run("props", twosys, "--property", "PreservesWeakPullbacks")
    assert code == 0 and json.loads(out)["status"] == "HoldsOnCorpus"
    code, _, err = run("props", "--functor", "Id", "--property", "Nope")
    assert code == 2


def test_props_seed_changes_corpus_but_is_reproducible():
    a = run("props", "--functor", "P32", env={"COALG_SEED": "5"})[1]
    b = run("props", "--functor", "P32", env={"COALG_SEED": "5"})[1]
    assert a == b and json.loads(a)["seed"] == 5
    code, _, err = run("props", "--functor", "P32", env={"COALG_SEED": "x"})
    assert code == 2 and "COALG_SEED" in err


def test_compare_exhaustive(twosys):
    code, out, _ = run("compare", twosys)
    js = json.loads(out)
    assert code == 0
    assert js["mode"] == "exhaustive" and js["relationsChecked"] == 4
    assert js["greatestHJ"] == [["x1", "y0"]] and js["greatestHJIsAM"]
    assert js["partitionRefinementAgrees"] and js["consistent"]


def test_compare_sampled_uses_seed(milner):
    code, out, _ = run("compare", milner, "--samples", 10, env={"COALG_SEED": "3"})
    js = json.loads(out)
    assert code == 0 and js["mode"] == "sampled" and js["seed"] == 3
    assert js["relationsChecked"] == 12


def test_minimize_aut_matches_fixpoint(tmp_path):
    rng = random.Random(8)
    C = rename(random_lts(12, ["a", "b"], rng), "")
    path = tmp_path / "sys.aut"
    path.write_text(dumps_aut(C))
    code, out, _ = run("minimize", path)
    js = json.loads(out)
    assert code == 0
    assert js["blocks"] == [list(b) for b in minimize(C)]
    limit = greatest_fixpoint(CoalgebraPair.of(C)).limit
    for block in js["blocks"]:
        assert all((block[0], s) in limit.pairs for s in block)


def test_two_aut_files_merge_labels(tmp_path):
    (tmp_path / "l.aut").write_text('des (0,1,2)\n(0,"a",1)\n')
    (tmp_path / "r.aut").write_text('des (0,1,1)\n(0,"b",0)\n')
    code, out, _ = run("minimize", tmp_path / "l.aut", tmp_path / "r.aut")
    assert code == 0
    assert json.loads(out)["bisimilarity"] == []
    assert json.loads(out)["functor"] == "Pf(Times(Const({a,b}),Id))"


@pytest.mark.parametrize("argv", [
    ("fixpoint", "--format", "dot"),
    ("sequence", "--format", "dot"),
    ("check", "--relation", "R", "--format", "dot"),
    ("compare", "--format", "dot"),
    ("minimize", "--format", "dot"),
])
def test_dot_output_parses(twosys, argv):
    code, out, _ = run(argv[0], twosys, *argv[1:])
    assert code == 0
    graphs = pydot.graph_from_dot_data(out)
    assert graphs and graphs[0].get_name()


def test_props_dot_parses():
    code, out, _ = run("props", "--functor", "Pf", "--format", "dot")
    assert code == 1
    assert pydot.graph_from_dot_data(out)


@pytest.mark.parametrize("argv", [
    (),
    ("frobnicate",),
    ("fixpoint",),
    ("fixpoint", "missing.toml"),
    ("fixpoint", "a", "b", "c"),
    ("props",),
    ("props", "--functor", "Pf(Foo)"),
    ("fixpoint", "--op", "xx", "f"),
])
def test_usage_errors_exit_two(argv):
    code, _, err = run(*argv)
    assert code == 2 and err.startswith("coalg:")


def test_parse_error_reports_location(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('functor = "LTS({a})"\n[systems.m]\nstates = ["x"]\n[systems.m.structure]\nx = "{(a,x}"\n')
    code, _, err = run("fixpoint", bad)
    assert code == 2 and "bad.toml:5:" in err


def test_module_entry_point(twosys):
    proc = subprocess.run([sys.executable, "-m", "coalg", "fixpoint", str(twosys)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["stepsToConverge"] == 2
    proc = subprocess.run([sys.executable, "-m", "coalg", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "coalg" in proc.stdout
