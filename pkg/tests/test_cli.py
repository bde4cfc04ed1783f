import json
import random

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from tiltquiver.cli import main
from tiltquiver.formats import (FIXTURES, AlgebraSpecFile, ModuleSpecFile, fixture_text, load_fixture,
                                parse_module_document)
from tiltquiver.repmod import direct_sum_module, is_isomorphic, simple
from tiltquiver.samples import random_linear_nakayama, random_module


def run(*args, ok=(0,)):
    res = CliRunner().invoke(main, list(args), catch_exceptions=False)
    assert res.exit_code in ok, res.output
    return res


def report(*args):
    return json.loads(run(*args).output)


def test_basis_lists_paths():
    doc = report("basis", "EX49B")
    assert doc["passed"] and doc["command"] == "basis"
    assert doc["payload"]["dimension"] == 9


def test_hasse_report_and_dot():
    doc = report("hasse", "EX49A")
    assert doc["payload"]["vertices"] == 8 and doc["passed"]
    dot = run("hasse", "A2", "--format", "dot").output
    assert dot.startswith("digraph") and dot.count("->") == 1


def test_flags_may_follow_the_subcommand():
    a = run("--seed", "5", "hasse", "A2").output
    b = run("hasse", "A2", "--seed", "5").output
    assert a == b and json.loads(a)["seed"] == 5


def test_output_is_deterministic(tmp_path):
    for args in (["hasse", "EX49A"], ["endo", "EX49A", "apr:3"], ["verify", "EX49A", "hulls", "apr:3"],
                 ["cover", "endo-cover", "EX65A", "apr:4", "--weight", "a=1", "--group", "Z/2"]):
        first, second = run(*args).output, run(*args).output
        assert first == second
    p1, p2 = tmp_path / "a.dot", tmp_path / "b.dot"
    run("hasse", "EX49B", "--format", "dot", "--out", str(p1))
    run("hasse", "EX49B", "--format", "dot", "--out", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_endo_emits_a_loadable_algebra(tmp_path):
    target = tmp_path / "B.json"
    doc = report("endo", "EX49A", "apr:3", "--emit-algebra", str(target))
    assert doc["payload"]["dimension"] == 9
    B = AlgebraSpecFile.parse(target.read_text()).build()
    assert B.dim == 9
    again = report("basis", str(target))
    assert again["payload"]["dimension"] == 9


@pytest.mark.parametrize("check", ["hulls", "theta", "arrows", "reachable"])
def test_verify_checks_pass(check):
    doc = report("verify", "EX49A", check, "apr:3")
    assert doc["passed"] and all(doc["assertions"].values())


def test_cover_actions(tmp_path):
    base = ["EX65A", "--weight", "a=1", "--group", "Z/2"]
    doc = report("cover", "build", *base)
    assert doc["payload"]["connected"] and len(doc["payload"]["vertices"]) == 8
    assert report("cover", "verify", *base)["passed"]
    assert report("cover", "first-kind", "EX65A", "apr:4", "--weight", "a=1", "--group", "Z/2")["passed"]
    rep = report("cover", "pullup-tilting", "EX65A", "apr:4", "--weight", "a=1", "--group", "Z/2")
    assert rep["payload"]["summands"] == 8
    ec = report("cover", "endo-cover", "EX65A", "apr:4", "--weight", "a=1", "--group", "Z/2")
    assert ec["payload"]["checks"]["connected"]
    grading = tmp_path / "g.json"
    grading.write_text(json.dumps({"group": "Z/2", "weights": {"a": [1]}}))
    assert report("cover", "build", "EX65A", "--grading", str(grading)) == doc


def test_pullup_then_pushdown_roundtrip(tmp_path):
    A = load_fixture("EX65A")
    s = simple(A, "3")
    mfile = tmp_path / "s.json"
    mfile.write_text(ModuleSpecFile.from_module(s).format())
    cfile = tmp_path / "C.json"
    run("cover", "build", "EX65A", "--weight", "a=1", "--group", "Z/2", "--emit-algebra", str(cfile))
    up = report("cover", "pullup", "EX65A", str(mfile), "--weight", "a=1", "--group", "Z/2")
    lifted = tmp_path / "up.json"
    lifted.write_text(json.dumps({"summands": up["payload"]["modules"]}))
    C = AlgebraSpecFile.parse(cfile.read_text()).build()
    assert sum(m.build(C).total_dim for m in parse_module_document(lifted.read_text())) == 2
    down = report("cover", "pushdown", "EX65A", str(lifted), "--weight", "a=1", "--group", "Z/2")
    mods = [ModuleSpecFile.from_doc(d).build(A) for d in down["payload"]["modules"]]
    assert len(mods) == 1 and is_isomorphic(mods[0], direct_sum_module([s, s]))


def test_exit_code_for_a_failed_assertion(tmp_path):
    kron = AlgebraSpecFile("K", "Q", ["1", "2"], [("x", "1", "2"), ("y", "1", "2")], [])
    kfile = tmp_path / "K.json"
    kfile.write_text(kron.format())
    band = ModuleSpecFile("K", {"1": 1, "2": 1}, {"x": [["1"]], "y": [["2"]]})
    bfile = tmp_path / "band.json"
    bfile.write_text(band.format())
    res = run("cover", "first-kind", str(kfile), str(bfile), "--weight", "y=1", "--group", "Z/2", ok=(1,))
    assert json.loads(res.output)["passed"] is False


def test_exit_codes_for_bad_input(tmp_path):
    assert run("basis", "NOPE", ok=(2,)).exit_code == 2
    assert run("hasse", "EX49A", "--start", "apr:1", ok=(2,)).exit_code == 2
    assert run("cover", "build", "EX65A", "--weight", "zz=1", ok=(2,)).exit_code == 2
    assert run("cover", "build", "EX65A", "--group", "S3", ok=(2,)).exit_code == 2
    assert run("frobnicate", ok=(2,)).exit_code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("basis", str(bad), ok=(2,)).exit_code == 2
    s1 = tmp_path / "s1.json"
    s1.write_text(ModuleSpecFile.from_module(simple(load_fixture("A2"), "1")).format())
    assert run("hasse", "A2", "--start", str(s1), ok=(2,)).exit_code == 2


def test_exit_code_for_an_exceeded_cap():
    assert run("hasse", "EX65A", "--cap-vertices", "20", ok=(3,)).exit_code == 3


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_files_roundtrip(name):
    text = fixture_text(name)
    assert AlgebraSpecFile.parse(text).format() == text


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_algebra_and_module_files_roundtrip(seed):
    rng = random.Random(seed)
    alg = random_linear_nakayama(rng)
    text = AlgebraSpecFile.from_algebra(alg).format()
    again = AlgebraSpecFile.parse(text).build()
    assert AlgebraSpecFile.from_algebra(again).format() == text and again.dim == alg.dim
    m = random_module(alg, rng)
    mtext = ModuleSpecFile.from_module(m).format()
    back = ModuleSpecFile.parse(mtext).build(again)
    assert ModuleSpecFile.from_module(back).format() == mtext
    assert back.dims == m.dims


def test_verify_beyond_steps_does_not_change_the_verdict():
    doc = report("verify", "EX49A", "theta", "apr:3", "--beyond-steps", "1")
    assert doc["passed"] and doc["payload"]["beyond"]["pairs"] > 0
