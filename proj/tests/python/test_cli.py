"""End-to-end command-line checks: exit codes and report shapes."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("SPACEDMOD_CLI")
DATA = os.environ.get("SPACEDMOD_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))

pytestmark = pytest.mark.skipif(CLI is None, reason="SPACEDMOD_CLI not set")


def corpus(name):
    return os.path.join(DATA, "corpus", name)


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_analyze_exit_codes():
    assert run("analyze", corpus("two_step_pair.json")).returncode == 0
    assert run("analyze", corpus("d4_reject.json")).returncode == 2


def test_analyze_missing_file_is_io_error():
    assert run("analyze", corpus("no_such_file.json")).returncode == 1


def test_malformed_json_exit_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run("analyze", str(bad)).returncode == 1


def test_normalize_emits_basis():
    p = run("normalize", corpus("endo_double_d3.json"))
    assert p.returncode == 0
    report = json.loads(p.stdout)
    assert report["final"]["rank"] == 2
    scales = {v["name"]: v["scale"] for v in report["final"]["vertices"]}
    assert set(scales) == {"a_1", "a_2", "a_3"}


def test_normalize_obstructed_entry_exits_two():
    p = run("normalize", corpus("obstructed_diamond.json"))
    assert p.returncode == 2
    report = json.loads(p.stdout)
    assert "certificates" in report["final"]


def test_certify_lists_generators():
    p = run("certify", corpus("obstructed_diamond.json"))
    assert p.returncode == 2
    report = json.loads(p.stdout)
    assert report["final"]["kernel_generators"][0]["residual"] == "2^1"


def test_witness_subcommand():
    p = run("witness", "--family", "lemma2", "--params", "0,1,2", "--seed", "3")
    assert p.returncode == 0
    out = json.loads(p.stdout)
    assert len(out["members"]) == 3
    noniso = [q for q in out["pairwise"] if q["left"] != q["right"]]
    assert all(q["result"] == "not_isomorphic" for q in noniso)


def test_dot_export(tmp_path):
    dot = tmp_path / "graph.dot"
    p = run("analyze", corpus("lemma9_weak.json"), "--dot", str(dot))
    assert p.returncode == 0
    text = dot.read_text()
    assert text.startswith("digraph")
    assert "style=dashed" in text  # the weak pair
