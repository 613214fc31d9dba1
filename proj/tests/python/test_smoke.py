"""Smoke tests for the compiled extension module."""

import json
import os

import pytest

try:
    import _core as core
except ImportError:  # installed layout
    from spacedmod import _core as core

DATA = os.environ.get("SPACEDMOD_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def load(name):
    with open(os.path.join(DATA, "corpus", name), "r", encoding="utf-8") as f:
        return f.read()


def test_analyze_clean_entry():
    report = json.loads(core.analyze(load("two_step_pair.json")))
    assert report["exit_code"] == 0
    assert all(s["status"] == "ok" for s in report["stages"])


def test_analyze_rejects_oversized_object():
    report = json.loads(core.analyze(load("d4_reject.json")))
    assert report["exit_code"] == 2
    stages = {s["stage"]: s for s in report["stages"]}
    certs = stages["triangular"]["payload"]["certificates"]
    assert certs[0]["code"] == "not_finitely_spaced"


def test_normalize_single_pair():
    report = json.loads(core.normalize(load("two_step_pair.json")))
    assert report["exit_code"] == 0
    final = report["final"]
    assert final["rank"] == 2
    assert final["multiplicative"] is True
    for m in final["morphisms"]:
        assert all(c == "1" for c in m["coefficients"])


def test_normalize_symbolic_mode():
    report = json.loads(core.normalize(load("two_step_pair.json"), "symbolic"))
    assert report["exit_code"] == 0
    assert report["final"]["mode"] == "symbolic"
    scales = [v["scale"] for v in report["final"]["vertices"]]
    assert any("lambda_1" in s for s in scales)


def test_certify_reports_obstruction():
    report = json.loads(core.certify(load("obstructed_diamond.json")))
    assert report["exit_code"] == 2
    gens = report["final"]["kernel_generators"]
    assert len(gens) == 1
    assert gens[0]["residual"] == "2^1"


def test_verify_basis_round_trip():
    report = json.loads(core.normalize(load("lemma9_weak.json")))
    verdict = json.loads(core.verify_basis(json.dumps(report["final"])))
    assert verdict["multiplicative"] is True
    assert verdict["rank"] <= 2
    assert all(verdict["conditions"][letter]["pass"] for letter in "abcde")


def test_witness_family_pairwise():
    out = json.loads(core.witness("lemma3", ["0", "2"], "Q", 7))
    results = {(p["left"], p["right"]): p["result"] for p in out["pairwise"]}
    assert results[("0", "0")] == "isomorphic"
    assert results[("0", "2")] == "not_isomorphic"


def test_canonicalize_round_trip():
    text = load("single_d2.json")
    assert core.canonicalize(text) == text


def test_monomial_helpers():
    assert core.monomial_mul("2^1/2", "2^1/2") == "2^1"
    assert core.monomial_pow("4^1", "1/2") == "2^1"
    with pytest.raises(Exception):
        core.monomial_pow("-1", "1/2")
