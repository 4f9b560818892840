"""Command line: exit codes, determinism, suite expansion and the registry."""

import json
import subprocess
import sys

import pytest

from torsionlab.checks import REGISTRY, UsageError, run_check
from torsionlab.cli import expand_config, main, run_suite


def _run(*args):
    return subprocess.run([sys.executable, "-m", "torsionlab.cli", *args], capture_output=True, text=True)


def test_list_is_exhaustive(capsys):
    assert main(["list", "--format", "json"]) == 0
    listed = {c["check_id"] for c in json.loads(capsys.readouterr().out)["checks"]}
    assert listed == set(REGISTRY)
    modules = {d.module for d in REGISTRY.values()}
    assert modules == {"residue_arith", "special_maps", "poly_valuations", "bound_engine", "symplectic", "picard_calc"}


def test_run_examples(capsys):
    assert main(["run", "lemma-val", "--p", "7"]) == 0
    assert main(["run", "lagrangian-count", "--p", "2", "--r", "2", "--format", "json"]) == 0
    out = capsys.readouterr().out
    rep = json.loads(out[out.index("{"):])
    assert rep["witness"]["count"] == 15 and rep["status"] == "pass"
    assert rep["schema_version"] == 1 and rep["elapsed_ms"] is None
    assert main(["run", "ar1", "--p", "3", "--k", "1", "--N", "2", "--g", "1", "--format", "json"]) == 0
    assert '"hypothesis-not-met"' in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "no-such-check"],
        ["run", "lemma-val"],
        ["run", "lemma-val", "--p", "8"],
        ["run", "lemma-val", "--p", "7", "--g", "2"],
        ["run", "s6-action", "--dump-relations"],
        ["run", "annihilator", "--g", "2", "--q", "2", "--dump-table"],
        ["bound", "corollary", "--d", "2", "--g", "2"],
        ["bound", "n-p-g", "--p", "5"],
        ["suite", "--config", "/nonexistent.json"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_failure_exits_1_with_confirmed_counterexample(capsys):
    assert main(["run", "e11-named-form", "--format", "json"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "fail"
    assert rep["counterexample"] is not None and rep["counterexample_confirmed"] is True


def test_json_output_is_byte_identical():
    a = _run("run", "ar2", "--p", "5", "--g", "5", "--format", "json")
    b = _run("run", "ar2", "--p", "5", "--g", "5", "--format", "json")
    assert a.returncode == 0 and a.stdout == b.stdout


def test_timing_is_opt_in():
    rep = run_check("lemma-val", {"p": 5}, timing=True)
    assert rep.elapsed_ms is not None and rep.elapsed_ms >= 0
    assert run_check("lemma-val", {"p": 5}).elapsed_ms is None


def test_bound_subcommand(capsys):
    assert main(["bound", "torsion-bound", "--d", "3", "--g", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["breakdown"]["total_bound"] == 12
    assert main(["bound", "big-n", "--g", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["N"] == 273902605770424320000


def test_grid_expansion_order():
    entries = expand_config({"checks": [{"check": "n-p-g", "params": {"p": [2, 3], "g": [1, 2]}}]})
    assert [(e["params"]["p"], e["params"]["g"]) for e in entries] == [(2, 1), (2, 2), (3, 1), (3, 2)]


def test_bad_suite_entries():
    with pytest.raises(UsageError):
        expand_config({"checks": [{"check": "lemma-val", "params": {"q": 3}}]})
    with pytest.raises(UsageError):
        expand_config({"checks": [{"check": "lemma-val", "extra": 1}]})
    with pytest.raises(UsageError):
        expand_config({"checks": [{"check": "lemma-val", "params": {"p": 2.5}}]})


def test_empty_config_warns_and_passes(tmp_path):
    cfg = tmp_path / "empty.json"
    cfg.write_text('{"checks": []}')
    res = _run("suite", "--config", str(cfg))
    assert res.returncode == 0
    assert "warning" in res.stderr


def test_corrupted_expectation_exits_1(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"checks": [{"check": "lagrangian-count", "params": {"p": 2, "r": 2}, "expect": {"count": 16}}]}))
    res = _run("suite", "--config", str(cfg), "--format", "json")
    assert res.returncode == 1
    rep = json.loads(res.stdout)["reports"][0]
    assert rep["status"] == "fail" and rep["counterexample_confirmed"] is True


def test_expected_failure_counts_as_expected():
    agg = run_suite({"checks": [{"check": "e11-named-form", "expect_status": "fail"}]})
    assert agg["unexpected"] == 0
    agg = run_suite({"checks": [{"check": "lemma-val", "params": {"p": 5}, "expect_status": "fail"}]})
    assert agg["unexpected"] == 1


def test_parallel_merge_matches_serial():
    cfg = {"checks": [{"check": "n-p-g", "params": {"p": [2, 3, 5], "g": [1, 2, 3]}}, {"check": "lemma-val", "params": {"p": [3, 5]}}]}
    assert run_suite(cfg, jobs=1) == run_suite(cfg, jobs=3)
