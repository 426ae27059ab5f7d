import itertools
import json
import math
import os

import pytest

from oracles import all_saws, ekey, path_cost
from fpplab.experiments import (REGISTRY, Cell, Check, ConfigError, ExperimentReport, cells_csv, load_config,
                                parse_config, plot_svg, render_config, report_bytes, run_experiment, write_report)
from fpplab.experiments import exact
from fpplab.lattice import LatticeBox
from fpplab.weights import DistributionSpec

GOOD = """# fkg, small
[experiment]
name = fkg
replicas = 40
master_seed = 7

[params]
target = (12, 0)
t_grid = 0.5, 1.0   # two cells
"""


# ------------------------------------------------------------------- config

def test_parse_good_config():
    cfg = parse_config(GOOD, REGISTRY)
    assert cfg.name == "fkg" and cfg.replicas == 40 and cfg.master_seed == 7
    assert cfg.params["target"] == (12, 0) and cfg.params["t_grid"] == [0.5, 1.0]
    assert cfg.params["edge_axis"] == 1  # default kept


@pytest.mark.parametrize("name,spec", sorted(REGISTRY.items()))
def test_render_round_trip(name, spec):
    cfg = spec.default_config()
    back = parse_config(render_config(cfg, spec.schema), REGISTRY)
    assert back == cfg and back.hash() == cfg.hash()


@pytest.mark.parametrize("text,line,column,token", [
    ("[experiment]\nname = fkg\nreplicas = ten\n", 3, 12, "ten"),
    ("[experiment]\nname = nope\n", 2, 8, "nope"),
    ("[experiment]\nname = fkg\n[params]\ntarget = 20, 0\n", 4, 10, "20, 0"),
    ("[experiment]\nname = fkg\n[params]\nt_grid = 0.1, x\n", 4, 15, "x"),
    ("[experiment\nname = fkg\n", 1, 1, "[experiment"),
    ("[experiment]\nname = fkg\nname = fkg\n", 3, 1, "name"),
    ("[experiment]\nname = fkg\n[params]\nbogus = 1\n", 4, 1, "bogus"),
    ("[experiment]\nname = fkg\njunk line\n", 3, 1, "junk line"),
    ("[experiment]\nname = fkg\ndistribution = pareto(2\n", 3, 16, "pareto(2"),
])
def test_config_errors_cite_position(text, line, column, token):
    with pytest.raises(ConfigError) as ei:
        parse_config(text, REGISTRY)
    assert (ei.value.line, ei.value.column, ei.value.token) == (line, column, token)
    assert f"line {line}, column {column}" in str(ei.value)


def test_interval_literal_errors_map_to_file_columns():
    from fpplab.experiments.config import RawValue, PARSERS
    with pytest.raises(ConfigError) as ei:
        PARSERS["intervals"](RawValue("[0,1) ; [2,3", 5, 10))
    assert ei.value.line == 5 and ei.value.column == 10 + len("[0,1) ; [2,3")
    ok = PARSERS["intervals"](RawValue("[0,1) ; {2} ∪ [3,inf)", 1, 1))
    assert len(ok) == 2 and 2 in ok[1] and 1e6 in ok[1]


def test_validation_rules():
    with pytest.raises(ConfigError):
        parse_config("[experiment]\nname = fkg\nreplicas = 1\n", REGISTRY)
    with pytest.raises(ConfigError):
        parse_config("[experiment]\nname = fkg\ndimension = 1\n", REGISTRY)
    with pytest.raises(ConfigError):
        load_config("/nonexistent/file.cfg", REGISTRY)


def test_config_hash_sensitive_to_every_field():
    cfg = parse_config(GOOD, REGISTRY)
    assert cfg.hash() != cfg.replace(master_seed=8).hash()
    assert cfg.hash() != cfg.replace(params={**cfg.params, "t_grid": [0.5]}).hash()
    assert cfg.hash() == parse_config(GOOD + "\n# trailing comment\n", REGISTRY).hash()


# ------------------------------------------------------------------- report

def _report(replicas=100, touch=0.0, failures=0, checks=(Check("a", 0.1, 0.01),)):
    cfg = REGISTRY["fkg"].default_config()
    return ExperimentReport("fkg", "x", cfg.to_json(), cfg.hash(), [Cell("c", 1.0, 0.5, 0.1, 0.4, 10)],
                            list(checks), replicas=replicas, failures=failures, boundary_touch_rate=touch)


def test_verdict_rules():
    assert _report().verdict == "consistent"
    assert _report(checks=[Check("a", -0.02, 0.01)]).verdict == "consistent"  # within 3 s.e.
    assert _report(checks=[Check("a", -0.04, 0.01)]).verdict == "violated"
    assert _report(replicas=29).verdict == "inconclusive"
    rep = _report(touch=0.06)
    assert rep.verdict == "inconclusive" and "padding" in rep.remediation
    assert _report(failures=6).verdict == "inconclusive"


def test_write_report_artifacts(tmp_path):
    rep = _report()
    entry = write_report(rep, str(tmp_path))
    d = tmp_path / "fkg"
    doc = json.loads((d / "report.json").read_text(encoding="utf-8"))
    assert doc["schema"] == "fpp-lab/1" and doc["verdict"] == "consistent"
    rows = (d / "cells.csv").read_text().splitlines()
    assert rows[0] == "cell,parameter,estimate,stderr,reference,n" and len(rows) == 1 + len(rep.cells)
    assert (d / "plot.svg").read_text().startswith("<svg")
    man = [json.loads(l) for l in (tmp_path / "manifest.jsonl").read_text().splitlines()]
    assert man[-1]["config_hash"] == entry["config_hash"] == doc["provenance"]["config_hash"]
    # manifest hash round-trips through the embedded config
    from fpplab.experiments.config import ExperimentConfig
    cfg = REGISTRY["fkg"].default_config()
    assert man[-1]["config_hash"] == cfg.hash()
    assert set(man[-1]) >= {"name", "seed", "config_hash", "verdict", "timestamp"}


def test_write_report_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="cannot write report"):
        write_report(_report(), str(blocker))


def test_non_finite_values_serialised():
    rep = _report(checks=[Check("a", -math.inf, 0.0)])
    doc = json.loads(report_bytes(rep))
    assert doc["checks"][0]["margin"] == "-inf" and doc["verdict"] == "violated"
    assert "<svg" in plot_svg(rep) and cells_csv(rep).count("\n") == 2


# -------------------------------------------------------------- experiments

SMALL = {
    "fkg": {"target": (8, 0), "t_grid": [0.5, 1.0]},
    "upper_tail": {"target": (20, 0), "M_grid": [2.0, 4.0]},
    "lower_upper_tail": {},
    "borel_bound": {"target": (16, 0)},
    "lower_tail": {"target": (10, 0)},
    "bernoulli_onedee": {"n": 10},
    "uniform_ratio": {"target": (16, 0)},
    "length_tail": {"target": (12, 0)},
    "oriented": {"n_grid": [10, 20]},
    "animals": {"n": 6},
}


def small_config(name, replicas=30):
    cfg = REGISTRY[name].default_config()
    return cfg.replace(replicas=replicas, params={**cfg.params, **SMALL[name]})


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_every_experiment_runs_and_is_reproducible(name):
    cfg = small_config(name)
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert report_bytes(a) == report_bytes(b)
    assert a.verdict in ("consistent", "violated", "inconclusive")
    assert a.replicas == 30 and a.cells
    for c in a.cells:
        assert math.isnan(c.stderr) or c.stderr >= 0
    doc = json.loads(report_bytes(a))
    assert doc["config"] == cfg.to_json() and doc["provenance"]["master_seed"] == cfg.master_seed


def test_lower_tail_whole_support_gives_one():
    cfg = REGISTRY["lower_tail"].default_config()
    cfg = cfg.replace(distribution=DistributionSpec.uniform(0.0, 1.0), replicas=30,
                      params={**cfg.params, "target": (8, 0), "eps_grid": [1.0]})
    rep = run_experiment(cfg)
    assert rep.cells[0].estimate == 1.0 and rep.cells[0].reference == 1.0


def test_touch_rate_makes_run_inconclusive():
    cfg = small_config("length_tail").replace(padding=0.0)
    rep = run_experiment(cfg)
    assert rep.boundary_touch_rate > 0.05 and rep.verdict == "inconclusive"


def test_workers_do_not_change_report():
    cfg = small_config("fkg")
    assert report_bytes(run_experiment(cfg, 1)) == report_bytes(run_experiment(cfg, 2))


# ------------------------------------------------------------ exact oracle

def _oracle_expectation(probs, window_hi, M):
    lo, hi = (0, 0), window_hi
    paths = all_saws(lo, hi, lo, hi)
    edges = sorted({ekey(u, v) for p in paths for u, v in zip(p, p[1:])})
    win = LatticeBox(lo, hi)
    from fpplab.lattice import edges_in_box
    assert len(edges_in_box(win)) >= len(edges)
    total = 0.0
    vals = list(probs)
    for combo in itertools.product(vals, repeat=len(edges)):
        w = dict(zip(edges, combo))
        pr = math.prod(probs[c] for c in combo)
        costs = [(path_cost(p, w.__getitem__), len(p), p) for p in paths]
        best = min(c[0] for c in costs)
        sel = min((c for c in costs if c[0] <= best * (1 + 1e-9)), key=lambda c: (c[1], c[2]))[2]
        total += pr * sum(w[ekey(u, v)] >= M for u, v in zip(sel, sel[1:]))
    return total


def test_exact_expectation_matches_independent_enumeration():
    dist = DistributionSpec.atoms([(1, 0.9), (10, 0.1)])
    win = LatticeBox((0, 0), (2, 1))
    got = exact.exact_expectation(dist, win, (0, 0), (2, 1), exact.heavy_count(10))
    assert got == pytest.approx(_oracle_expectation({1.0: 0.9, 10.0: 0.1}, (2, 1), 10), rel=1e-12)
    assert got > 0


def test_exact_rejects_continuous():
    with pytest.raises(ValueError):
        exact.exact_expectation(DistributionSpec.exponential(1), LatticeBox((0, 0), (1, 1)), (0, 0), (1, 1),
                                exact.heavy_count(1))
