"""The named experiments: replica samplers, cell estimates and the inequality checks.

Every experiment returns cells (estimate, standard error, reference value)
and checks of the form ``margin >= 0``.  Verdicts test direction and
scaling shape with fitted constants; unnamed constants are never assumed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from ..animals import AnimalInstance, animal_tail_bound, animal_tail_threshold, exact_Nn
from ..empirical import mean_stderr, run_replicas, truncation_length, weights_count, weights_measure
from ..geodesics import geodesic, shortest_passage
from ..intervals import IntervalSet
from ..lattice import EdgeId, LatticeBox, edges_in_box, l1
from ..percolation.fields import open_field, oriented_edge_processes, oriented_min_passage
from ..weights import DistributionSpec, Environment
from . import exact
from .config import ExperimentConfig
from .report import Cell, Check, ExperimentReport


@dataclass
class Outcome:
    cells: list
    checks: list
    fitted: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)
    replicas: int = 0
    failures: list = field(default_factory=list)
    touch_rate: float = 0.0


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    summary: str
    inequality: str
    distribution: str
    replicas: int
    schema: dict
    defaults: dict
    run: Callable[[ExperimentConfig, int], Outcome]
    dimension: int = 2
    padding: float = 1.0
    master_seed: int = 1

    def default_config(self) -> ExperimentConfig:
        return ExperimentConfig(self.name, self.dimension, DistributionSpec.parse(self.distribution),
                                self.replicas, self.master_seed, self.padding, dict(self.defaults))


# ------------------------------------------------------------------ helpers

def _binom_se(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n) if n > 0 else math.nan


def _ratio_se(a: float, sa: float, b: float, sb: float) -> float:
    """Delta-method standard error of a / b for independent a, b."""
    if a == 0 or b == 0:
        return math.inf if b == 0 else sa / abs(b)
    return abs(a / b) * math.sqrt((sa / a) ** 2 + (sb / b) ** 2)


def _spread_check(name: str, vals: list, ses: list, limit: float) -> tuple[Check, float]:
    hi = int(np.argmax(vals))
    lo = int(np.argmin(vals))
    if vals[lo] <= 0:
        return Check(name, -math.inf, 0.0), math.inf
    ratio = vals[hi] / vals[lo]
    return Check(name, limit - ratio, _ratio_se(vals[hi], ses[hi], vals[lo], ses[lo])), ratio


def _slope(xs: list, ys: list, ses: list) -> tuple[float, float]:
    """Least-squares slope of ys on xs and its delta-method standard error."""
    x = np.array(xs)
    y = np.array(ys)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    se = math.sqrt(float((xc ** 2) @ (np.array(ses) ** 2))) / sxx
    return slope, se


def _monotone_checks(label: str, params: list, vals: list, ses: list, increasing: bool) -> list:
    out = []
    for i in range(len(vals) - 1):
        diff = vals[i + 1] - vals[i] if increasing else vals[i] - vals[i + 1]
        out.append(Check(f"{label} {params[i]:g} -> {params[i + 1]:g}", diff, math.hypot(ses[i], ses[i + 1])))
    return out


def _env(seed: int, dist: DistributionSpec, d: int) -> Environment:
    return Environment(seed, dist, d)


def _geodesic_weights(seed: int, dist: DistributionSpec, d: int, target: tuple, padding: float):
    g = geodesic(_env(seed, dist, d), (0,) * d, target, padding)
    return tuple(float(w) for w in g.weights), bool(g.boundary_touched)


def _path_runs(cfg: ExperimentConfig, workers: int):
    target = tuple(cfg.params["target"])
    if len(target) != cfg.dimension:
        raise ValueError("target dimension does not match the experiment dimension")
    fn = partial(_geodesic_weights, dist=cfg.distribution, d=cfg.dimension, target=target, padding=cfg.padding)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    W = [np.array(v[0]) for v in run.values]
    touched = [v[1] for v in run.values]
    rate = float(np.mean(touched)) if touched else 0.0
    return run, W, rate


# ---------------------------------------------------------------------- fkg

def _fkg_replica(seed, dist, d, target, e, padding):
    env = _env(seed, dist, d)
    g = geodesic(env, (0,) * d, target, padding)
    return int(e in set(g.geodesic.edges)), float(env.weight(e)), bool(g.boundary_touched)


def run_fkg(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d = cfg.dimension
    e = EdgeId(tuple(p["edge_base"]), int(p["edge_axis"]))
    fn = partial(_fkg_replica, dist=cfg.distribution, d=d, target=tuple(p["target"]), e=e, padding=cfg.padding)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    on = np.array([v[0] for v in run.values], dtype=bool)
    tau = np.array([v[1] for v in run.values])
    n_on = int(on.sum())
    cells, checks = [], []
    for t in p["t_grid"]:
        c = float(np.mean(tau[on] <= t)) if n_on else math.nan
        se = _binom_se(c, n_on)
        F = float(cfg.distribution.cdf(t))
        cells.append(Cell(f"t={t:g}", t, c, se, F, n_on))
        checks.append(Check(f"conditional cdf >= cdf at t={t:g}", c - F, se))
    pe, pse = mean_stderr(on.astype(float))
    return Outcome(cells, checks, {"P(edge on geodesic)": pe, "P(edge on geodesic) se": pse},
                   [f"edge {list(e.base)} axis {e.axis}; conditional cdf estimated from {n_on} replicas"],
                   {"on_geodesic": on.astype(int).tolist(), "tau": tau.tolist()},
                   len(run.values), run.failures, float(np.mean([v[2] for v in run.values])))


# --------------------------------------------------------------- upper_tail

def run_upper_tail(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d, k = cfg.dimension, int(p["k"])
    cut = truncation_length(k, d)
    run, W, rate = _path_runs(cfg, workers)
    cells, checks, ratios, rses, raw = [], [], [], [], {}
    fit = 0.0
    for M in p["M_grid"]:
        B = IntervalSet.half_open(M)
        vals = [weights_measure(w, B, cut) if len(w) > 2 * cut else math.nan for w in W]
        vals = [v for v in vals if not math.isnan(v)]
        m, se = mean_stderr(vals)
        mu = float(cfg.distribution.tail(M))
        cells.append(Cell(f"M={M:g}", M, m, se, mu, len(vals)))
        ratios.append(m / mu)
        rses.append(se / mu)
        checks.append(Check(f"truncated mass below ambient at M={M:g}", 1 - m / mu, se / mu))
        shape = mu ** ((1 - 1 / d) * k)
        fit = max(fit, m / shape)
        raw[f"M={M:g}"] = vals
    checks += _monotone_checks("ratio nonincreasing in M", list(p["M_grid"]), ratios, rses, increasing=False)
    return Outcome(cells, checks,
                   {"ratio to ambient": ratios, "constant for mu[M,inf)^((1-1/d)k)": fit},
                   [f"first and last {cut} edges removed from each geodesic",
                    "sup over |x| and max over all geodesics replaced by one target and the selected geodesic"],
                   raw, len(run.values), run.failures, rate)


# ---------------------------------------------------------- lower_upper_tail

def _tiny_replica(seed, dist, window, x, y, M):
    env = _env(seed, dist, window.d)
    g = shortest_passage(env, x, y, window=window)
    w = g.weights
    return float(np.sum(w >= M)), float(np.mean(w >= M))


def run_lower_upper_tail(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d = cfg.dimension
    window = LatticeBox((0,) * d, tuple(p["grid_hi"]))
    x, y = (0,) * d, tuple(p["target"])
    M, gamma = float(p["M"]), float(p["gamma"])
    ex_count = exact.exact_expectation(cfg.distribution, window, x, y, exact.heavy_count(M))
    ex_frac = exact.exact_expectation(cfg.distribution, window, x, y, exact.heavy_fraction(M))
    fn = partial(_tiny_replica, dist=cfg.distribution, window=window, x=x, y=y, M=M)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    cnt = [v[0] for v in run.values]
    frac = [v[1] for v in run.values]
    mc, sc = mean_stderr(cnt)
    mf, sf = mean_stderr(frac)
    cells = [Cell("heavy edge count", M, mc, sc, ex_count, len(cnt)),
             Cell("heavy edge fraction", M, mf, sf, ex_frac, len(frac))]
    checks = [Check("exact expectation is positive", ex_count, 0.0),
              Check("simulated count matches exact", -abs(mc - ex_count), sc),
              Check("simulated fraction matches exact", -abs(mf - ex_frac), sf)]
    dist = cfg.distribution
    base = float(dist.prob(IntervalSet.closed(M, gamma * M))) * float(dist.tail(M)) ** M
    fitted = {"exact count": ex_count, "exact fraction": ex_frac}
    if 0 < base < 1 and ex_frac > 0:
        fitted["exponent C with E = (mu[M,gM] mu[M,inf)^M)^C"] = math.log(ex_frac) / math.log(base)
    notes = [f"{len(window)}-vertex window, {len(edges_in_box(window))} edges, "
             f"{len(dist._atom_table()[0]) ** len(edges_in_box(window))} configurations enumerated"]
    return Outcome(cells, checks, fitted, notes, {"count": cnt}, len(run.values), run.failures, 0.0)


# ------------------------------------------------------------- borel_bound

def run_borel_bound(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d = cfg.dimension
    run, W, rate = _path_runs(cfg, workers)
    cells, norm, nse, raw = [], [], [], {}
    sets = [(f"q={q:g}", q, IntervalSet.half_open(0.0, float(cfg.distribution.quantile(q)))) for q in p["q_grid"]]
    for B in p["extra_sets"]:
        sets.append((f"B={B}", float(cfg.distribution.prob(B)), B))
    for label, par, B in sets:
        mu = float(cfg.distribution.prob(B))
        if mu <= 0:
            raise ValueError(f"set {B} has zero mass under {cfg.distribution}")
        vals = [weights_measure(w, B) for w in W]
        m, se = mean_stderr(vals)
        ref = mu ** (1 / d)
        cells.append(Cell(label, par, m, se, ref, len(vals)))
        norm.append(m / ref)
        nse.append(se / ref)
        raw[label] = vals
    chk, spread = _spread_check("normalized values within spread limit", norm, nse, float(p["spread"]))
    return Outcome(cells, [chk], {"normalized": norm, "spread": spread, "constant": max(norm)},
                   ["B = [0, q-quantile) plus any extra_sets; normalization mu(B)^(1/d)"], raw, len(run.values), run.failures, rate)


# --------------------------------------------------------------- lower_tail

def run_lower_tail(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    r = cfg.distribution.r
    run, W, rate = _path_runs(cfg, workers)
    cells, checks, ratios, raw = [], [], [], {}
    for eps in p["eps_grid"]:
        B = IntervalSet.closed(r, r + eps)
        mu = cfg.distribution.prob(B)
        vals = [weights_measure(w, B) for w in W]
        m, se = mean_stderr(vals)
        cells.append(Cell(f"eps={eps:g}", eps, m, se, mu, len(vals)))
        ratios.append(m / mu if mu > 0 else math.nan)
        checks.append(Check(f"ratio >= {p['min_ratio']:g} at eps={eps:g}", m / mu - p["min_ratio"], se / mu))
        raw[f"eps={eps:g}"] = vals
    return Outcome(cells, checks, {"ratios": ratios, "constant": min(ratios)},
                   ["B = [r, r + eps]"], raw, len(run.values), run.failures, rate)


# -------------------------------------------------------- bernoulli_onedee

def _bernoulli_replica(seed, p_grid, n, d, padding):
    out, touched = [], False
    for p in p_grid:
        g = geodesic(_env(seed, DistributionSpec.bernoulli_shift(0.0, 1.0, 1.0 - p), d), (0,) * d, (n,) * d, padding)
        out.append(int(np.sum(g.weights == 0)))
        touched |= bool(g.boundary_touched)
    return tuple(out), touched


def run_bernoulli_onedee(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d, n = cfg.dimension, int(p["n"])
    grid = list(p["p_grid"])
    fn = partial(_bernoulli_replica, p_grid=tuple(grid), n=n, d=d, padding=cfg.padding)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    cells, logs, lses, raw = [], [], [], {}
    for i, q in enumerate(grid):
        vals = [v[0][i] / n for v in run.values]
        m, se = mean_stderr(vals)
        cells.append(Cell(f"p={q:g}", q, m, se, q ** (1 / d), len(vals)))
        logs.append(math.log(m))
        lses.append(se / m)
        raw[f"p={q:g}"] = [v[0][i] for v in run.values]
    slope, sse = _slope([math.log(q) for q in grid], logs, lses)
    chk = Check(f"slope within {p['slope_tol']:g} of 1/d", p["slope_tol"] - abs(slope - 1 / d), sse)
    rate = float(np.mean([v[1] for v in run.values])) if run.values else 0.0
    return Outcome(cells, [chk], {"slope": slope, "slope se": sse, "target slope": 1 / d},
                   ["P(tau = 0) = p, P(tau = 1) = 1 - p; target n(1,...,1); "
                    "cells share replica seeds, so weights are monotonically coupled across p",
                    "the configured distribution is not used"],
                   raw, len(run.values), run.failures, rate)


# ------------------------------------------------------------- uniform_ratio

def run_uniform_ratio(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    b, width = float(p["b"]), float(p["width"])
    if any(c < b for c in p["c_grid"]):
        raise ValueError("every interval (c, c + width] must lie in [b, inf)")
    xn = l1(tuple(p["target"]))
    run, W, rate = _path_runs(cfg, workers)
    cells, ratios, rses, raw = [], [], [], {}
    for c in p["c_grid"]:
        B = IntervalSet.left_open(c, c + width)
        mu = cfg.distribution.prob(B)
        vals = [weights_count(w, B) / xn for w in W]
        m, se = mean_stderr(vals)
        cells.append(Cell(f"c={c:g}", c, m, se, mu, len(vals)))
        ratios.append(m / mu)
        rses.append(se / mu)
        raw[f"c={c:g}"] = [weights_count(w, B) for w in W]
    chk, spread = _spread_check("normalized ratios within spread limit", ratios, rses, float(p["spread"]))
    return Outcome(cells, [chk], {"ratios": ratios, "spread": spread, "upper constant": max(ratios)},
                   ["estimate = E[#{e in geodesic : tau_e in (c, c+width]}] / |x|_1; reference mu(c, c+width]"],
                   raw, len(run.values), run.failures, rate)


# -------------------------------------------------------------- length_tail

def run_length_tail(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    xn = l1(tuple(p["target"]))
    run, W, rate = _path_runs(cfg, workers)
    ratios = np.array([len(w) / xn for w in W])
    cells = []
    for lam in p["lambda_grid"]:
        f = float(np.mean(ratios >= lam))
        cells.append(Cell(f"lambda={lam:g}", lam, f, _binom_se(f, len(ratios)), math.nan, len(ratios)))
    checks = [Check(f"max length ratio <= {p['bound']:g}", p["bound"] - float(ratios.max()), 0.0)]
    checks += _monotone_checks("exceedance nonincreasing", list(p["lambda_grid"]),
                               [c.estimate for c in cells], [c.stderr for c in cells], increasing=False)
    m, se = mean_stderr(ratios.tolist())
    return Outcome(cells, checks, {"max ratio": float(ratios.max()), "mean ratio": m, "mean ratio se": se},
                   ["estimate = P(|geodesic| / |x|_1 >= lambda)"], {"length_ratio": ratios.tolist()},
                   len(run.values), run.failures, rate)


# ----------------------------------------------------------------- oriented

def _oriented_replica(seed, dist, n_grid, threshold):
    env = _env(seed, dist, 2)
    T = tuple(oriented_min_passage(env, n) / n for n in n_grid)
    proc = oriented_edge_processes(open_field(env, threshold), {0}, max(n_grid))
    alive = tuple(bool(proc.alive[n]) for n in n_grid)
    right = tuple(float(proc.right[n]) / n if proc.alive[n] else math.nan for n in n_grid)
    return T, alive, right


def run_oriented(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    if cfg.dimension != 2:
        raise ValueError("the oriented experiment is planar (dimension = 2)")
    grid = [int(n) for n in p["n_grid"]]
    thr = float(cfg.distribution.quantile(p["open_prob"]))
    fn = partial(_oriented_replica, dist=cfg.distribution, n_grid=tuple(grid), threshold=thr)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    T = np.array([v[0] for v in run.values])
    K = float(np.quantile(T[:, 0], p["k_quantile"], method="inverted_cdf"))
    cells, fr, fse = [], [], []
    for i, n in enumerate(grid):
        f = float(np.mean(T[:, i] <= K))
        se = _binom_se(f, len(T))
        cells.append(Cell(f"n={n}", n, f, se, p["frac_target"], len(T)))
        fr.append(f)
        fse.append(se)
    checks = _monotone_checks("fraction nondecreasing", grid, fr, fse, increasing=True)
    checks.append(Check(f"fraction >= {p['frac_target']:g} at n={grid[-1]}", fr[-1] - p["frac_target"], fse[-1]))
    alive = np.array([v[1] for v in run.values])
    right = np.array([v[2] for v in run.values])
    fitted = {"K": K, "threshold": thr}
    for i, n in enumerate(grid):
        fitted[f"open oriented survival n={n}"] = float(alive[:, i].mean())
        a = right[alive[:, i], i]
        fitted[f"mean r_n/n among survivors n={n}"] = float(a.mean()) if len(a) else math.nan
    return Outcome(cells, checks, fitted,
                   [f"K fitted as the {p['k_quantile']:g}-quantile of T/n at n={grid[0]}",
                    f"open edges: tau <= {thr:.6g} (open probability {p['open_prob']:g})"],
                   {"T_over_n": T.tolist()}, len(run.values), run.failures, 0.0)


# ------------------------------------------------------------------ animals

def _animal_replica(seed, p_grid, n, d):
    return tuple(exact_Nn(AnimalInstance(_env(seed, DistributionSpec.bernoulli_shift(0.0, 1.0, q), d), n, d))
                 for q in p_grid)


def run_animals(cfg: ExperimentConfig, workers: int) -> Outcome:
    p = cfg.params
    d, n, k = cfg.dimension, int(p["n"]), int(p["k"])
    grid = list(p["p_grid"])
    fn = partial(_animal_replica, p_grid=tuple(grid), n=n, d=d)
    run = run_replicas(fn, cfg.replicas, cfg.master_seed, workers)
    N = np.array(run.values).reshape(len(run.values), len(grid))
    cells, logs, lses = [], [], []
    for i, q in enumerate(grid):
        m, se = mean_stderr((N[:, i] / n).tolist())
        cells.append(Cell(f"p={q:g}", q, m, se, q ** (1 / d), len(N)))
        logs.append(math.log(m))
        lses.append(se / m)
    slope, sse = _slope([math.log(q) for q in grid], logs, lses)
    checks = [Check(f"slope within {p['slope_tol']:g} of 1/d", p["slope_tol"] - abs(slope - 1 / d), sse),
              Check("N_n <= n on every sample", float(n - N.max()), 0.0)]
    s0 = animal_tail_threshold(d, k)
    for i, q in enumerate(grid):
        for mult in p["s_multipliers"]:
            s = s0 * mult
            freq = float(np.mean(N[:, i] / n >= s * q ** (1 / d)))
            bound = animal_tail_bound(n, q, s, d, k)
            checks.append(Check(f"tail bound at p={q:g}, s={mult:g} x threshold", bound - freq,
                                _binom_se(freq, len(N))))
    return Outcome(cells, checks, {"slope": slope, "slope se": sse, "tail threshold s": s0},
                   [f"i.i.d. Bernoulli(p) field, exact maximum over {n}-step self-avoiding paths; "
                    "cells share replica seeds", "the configured distribution is not used"],
                   {f"p={q:g}": N[:, i].tolist() for i, q in enumerate(grid)},
                   len(run.values), run.failures, 0.0)


# ----------------------------------------------------------------- registry

_T_GRID = [round(0.1 * i, 1) for i in range(1, 31)]

REGISTRY: dict[str, ExperimentSpec] = {s.name: s for s in [
    ExperimentSpec(
        "fkg", "conditioning on geodesic membership shifts an edge weight downward",
        "P(tau_e <= t | e in geodesic) >= P(tau_e <= t) for every t",
        "exponential(1)", 2000,
        {"target": "point", "edge_base": "point", "edge_axis": "int", "t_grid": "floats"},
        {"target": (20, 0), "edge_base": (0, 0), "edge_axis": 1, "t_grid": _T_GRID}, run_fkg),
    ExperimentSpec(
        "upper_tail", "geodesics carry fewer large weights than the ambient law",
        "E[truncated empirical mass of [M, inf)] / mu[M, inf) < 1 and nonincreasing in M",
        "pareto(2,1)", 500,
        {"target": "point", "k": "int", "M_grid": "floats"},
        {"target": (60, 0), "k": 1, "M_grid": [4.0, 8.0, 16.0]}, run_upper_tail),
    ExperimentSpec(
        "lower_upper_tail", "exact expectation of heavy edges on a tiny grid against the simulator",
        "exact E[#{e in geodesic : tau_e >= M}] > 0 and simulator within 3 s.e.",
        "atoms((1,0.9),(10,0.1))", 10000,
        {"grid_hi": "point", "target": "point", "M": "float", "gamma": "float"},
        {"grid_hi": (2, 1), "target": (2, 1), "M": 10.0, "gamma": 2.0}, run_lower_upper_tail, padding=0.0),
    ExperimentSpec(
        "borel_bound", "mass of a small set along geodesics scales like mu(B)^(1/d)",
        "E[empirical mass of B] / mu(B)^(1/d) bounded across sets: max/min <= spread",
        "exponential(1)", 400,
        {"target": "point", "q_grid": "floats", "extra_sets": "intervals", "spread": "float"},
        {"target": (60, 0), "q_grid": [0.01, 0.02, 0.05, 0.1], "extra_sets": [], "spread": 4.0}, run_borel_bound),
    ExperimentSpec(
        "lower_tail", "geodesics keep a positive fraction of near-infimum weights",
        "E[empirical mass of [r, r+eps]] / mu[r, r+eps] >= min_ratio in every cell",
        "exponential(1)", 2000,
        {"target": "point", "eps_grid": "floats", "min_ratio": "float"},
        {"target": (20, 0), "eps_grid": [0.05, 0.1, 0.2], "min_ratio": 0.2}, run_lower_tail),
    ExperimentSpec(
        "bernoulli_onedee", "zero-weight edges on diagonal geodesics scale like p^(1/d)",
        "slope of log(E[#zeros]/n) on log p equals 1/d within slope_tol",
        "bernoulli_shift(0,1,0.9)", 300,
        {"n": "int", "p_grid": "floats", "slope_tol": "float"},
        {"n": 60, "p_grid": [0.05, 0.1, 0.2, 0.4], "slope_tol": 0.15}, run_bernoulli_onedee, padding=0.5),
    ExperimentSpec(
        "uniform_ratio", "weights away from the infimum are never over-represented",
        "E[#{e : tau_e in (c, c+w]}] / (mu(c, c+w] |x|_1) bounded across c: max/min <= spread",
        "exponential(1)", 400,
        {"target": "point", "b": "float", "c_grid": "floats", "width": "float", "spread": "float"},
        {"target": (60, 0), "b": 0.5, "c_grid": [0.5, 1.0, 2.0, 4.0], "width": 0.5, "spread": 4.0},
        run_uniform_ratio),
    ExperimentSpec(
        "length_tail", "geodesic length is linear in the distance",
        "max |geodesic| / |x|_1 <= bound and exceedance nonincreasing in lambda",
        "exponential(1)", 500,
        {"target": "point", "lambda_grid": "floats", "bound": "float"},
        {"target": (40, 0), "lambda_grid": [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.75, 2.0], "bound": 2.5},
        run_length_tail),
    ExperimentSpec(
        "oriented", "oriented paths to (n, n) with passage time linear in n",
        "P(oriented T(0, (n,n)) <= K n) nondecreasing in n and >= frac_target at the largest n",
        "exponential(1)", 200,
        {"n_grid": "ints", "open_prob": "float", "k_quantile": "float", "frac_target": "float"},
        {"n_grid": [50, 100, 200], "open_prob": 0.8, "k_quantile": 0.9, "frac_target": 0.9}, run_oriented),
    ExperimentSpec(
        "animals", "greedy lattice animals scale like n p^(1/d)",
        "slope of log(E[N_n]/n) on log p equals 1/d within slope_tol; N_n <= n; tail bound dominates",
        "bernoulli_shift(0,1,0.1)", 2000,
        {"n": "int", "k": "int", "p_grid": "floats", "slope_tol": "float", "s_multipliers": "floats"},
        {"n": 12, "k": 1, "p_grid": [0.05, 0.1, 0.2, 0.4], "slope_tol": 0.15, "s_multipliers": [1.0, 1.5, 2.0]},
        run_animals),
]}


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    if cfg.name not in REGISTRY:
        raise KeyError(f"unknown experiment {cfg.name!r}")
    spec = REGISTRY[cfg.name]
    t0 = time.perf_counter()
    out = spec.run(cfg, workers)
    raw = dict(out.raw)
    raw["failures"] = [list(f) for f in out.failures]
    return ExperimentReport(cfg.name, spec.inequality, cfg.to_json(), cfg.hash(), out.cells, out.checks,
                            out.fitted, out.notes, raw, out.replicas, len(out.failures), out.touch_rate,
                            time.perf_counter() - t0)
