"""The fifteen acceptance criteria, each at its stated scale and tolerance.

Every test records a one-line result that the terminal summary prints as
``criterion N: PASS|FAIL detail``.
"""
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE
from oracles import saw_minimum
from fpplab.animals import kdep_bernoulli_bounds
from fpplab.constants import max_direction_steps
from fpplab.directed import PASS, connect_in_halfspace, random_instance, verify_segments
from fpplab.experiments import REGISTRY, report_bytes, run_experiment
from fpplab.geodesics import shortest_passage
from fpplab.hashing import replica_seed
from fpplab.lattice import EdgeId, LatticeBox
from fpplab.percolation import chemical_sample, estimate_rho
from fpplab.shells import is_kM_large, klarge_bound
from fpplab.weights import DistributionSpec, Environment, KDependentField

pytestmark = pytest.mark.acceptance


def record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, f"criterion {k}: {detail}"


def default_report(name: str):
    return run_experiment(REGISTRY[name].default_config())


def checks_hold(rep) -> bool:
    """Every inequality holds at the point estimate."""
    return all(c.holds for c in rep.checks)


def margins(rep) -> str:
    return "; ".join(f"{c.name}: {c.margin:.3g}±{c.stderr:.2g}" for c in rep.checks)


# 1 -------------------------------------------------------------------------

def test_c01_geodesic_oracle_equivalence():
    win = LatticeBox((0, 0), (3, 3))
    rng = np.random.default_rng(2024)
    dists = [DistributionSpec.exponential(1.0), DistributionSpec.atoms([(1, 0.5), (2, 0.5)])]
    bad = []
    for i in range(100):
        dist = dists[i % 2]
        env = Environment(replica_seed(11, i), dist, 2)
        pts = rng.integers(0, 4, size=(2, 2))
        while (pts[0] == pts[1]).all():
            pts = rng.integers(0, 4, size=(2, 2))
        x, y = tuple(int(v) for v in pts[0]), tuple(int(v) for v in pts[1])
        T = shortest_passage(env, x, y, window=win).T
        best, _ = saw_minimum(win.lo, win.hi, x, y, lambda k: env.weight(EdgeId(*k)))
        ok = T == best if dist.discrete else abs(T - best) <= 1e-9 * best
        if not ok:
            bad.append((i, T, best))
    record(1, not bad, f"100 random 4x4 environments, mismatches: {bad[:3] or 'none'}")


# 2 -------------------------------------------------------------------------

def test_c02_fkg():
    rep = default_report("fkg")
    ok = not any(c.violated for c in rep.checks)
    worst = min(rep.checks, key=lambda c: c.margin / c.stderr if c.stderr > 0 else math.inf)
    record(2, ok and rep.replicas == 2000,
           f"conditional cdf dominates at all 30 grid points up to 3 s.e. (worst {worst.name}: "
           f"{worst.margin:.3g}, se {worst.stderr:.2g})")


# 3 -------------------------------------------------------------------------

def test_c03_lower_tail():
    rep = default_report("lower_tail")
    ratios = [c.estimate / c.reference for c in rep.cells]
    c_hat = min(ratios)
    ok = all(r >= 0.2 for r in ratios) and c_hat > 0
    record(3, ok, f"ratios {[round(r, 3) for r in ratios]}, fitted constant {c_hat:.3g}")


# 4 -------------------------------------------------------------------------

def test_c04_bernoulli_scaling():
    rep = default_report("bernoulli_onedee")
    slope = rep.fitted["slope"]
    record(4, abs(slope - 0.5) <= 0.15, f"slope {slope:.4f} (target 0.5 ± 0.15)")


# 5 -------------------------------------------------------------------------

def test_c05_borel_bound():
    rep = default_report("borel_bound")
    spread = rep.fitted["spread"]
    record(5, spread <= 4, f"max/min of normalized values {spread:.3f} (limit 4)")


# 6 -------------------------------------------------------------------------

def test_c06_upper_tail():
    rep = default_report("upper_tail")
    r = [c.estimate / c.reference for c in rep.cells]
    ok = all(v < 1 for v in r) and all(a >= b for a, b in zip(r, r[1:]))
    record(6, ok, f"ratios at M=4,8,16: {[round(v, 5) for v in r]}")


# 7 -------------------------------------------------------------------------

def test_c07_uniform_ratio():
    rep = default_report("uniform_ratio")
    spread = rep.fitted["spread"]
    r = rep.fitted["ratios"]
    record(7, spread <= 4, f"ratios {[round(v, 4) for v in r]}, max/min {spread:.3g} (limit 4)")


# 8 -------------------------------------------------------------------------

def test_c08_exact_oracle():
    rep = default_report("lower_upper_tail")
    ex = rep.fitted["exact count"]
    cnt = next(c for c in rep.cells if c.cell == "heavy edge count")
    ok = ex > 0 and abs(cnt.estimate - ex) <= 3 * cnt.stderr and rep.replicas == 10_000
    record(8, ok, f"exact {ex:.6g}, simulated {cnt.estimate:.6g} ± {cnt.stderr:.2g}")


# 9 -------------------------------------------------------------------------

def test_c09_klarge_bound():
    dist = DistributionSpec.exponential(1.0)
    e = EdgeId((0, 0), 1)
    lines, ok = [], True
    for k in (1, 2):
        for M in (4.0, 8.0):
            hits = sum(is_kM_large(Environment(replica_seed(9, i), dist, 2), e, k, M) for i in range(10_000))
            freq = hits / 10_000
            bound = klarge_bound(dist, k, M, 2)
            ok &= freq <= bound
            lines.append(f"k={k},M={M:g}: {freq:.4f}<={bound:.3g}")
    record(9, ok, ", ".join(lines))


# 10 ------------------------------------------------------------------------

def test_c10_animals():
    rep = default_report("animals")
    slope = rep.fitted["slope"]
    ok = abs(slope - 0.5) <= 0.15 and checks_hold(rep)
    record(10, ok, f"slope {slope:.4f}; {len(rep.checks)} checks: {'all hold' if checks_hold(rep) else margins(rep)}")


# 11 ------------------------------------------------------------------------

def test_c11_kdep_bounds():
    # edges (i, 0)-(i+1, 0) of a block field with side 4: blocks of four equal
    # variables, so each depends on exactly three others
    n, p, m, trials = 200, 0.3, 3, 10_000
    bases = np.stack([np.arange(n), np.zeros(n, dtype=np.int64)], axis=1)
    axes = np.zeros(n, dtype=np.int64)
    S = np.array([KDependentField(replica_seed(11, i), m + 1, p).values(bases, axes).sum() for i in range(trials)])
    bad = []
    for t in np.arange(2.0, 80.0, 2.0):
        emp = float(np.mean(S - n * p > t))
        b_phi, b_hoef = kdep_bernoulli_bounds(n, p, m, float(t))
        if not (emp <= b_phi and emp <= b_hoef):
            bad.append((float(t), emp, b_phi, b_hoef))
    record(11, not bad, f"39 grid values t in [2, 78], violations: {bad[:3] or 'none'}")


# 12 ------------------------------------------------------------------------

def test_c12_directed_paths():
    rng = np.random.default_rng(12)
    bad, maxK = [], {2: 0, 3: 0}
    for i in range(1000):
        d = 2 + i % 2
        m = int(rng.integers(1000, 5001))
        x, y, H = random_instance(rng, d, m)
        dec = connect_in_halfspace(x, y, H, m)
        v = verify_segments(x, dec, y, H, m)
        maxK[d] = max(maxK[d], dec.K)
        if v != PASS or dec.K > max_direction_steps(d):
            bad.append((i, v))
    record(12, not bad, f"1000 instances, failures {bad[:3] or 'none'}; max K {maxK} "
                        f"(caps {max_direction_steps(2)}, {max_direction_steps(3)})")


# 13 ------------------------------------------------------------------------

def test_c13_oriented():
    rep = default_report("oriented")
    fr = [c.estimate for c in rep.cells]
    ok = all(a <= b for a, b in zip(fr, fr[1:])) and fr[-1] >= 0.9
    record(13, ok, f"K = {rep.fitted['K']:.4g}; fractions at n=50,100,200: {fr}")


# 14 ------------------------------------------------------------------------

def _rho(dist, thr, n, connected=200):
    ratios, paired_ok, i = [], True, 0
    while len(ratios) < connected:
        s = chemical_sample(Environment(replica_seed(0, i), dist, 2), thr, (n, 0))
        if s.connected:
            ratios.append(s.ratio)
            paired_ok &= s.restricted >= s.distance
        i += 1
    return max(ratios), paired_ok


def test_c14_chemical_distance():
    dist = DistributionSpec.exponential(1.0)
    thr = float(dist.quantile(0.8))
    r40, ok40 = _rho(dist, thr, 40)
    r60, ok60 = _rho(dist, thr, 60)
    assert r60 == estimate_rho(dist, thr, 60, connected=200, master_seed=0)
    stable = abs(r60 / r40 - 1) <= 0.10
    record(14, stable and ok40 and ok60,
           f"rho(40) = {r40:.4f}, rho(60) = {r60:.4f}, change {100 * (r60 / r40 - 1):+.1f}%; "
           f"restricted >= unrestricted on every sample: {ok40 and ok60}")


# 15 ------------------------------------------------------------------------

REDUCED = {
    "fkg": {"target": (8, 0)},
    "upper_tail": {"target": (20, 0)},
    "lower_upper_tail": {},
    "borel_bound": {"target": (20, 0)},
    "lower_tail": {"target": (10, 0)},
    "bernoulli_onedee": {"n": 16},
    "uniform_ratio": {"target": (20, 0)},
    "length_tail": {"target": (16, 0)},
    "oriented": {"n_grid": [20, 40]},
    "animals": {"n": 8},
}


def test_c15_determinism_across_workers():
    differ = []
    for name, spec in REGISTRY.items():
        cfg = spec.default_config()
        cfg = cfg.replace(replicas=40, params={**cfg.params, **REDUCED[name]})
        a = report_bytes(run_experiment(cfg, workers=1))
        b = report_bytes(run_experiment(cfg, workers=1))
        c = report_bytes(run_experiment(cfg, workers=8))
        if not a == b == c:
            differ.append(name)
    record(15, not differ, f"10 experiments (40 replicas, reduced sizes), workers 1/1/8 byte-identical; "
                           f"differing: {differ or 'none'}")
