import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from fpplab.hashing import STREAM_AUX, hash64, replica_seed, uniform01
from fpplab.intervals import IntervalSet
from fpplab.lattice import EdgeId, LatticeBox, edges_in_box
from fpplab.weights import DistributionSpec, Environment, KDependentField, check_useful, dist_eval, kdep_value, resample

EXP = DistributionSpec.exponential(1.0)


# ------------------------------------------------------------------ hashing

def test_hash_deterministic_and_vectorised():
    a = hash64(7, 1, np.arange(5))
    b = np.concatenate([hash64(7, 1, i) for i in range(5)])
    assert np.array_equal(a, b)


def test_hash_avalanche():
    # flipping one input bit flips about half of the 64 output bits
    rng = np.random.default_rng(0)
    keys = rng.integers(0, 2**62, size=2000)
    bits = rng.integers(0, 62, size=2000)
    h0 = hash64(11, keys)
    h1 = hash64(11, keys ^ (1 << bits))
    flips = np.array([bin(int(x)).count("1") for x in (h0 ^ h1)])
    assert abs(flips.mean() - 32) < 0.5
    assert flips.min() > 8


def test_uniform_is_uniform():
    u = uniform01(3, STREAM_AUX, np.arange(20000))
    assert stats.kstest(u, "uniform").statistic < 0.015


def test_replica_seeds_distinct():
    seeds = {replica_seed(5, i) for i in range(10000)}
    assert len(seeds) == 10000


# ------------------------------------------------------------ distributions

def test_dist_eval_examples():
    assert dist_eval(DistributionSpec.bernoulli_shift(0, 1, 0.3), "cdf", 0) == pytest.approx(0.7)
    assert dist_eval(EXP, "cdf", math.log(2)) == pytest.approx(0.5)
    assert dist_eval(DistributionSpec.atoms([(1, 0.5), (10, 0.5)]), "quantile", 0.6) == 10


@pytest.mark.parametrize("text", ["exponential(1)", "pareto(2,1)", "uniform(0,2)", "atoms((1,0.9),(10,0.1))",
                                  "bernoulli_shift(0,1,0.3)"])
def test_distribution_text_roundtrip(text):
    d = DistributionSpec.parse(text)
    assert DistributionSpec.parse(str(d)) == d


@pytest.mark.parametrize("text", ["exponential(-1)", "nope(1)", "atoms((1,0.5))", "pareto(2"])
def test_distribution_parse_errors(text):
    with pytest.raises(ValueError):
        DistributionSpec.parse(text)


@given(st.floats(0.0, 1.0, exclude_max=True))
def test_quantile_is_left_inverse(u):
    for d in (EXP, DistributionSpec.pareto(2, 1), DistributionSpec.atoms([(1, 0.3), (2, 0.2), (5, 0.5)])):
        q = float(d.quantile(u))
        assert float(d.cdf(q)) >= u - 1e-12
        assert float(d.cdf_left(q)) <= u + 1e-12


@given(st.floats(0, 5), st.floats(0, 5))
def test_prob_of_interval_matches_cdf(a, w):
    d = DistributionSpec.atoms([(1, 0.3), (2, 0.2), (5, 0.5)])
    b = a + w
    assert d.prob(IntervalSet.closed(a, b)) == pytest.approx(float(d.cdf(b)) - float(d.cdf_left(a)))
    assert EXP.prob(IntervalSet.half_open(a, b)) == pytest.approx(math.exp(-a) - math.exp(-b))


def test_check_useful_examples():
    assert check_useful(DistributionSpec.bernoulli_shift(0, 1, 0.7), 2)
    assert not check_useful(DistributionSpec.point_mass(1.0), 2)
    assert check_useful(EXP, 2)


# ------------------------------------------------------------- environments

def test_weight_deterministic_and_override():
    env = Environment(1, EXP, 2)
    e = EdgeId((3, -2), 2)
    assert env.weight(e) == env.weight(e) == Environment(1, EXP, 2).weight(e)
    assert env.with_overrides({e: 7.5}).weight(e) == 7.5
    assert Environment(2, EXP, 2).weight(e) != env.weight(e)


def test_bernoulli_mean():
    env = Environment(1, DistributionSpec.bernoulli_shift(0, 1, 0.3), 2)
    bases = np.stack([np.arange(100000), np.zeros(100000, dtype=np.int64)], axis=1)
    w = env.weights(bases, np.zeros(100000, dtype=np.int64))
    se = math.sqrt(0.3 * 0.7 / 1e5)
    assert abs(w.mean() - 0.3) < 3 * se


def test_box_weights_match_single_queries():
    env = Environment(4, EXP, 2)
    box = LatticeBox((-2, -1), (2, 3))
    h, v = env.box_weights(box)
    assert h[1, 2] == env.weight(EdgeId((-1, 1), 1))
    assert v[4, 0] == env.weight(EdgeId((2, -1), 2))


def test_exponential_weights_follow_law():
    env = Environment(9, EXP, 3)
    es = edges_in_box(LatticeBox((0, 0, 0), (14, 14, 14)))
    w = [env.weight(e) for e in es[:10000]]
    assert stats.kstest(w, "expon").statistic < 0.02


# --------------------------------------------------------- k-dependent field

def test_kdep_same_block_equal():
    f = KDependentField(5, 3, 0.4)
    assert kdep_value(f, EdgeId((0, 0), 1)) == kdep_value(f, EdgeId((1, 1), 2)) == kdep_value(f, EdgeId((2, 2), 1))


def test_kdep_k1_keys_by_canonical_vertex():
    # edges sharing a canonical vertex share a value; others vary
    f = KDependentField(5, 1, 0.5)
    vals = {kdep_value(f, EdgeId((i, 0), 1)) for i in range(50)}
    assert vals == {0, 1}
    assert kdep_value(f, EdgeId((2, 3), 1)) == kdep_value(f, EdgeId((2, 3), 2))


def test_kdep_far_edges_uncorrelated():
    k = 3
    n = 100000
    a = np.array([KDependentField(s, k, 0.5).value(EdgeId((0, 0), 1)) for s in range(2000)])
    assert a.mean() == pytest.approx(0.5, abs=0.05)
    # vectorised over seeds via distinct blocks of one field: blocks are keyed independently
    f = KDependentField(1, k, 0.5)
    x = np.arange(n) * 2 * k
    bases = np.stack([x, np.zeros(n, dtype=np.int64)], axis=1)
    v1 = f.values(bases, np.zeros(n, dtype=np.int64))
    v2 = f.values(bases + [k, 0], np.zeros(n, dtype=np.int64))
    assert abs(np.corrcoef(v1, v2)[0, 1]) < 0.02


# -------------------------------------------------------------- resampling

def test_resample_examples():
    env = Environment(1, EXP, 2)
    e, f = EdgeId((0, 0), 1), EdgeId((5, 5), 2)
    assert resample(env, [], 9) is env
    r = resample(env, [e], 9)
    assert r.weight(f) == env.weight(f)
    assert r.weight(e) != env.weight(e)
    assert resample(env, [e], 9).weight(e) == r.weight(e)


def test_resampled_weight_follows_law():
    env = Environment(1, EXP, 2)
    e = EdgeId((0, 0), 1)
    w = [resample(env, [e], s).weight(e) for s in range(10000)]
    assert stats.kstest(w, "expon").statistic < 0.02


@settings(max_examples=30)
@given(st.integers(0, 2**40), st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 2))
def test_weights_nonnegative_and_support(seed, a, b, axis):
    for dist in (EXP, DistributionSpec.atoms([(1, 0.9), (10, 0.1)])):
        w = Environment(seed, dist, 2).weight(EdgeId((a, b), axis))
        assert w >= dist.r and math.isfinite(w)
