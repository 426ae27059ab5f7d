import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import animal_max
from fpplab.animals import (AnimalInstance, animal_tail_bound, animal_tail_threshold, cover_connected, covered,
                            exact_Nn, kdep_bernoulli_bounds)
from fpplab.lattice import EdgeId, LatticeBox, edges_in_box, neighbors
from fpplab.weights import DistributionSpec, Environment, KDependentField


def test_constant_fields():
    ones = Environment(0, DistributionSpec.point_mass(1.0), 2)
    zeros = Environment(0, DistributionSpec.point_mass(0.0), 2)
    assert exact_Nn(AnimalInstance(ones, 7)) == 7
    assert exact_Nn(AnimalInstance(zeros, 7)) == 0
    assert exact_Nn(AnimalInstance(Environment(0, DistributionSpec.point_mass(1.0), 3), 5, 3)) == 5


def test_explicit_field_matches_unpruned_dfs():
    rng = np.random.default_rng(0)
    for _ in range(20):
        field = {e: int(rng.random() < 0.4) for e in edges_in_box(LatticeBox((-1, -1), (1, 1)))}
        inst = AnimalInstance(field, 4)
        brute = animal_max(4, 2, lambda k: field.get(EdgeId(*k), 0))
        assert exact_Nn(inst) == exact_Nn(inst, prune=False) == brute


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**40), st.floats(0.05, 0.6), st.integers(1, 6), st.integers(2, 3))
def test_exact_matches_oracle_on_random_fields(seed, p, n, d):
    env = Environment(seed, DistributionSpec.bernoulli_shift(0, 1, p), d)
    got = exact_Nn(AnimalInstance(env, n, d))
    assert 0 <= got <= n
    assert got == animal_max(n, d, lambda k: int(env.weight(EdgeId(*k))))


def test_kdependent_field_supported():
    f = KDependentField(3, 2, 0.3)
    n = 6
    assert exact_Nn(AnimalInstance(f, n)) == animal_max(n, 2, lambda k: f.value(EdgeId(*k)))


def test_limit_enforced():
    with pytest.raises(ValueError):
        exact_Nn(AnimalInstance(Environment(0, DistributionSpec.point_mass(1.0), 2), 15))


def test_tail_bound_shape():
    s0 = animal_tail_threshold(2, 0)
    assert animal_tail_bound(12, 0.2, s0, 2) == 1.0
    vals = [animal_tail_bound(12, 0.2, s0 * (1 + t), 2) for t in np.linspace(0.01, 2, 30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_tail_bound_dominates_empirical():
    p, n, d = 0.2, 12, 2
    N = np.array([exact_Nn(AnimalInstance(Environment(s, DistributionSpec.bernoulli_shift(0, 1, p), d), n))
                  for s in range(5000)])
    s0 = animal_tail_threshold(d, 0)
    for mult in (0.0001, 0.5, 1.0, 1.001, 1.01, 1.1, 2.0):
        s = s0 * mult
        assert np.mean(N / n >= s * p ** (1 / d)) <= animal_tail_bound(n, p, s, d)


def test_kdep_bounds_examples():
    a, b = kdep_bernoulli_bounds(100, 0.3, 2, 1e-9)
    assert a == pytest.approx(1.0) and b == pytest.approx(1.0)
    assert kdep_bernoulli_bounds(100, 0.3, 0, 10)[1] == pytest.approx(math.exp(-2))
    assert kdep_bernoulli_bounds(100, 0.3, 0, 10)[1] == pytest.approx(0.1353, abs=1e-4)


def _check_cover(alpha, l):
    xs = cover_connected(alpha, l)
    n = len(alpha)
    assert xs[0] == (0,) * len(xs[0])
    assert len(xs) - 1 == (2 * n) // l
    assert all(max(abs(a - b) for a, b in zip(u, v)) <= 1 for u, v in zip(xs, xs[1:]))
    assert covered(alpha, xs, l)


def test_cover_examples():
    xs = cover_connected({(0, 0, 0)}, 1)
    assert xs == [(0, 0, 0)] * 3
    _check_cover({(i, 0) for i in range(6)}, 2)


def test_cover_random_animals():
    rng = np.random.default_rng(1)
    for _ in range(500):
        d = int(rng.integers(2, 4))
        o = (0,) * d
        alpha, frontier = {o}, [o]
        size = int(rng.integers(1, 40))
        while len(alpha) < size and frontier:
            v = frontier[int(rng.integers(len(frontier)))]
            w = neighbors(v)[int(rng.integers(2 * d))]
            if w not in alpha:
                alpha.add(w)
                frontier.append(w)
        _check_cover(alpha, int(rng.integers(1, len(alpha) + 1)))


def test_cover_rejects_disconnected():
    with pytest.raises(ValueError):
        cover_connected({(0, 0), (2, 0)}, 1)
