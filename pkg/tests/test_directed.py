import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpplab.constants import max_direction_steps
from fpplab.directed import (PASS, HalfSpace, SegmentDecomposition, Violation, connect_in_halfspace,
                             random_instance, step_sizes, verify_segments)


def test_small_example():
    H = HalfSpace(2, -1.0)
    dec = connect_in_halfspace((0, 0), (1, 1), H, 1000)
    assert dec.y_star == (2, 2)
    assert dec.K == 6
    assert verify_segments((0, 0), dec, (1, 1), H, 1000) == PASS


def test_same_point():
    dec = connect_in_halfspace((3, 4), (3, 4), HalfSpace(1, 0.0), 1000)
    assert dec.y_star == (3, 4) and dec.K == 0
    assert verify_segments((3, 4), dec, (3, 4), HalfSpace(1, 0.0), 1000) == PASS


@pytest.mark.parametrize("m", [1000, 1234, 1599, 1600, 2500, 9999])
def test_step_sizes_admissible(m):
    sz = step_sizes(m)
    for k in ("zig", "pair"):
        assert m / 1000 <= sz[k] <= m / 10


@pytest.mark.parametrize("d", [2, 3, 4])
def test_random_instances_pass(d):
    rng = np.random.default_rng(d)
    worst = 0
    for _ in range(300):
        m = int(rng.integers(1000, 3000))
        x, y, H = random_instance(rng, d, m)
        dec = connect_in_halfspace(x, y, H, m)
        assert verify_segments(x, dec, y, H, m) == PASS
        worst = max(worst, dec.K)
    assert worst <= max_direction_steps(d)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 3), st.integers(1000, 5000), st.integers(0, 2**32))
def test_construction_round_trip(d, m, seed):
    x, y, H = random_instance(np.random.default_rng(seed), d, m)
    dec = connect_in_halfspace(x, y, H, m)
    assert verify_segments(x, dec, y, H, m) == PASS
    assert dec.positions(x)[-1] == dec.y_star if dec.K else dec.y_star == tuple(x)
    assert all(abs(a - b) <= 1 for a, b in zip(dec.y_star, y))
    assert all((a - b) % 2 == 0 for a, b in zip(dec.y_star, x))


def test_adversarial_scales():
    # hardest regime for the zig step: m just above 1000 and the largest admissible distance
    for m in range(1000, 1700, 7):
        x, y, H = (0, 0, 0), (m - 2, 1, -1), HalfSpace(1, -0.5)
        assert verify_segments(x, connect_in_halfspace(x, y, H, m), y, H, m) == PASS
        x, y, H = (0, 0), (-(m // 2), m - m // 2), HalfSpace(2, 0.0)
        assert verify_segments(x, connect_in_halfspace(x, y, H, m), y, H, m) == PASS


def _tamper(dec, i, a=None, v=None):
    segs = list(dec.segments)
    a0, v0 = segs[i]
    segs[i] = (a0 if a is None else a, v0 if v is None else v)
    return SegmentDecomposition(dec.y_star, tuple(segs))


def test_tamper_magnitude():
    H = HalfSpace(2, -1.0)
    dec = connect_in_halfspace((0, 0), (1, 1), H, 1000)
    res = verify_segments((0, 0), _tamper(dec, 2, a=101), (1, 1), H, 1000)
    assert isinstance(res, Violation) and res.clause == "magnitude" and res.index == 2
    assert "magnitude clause" in str(res)


def test_tamper_ball():
    m = 1000
    H = HalfSpace(2, -1.0)
    up = [(100, (1, 1))] * 21
    dec = SegmentDecomposition((0, 0), tuple(up + [(100, (-1, -1))] * 21))
    assert dec.K <= max_direction_steps(2)
    res = verify_segments((0, 0), dec, (0, 0), H, m)
    assert res.clause == "ball" and res.index == 20


def test_tamper_sign_flip_breaks_sum_or_halfspace():
    x, y, H = (0, 0), (600, 300), HalfSpace(2, -1.0)
    dec = connect_in_halfspace(x, y, H, 1000)
    a, v = dec.segments[0]
    res = verify_segments(x, _tamper(dec, 0, v=tuple(-c for c in v)), y, H, 1000)
    assert isinstance(res, Violation) and res.clause in ("halfspace", "sum")


def test_tamper_vector_count_near():
    x, y, H = (0, 0), (600, 300), HalfSpace(2, -1.0)
    dec = connect_in_halfspace(x, y, H, 1000)
    assert verify_segments(x, _tamper(dec, 1, v=(1, 0)), y, H, 1000).clause == "vector"
    assert verify_segments(x, _tamper(dec, 1, v=(2, 0)), y, H, 1000).clause == "vector"
    far = SegmentDecomposition((5, 5), dec.segments)
    assert verify_segments(x, far, y, H, 1000).clause == "near"
    many = SegmentDecomposition(dec.y_star, dec.segments * 400)
    assert verify_segments(x, many, y, H, 1000).clause == "count"


def test_halfspace_clause_detected():
    H = HalfSpace(2, 0.0)
    dec = SegmentDecomposition((2, 2), ((10, (1, -1)), (10, (1, 1)), (10, (-1, 1)), (10, (-1, -1))))
    assert verify_segments((0, 2), dec, (2, 2), H, 1000).clause == "halfspace"


@pytest.mark.parametrize("x,y,H,m,clause", [
    ((0, 0), (0, 0, 0), HalfSpace(1, 0), 1000, "dimension"),
    ((0, 0), (1, 1), HalfSpace(3, 0), 1000, "axis"),
    ((0, 0), (1, 1), HalfSpace(1, -1), 999, "scale"),
    ((0, 0), (900, 200), HalfSpace(1, -1), 1000, "distance"),
    ((0, -5), (1, 1), HalfSpace(2, -1), 1000, "source"),
    ((0, 0), (1, -1), HalfSpace(2, -1), 1000, "target"),
])
def test_preconditions(x, y, H, m, clause):
    with pytest.raises(ValueError, match=clause):
        connect_in_halfspace(x, y, H, m)
