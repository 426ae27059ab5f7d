"""Connecting two sites inside a half-space by a short chain of diagonal segments.

A decomposition writes ``y* - x`` as a sum of ``a_k v_k`` where each v_k is a
diagonal vector ``±e_i ± e_j`` (i != j) and each coefficient is a nonzero
integer with ``m/1000 <= |a_k| <= m/10``.  Every partial position
``x + a_1 v_1 + ... + a_k v_k`` stays within sup-distance 2m of y and strictly
on the target side of the hyperplane.

Construction: the first coordinate pair (a companion axis and the half-space
axis) is brought within m/300 by a zig-zag of short segments and finished with
six segments; every remaining axis is then matched against the half-space axis
by alternating segments that leave it unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .constants import max_direction_steps
from .lattice import Point, l1, point


@dataclass(frozen=True)
class HalfSpace:
    """Source side {x : x_l >= c}, target side {y : y_l > c}; axis is 1-based."""

    axis: int
    c: float


@dataclass(frozen=True)
class SegmentDecomposition:
    y_star: Point
    segments: tuple  # of (a_k, v_k)

    @property
    def K(self) -> int:
        return len(self.segments)

    def positions(self, x: Sequence[int]) -> list[Point]:
        out, cur = [], list(x)
        for a, v in self.segments:
            cur = [c + a * w for c, w in zip(cur, v)]
            out.append(tuple(cur))
        return out


@dataclass(frozen=True)
class Violation:
    clause: str
    index: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        at = "" if self.index is None else f" at segment {self.index}"
        return f"{self.clause} clause{at}: {self.detail}"


PASS = "pass"


def _diag(d: int, i: int, si: int, j: int, sj: int) -> tuple:
    v = [0] * d
    v[i] = si
    v[j] = sj
    return tuple(v)


def step_sizes(m: int) -> dict:
    """Integer scales used by the construction.

    zig: zig-zag segment, floor(m/800) but never below ceil(m/1000) (for
    1000 <= m < 1600 the floor alone would fall short of the lower bound).
    near: pair tolerance floor(m/300).  pair: floor(m/100).  lo, hi: the
    admissible coefficient range rounded inward.
    """
    lo = -(-m // 1000)
    return {"zig": max(m // 800, lo), "near": m // 300, "pair": m // 100, "lo": lo, "hi": m // 10}


def _check_pre(x: Point, y: Point, H: HalfSpace, m: int) -> None:
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("dimension clause: x and y must share a dimension d >= 2")
    if not 1 <= H.axis <= len(x):
        raise ValueError("axis clause: half-space axis out of range")
    if m < 1000:
        raise ValueError("scale clause: m must be at least 1000")
    if l1(x, y) > m:
        raise ValueError("distance clause: |x - y|_1 exceeds m")
    if not x[H.axis - 1] >= H.c:
        raise ValueError("source clause: x lies strictly below the hyperplane")
    if not y[H.axis - 1] > H.c:
        raise ValueError("target clause: y does not lie strictly above the hyperplane")


def connect_in_halfspace(x: Sequence[int], y: Sequence[int], H: HalfSpace, m: int) -> SegmentDecomposition:
    x, y = point(x), point(y)
    _check_pre(x, y, H, m)
    d = len(x)
    ys = tuple(yi + ((xi - yi) % 2) for xi, yi in zip(x, y))
    if ys == x:
        return SegmentDecomposition(ys, ())
    L = H.axis - 1
    A = 0 if L != 0 else 1
    sz = step_sizes(m)
    g, W, f, lo, hi = sz["zig"], sz["near"], sz["pair"], sz["lo"], sz["hi"]
    segs: list = []
    cur = list(x)

    def push(a: int, v: tuple) -> None:
        segs.append((a, v))
        for i in range(d):
            cur[i] += a * v[i]

    # first pair: zig-zag until both gaps are within W
    da, dl = cur[A] - ys[A], cur[L] - ys[L]
    if abs(da) > W:
        # move the companion coordinate toward its target; the half-space
        # coordinate climbs g, g, then alternates -g, +g, so it stays >= x_l + g
        sa = -1 if da > 0 else 1
        up = True
        first = True
        while abs(cur[A] - ys[A]) > W:
            push(g, _diag(d, A, sa, L, 1 if (up or first) else -1))
            if not first:
                up = not up
            first = False
    if abs(cur[L] - ys[L]) > W:
        # move the half-space coordinate; the companion oscillates toward 0
        sl = -1 if cur[L] > ys[L] else 1
        da = cur[A] - ys[A]
        toward = -1 if da > 0 else 1
        k = 0
        while abs(cur[L] - ys[L]) > W:
            push(g, _diag(d, A, toward if k % 2 == 0 else -toward, L, sl))
            k += 1
    da, dl = cur[A] - ys[A], cur[L] - ys[L]
    if (da, dl) != (0, 0):
        d4 = (dl - da) // 2
        d6 = (dl + da) // 2
        push(f, _diag(d, A, 1, L, 1))
        push(f, _diag(d, A, -1, L, 1))
        push(f, _diag(d, A, 1, L, 1))
        push(f + d4, _diag(d, A, 1, L, -1))
        push(f, _diag(d, A, -1, L, -1))
        push(f + d6, _diag(d, A, -1, L, -1))
    # remaining axes, each matched against the half-space axis
    for k in range(d):
        if k in (A, L):
            continue
        while True:
            D = ys[k] - cur[k]
            if D == 0:
                break
            s = 1 if D > 0 else -1
            if 2 * lo <= abs(D) <= 2 * hi:
                push(abs(D) // 2, _diag(d, L, 1, k, s))
                push(abs(D) // 2, _diag(d, L, -1, k, s))
                break
            # too far, or too close to finish in two admissible segments
            push(f, _diag(d, L, 1, k, s))
            push(f, _diag(d, L, -1, k, s))
    dec = SegmentDecomposition(ys, tuple(segs))
    # segment-count bookkeeping: the first pair needs at most about
    # (m + d)/zig + 2 zig-zag segments plus six, each further axis at most
    # 2 ceil((m + 1 - 2 hi)/(2 pair)) + 4, all within the stated budget
    assert dec.K <= max_direction_steps(d), (dec.K, max_direction_steps(d))
    assert tuple(cur) == ys
    return dec


def verify_segments(x: Sequence[int], dec: SegmentDecomposition, y: Sequence[int], H: HalfSpace,
                    m: int) -> str | Violation:
    """PASS, or the first violated clause (near, count, then per segment vector, magnitude, ball, halfspace; then sum)."""
    x, y = point(x), point(y)
    d = len(x)
    L = H.axis - 1
    ys = point(dec.y_star)
    if len(ys) != d or max(abs(a - b) for a, b in zip(ys, y)) > 1 or not ys[L] > H.c:
        return Violation("near", None, "y* must be within sup-distance 1 of y and above the hyperplane")
    if dec.K > max_direction_steps(d):
        return Violation("count", None, f"K = {dec.K} > {max_direction_steps(d)}")
    cur = list(x)
    for i, (a, v) in enumerate(dec.segments):
        v = tuple(v)
        nz = [t for t in range(d) if v[t] != 0] if len(v) == d else []
        if len(nz) != 2 or any(abs(v[t]) != 1 for t in nz):
            return Violation("vector", i, f"{v} is not of the form ±e_i ± e_j with i != j")
        if not (isinstance(a, int) and a != 0 and m / 1000 <= abs(a) <= m / 10):
            return Violation("magnitude", i, f"|a| = {abs(a)} outside [m/1000, m/10]")
        cur = [c + a * w for c, w in zip(cur, v)]
        if max(abs(c - t) for c, t in zip(cur, y)) > 2 * m:
            return Violation("ball", i, "partial position leaves the sup-ball of radius 2m around y")
        if not cur[L] > H.c:
            return Violation("halfspace", i, "partial position is not strictly above the hyperplane")
    if tuple(cur) != ys:
        return Violation("sum", None, "segments do not sum to y* - x")
    return PASS


def random_instance(rng, d: int, m: int) -> tuple[Point, Point, HalfSpace]:
    """A uniformly drawn valid instance: |x - y|_1 <= m, x on the source side, y strictly beyond."""
    while True:
        x = tuple(int(v) for v in rng.integers(-m, m + 1, size=d))
        budget = int(rng.integers(0, m + 1))
        cuts = sorted(int(c) for c in rng.integers(0, budget + 1, size=d - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
        signs = rng.choice([-1, 1], size=d)
        y = tuple(xi + int(s) * p for xi, s, p in zip(x, signs, parts))
        axis = int(rng.integers(1, d + 1))
        top = min(x[axis - 1], y[axis - 1] - 1)
        c = float(top - rng.integers(0, 3)) if rng.random() < 0.5 else float(top) - rng.random()
        if x[axis - 1] >= c and y[axis - 1] > c:
            return x, y, HalfSpace(axis, c)
