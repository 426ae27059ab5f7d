"""Exact expectations on a tiny grid by enumerating every weight configuration.

Paths are enumerated by depth-first search over simple paths in the window,
independently of the Dijkstra route used by the simulator.  The selected
geodesic follows the same rule as the simulator: least passage time, then
fewest edges, then the lexicographically smallest vertex sequence.
"""
from __future__ import annotations

import math
from itertools import product
from typing import Callable, Sequence

from ..lattice import EdgeId, LatticeBox, Point, edge, edges_in_box, neighbors, point
from ..weights import DistributionSpec

REL_TOL = 1e-9


def simple_paths(window: LatticeBox, x: Sequence[int], y: Sequence[int]) -> list[tuple[Point, ...]]:
    x, y = point(x), point(y)
    out: list = []
    stack = [(x, (x,))]
    while stack:
        u, seq = stack.pop()
        if u == y:
            out.append(seq)
            continue
        for w in neighbors(u):
            if w in window and w not in seq:
                stack.append((w, seq + (w,)))
    return out


def select(paths: list, weights: dict) -> tuple[float, tuple]:
    """(T, selected vertex sequence) under the least-time, fewest-edges, lexicographic rule."""
    scored = []
    for seq in paths:
        T = math.fsum(weights[edge(a, b)] for a, b in zip(seq, seq[1:]))
        scored.append((T, seq))
    T = min(s[0] for s in scored)
    tight = [seq for t, seq in scored if t <= T + REL_TOL * T]
    return T, min(tight, key=lambda s: (len(s), s))


def exact_expectation(dist: DistributionSpec, window: LatticeBox, x: Sequence[int], y: Sequence[int],
                      stat: Callable[[tuple, dict], float]) -> float:
    """E[stat(selected geodesic, weights)] over all atom configurations of the window's edges."""
    if dist.kind not in ("atoms", "bernoulli_shift"):
        raise ValueError("exact enumeration needs a finitely supported distribution")
    vals, cum = dist._atom_table()
    probs = [float(q) for q in (cum[0], *(cum[1:] - cum[:-1]))]
    edges: list[EdgeId] = edges_in_box(window)
    paths = simple_paths(window, x, y)
    terms = []
    for combo in product(range(len(vals)), repeat=len(edges)):
        w = {e: float(vals[c]) for e, c in zip(edges, combo)}
        pr = math.prod(probs[c] for c in combo)
        if pr == 0.0:
            continue
        _, seq = select(paths, w)
        terms.append(pr * stat(seq, w))
    return math.fsum(terms)


def heavy_count(M: float) -> Callable[[tuple, dict], float]:
    def f(seq, w):
        return float(sum(w[edge(a, b)] >= M for a, b in zip(seq, seq[1:])))
    return f


def heavy_fraction(M: float) -> Callable[[tuple, dict], float]:
    def f(seq, w):
        n = len(seq) - 1
        return sum(w[edge(a, b)] >= M for a, b in zip(seq, seq[1:])) / n
    return f
