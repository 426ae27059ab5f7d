"""Thresholded open fields, chemical distances and oriented percolation in the plane."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from ..lattice import EdgeId, LatticeBox, box_around, l1, point
from ..weights import Environment


@dataclass(frozen=True)
class OpenField:
    """w_e = 1 (open, white) iff tau_e <= threshold."""

    env: Environment
    threshold: float

    @property
    def d(self) -> int:
        return self.env.d

    def is_open(self, e: EdgeId) -> bool:
        return self.env.weight(e) <= self.threshold

    def open_grids(self, box: LatticeBox) -> list[np.ndarray]:
        """Per-axis boolean grids, shaped like ``Environment.box_weights``."""
        return [g <= self.threshold for g in self.env.box_weights(box)]


def open_field(env: Environment, threshold: float) -> OpenField:
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    return OpenField(env, float(threshold))


def _mask(window: LatticeBox, restrict) -> np.ndarray:
    m = np.zeros(len(window), dtype=bool)
    for v in restrict:
        if v in window:
            m[window.index(v)] = True
    return m


def _open_graph(field: OpenField, window: LatticeBox, restrict=None) -> csr_matrix:
    shape = window.shape
    n = len(window)
    idx = np.arange(n).reshape(shape)
    keep = None
    if restrict is not None:
        if isinstance(restrict, LatticeBox):
            keep = restrict.contains_array(window.points_array())
        else:
            keep = _mask(window, restrict)
    rows, cols = [], []
    for a, g in enumerate(field.open_grids(window)):
        sl = [slice(None)] * window.d
        sl[a] = slice(0, shape[a] - 1)
        u = idx[tuple(sl)].ravel()[g.ravel()]
        v = u + int(np.prod(shape[a + 1:]))
        if keep is not None:
            ok = keep[u] | keep[v]
            u, v = u[ok], v[ok]
        rows += [u, v]
        cols += [v, u]
    r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    return csr_matrix((np.ones(len(r)), (r, c)), shape=(n, n))


def chemical_distance(field: OpenField, u: Sequence[int], v: Sequence[int], window: LatticeBox,
                      restrict: Collection | LatticeBox | None = None) -> float:
    """Fewest open edges on a path from u to v inside window (inf if none).

    With ``restrict``, only edges having at least one endpoint in the
    restricting set may be used.
    """
    u, v = point(u), point(v)
    if u not in window or v not in window:
        raise ValueError("u and v must lie in the window")
    if u == v:
        return 0
    g = _open_graph(field, window, restrict)
    dist = shortest_path(g, method="D", directed=False, unweighted=True, indices=window.index(u))
    out = dist[window.index(v)]
    return int(out) if math.isfinite(out) else math.inf


@dataclass(frozen=True)
class ChemicalSample:
    connected: bool
    distance: float
    restricted: float
    ratio: float


def chemical_sample(env: Environment, threshold: float, y: Sequence[int], padding: float = 0.5,
                    strip: float = 0.25) -> ChemicalSample:
    """d_C(0, y) in a padded window, plus the value restricted to a thinner box around the segment."""
    y = point(y)
    o = (0,) * len(y)
    window = box_around(o, y, padding)
    narrow = box_around(o, y, strip)
    f = open_field(env, threshold)
    dc = chemical_distance(f, o, y, window)
    if not math.isfinite(dc):
        return ChemicalSample(False, math.inf, math.inf, math.nan)
    dr = chemical_distance(f, o, y, window, restrict=narrow)
    return ChemicalSample(True, dc, dr, dc / l1(y))


# ------------------------------------------------------------- oriented paths

def oriented_min_passage(env: Environment, n: int, start: Sequence[int] = (0, 0)) -> float:
    """Minimal passage time from start to start + (n, n) over paths with steps e1, e2."""
    if env.d != 2:
        raise ValueError("oriented passage times are planar (d = 2)")
    if n < 1:
        raise ValueError("n must be at least 1")
    s = point(start)
    box = LatticeBox(s, (s[0] + n, s[1] + n))
    h, v = env.box_weights(box)  # h[i, j]: (i,j)->(i+1,j); v[i, j]: (i,j)->(i,j+1)
    T = np.full((n + 1, n + 1), np.inf)
    T[0, 0] = 0.0
    for diag in range(1, 2 * n + 1):
        i = np.arange(max(0, diag - n), min(n, diag) + 1)
        j = diag - i
        best = np.full(len(i), np.inf)
        a = i > 0
        best[a] = T[i[a] - 1, j[a]] + h[i[a] - 1, j[a]]
        b = j > 0
        best[b] = np.minimum(best[b], T[i[b], j[b] - 1] + v[i[b], j[b] - 1])
        T[i, j] = best
    return float(T[n, n])


@dataclass(frozen=True)
class OrientedProcess:
    right: np.ndarray   # r_i, nan once dead
    left: np.ndarray    # l_i, nan once dead
    alive: np.ndarray   # bool per level


def oriented_edge_processes(field: OpenField, init: Collection[int], levels: int) -> OrientedProcess:
    """Reachable sets of oriented percolation on {(x, t) : x + t even}.

    The directed edge (x, t) -> (x + 1, t + 1) is the lattice edge from
    ((t + x)/2, (t - x)/2) along e1, and (x, t) -> (x - 1, t + 1) the one along e2.
    """
    if field.d != 2:
        raise ValueError("oriented percolation is planar (d = 2)")
    cur = np.unique(np.array(sorted(init), dtype=np.int64))
    if len(cur) == 0:
        raise ValueError("init must be non-empty")
    if np.any(cur % 2):
        raise ValueError("level-0 points must have even x")
    right = np.full(levels + 1, np.nan)
    left = np.full(levels + 1, np.nan)
    alive = np.zeros(levels + 1, dtype=bool)
    right[0], left[0], alive[0] = cur.max(), cur.min(), True
    env, thr = field.env, field.threshold
    for t in range(levels):
        if len(cur) == 0:
            break
        base = np.stack([(t + cur) // 2, (t - cur) // 2], axis=1)
        go_r = env.weights(base, np.zeros(len(cur), dtype=np.int64)) <= thr
        go_l = env.weights(base, np.ones(len(cur), dtype=np.int64)) <= thr
        cur = np.unique(np.concatenate([cur[go_r] + 1, cur[go_l] - 1]))
        if len(cur):
            right[t + 1], left[t + 1], alive[t + 1] = cur.max(), cur.min(), True
    return OrientedProcess(right, left, alive)
