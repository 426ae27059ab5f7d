"""Passage times, selected geodesics and exhaustive geodesic enumeration.

Selection rule: among all minimal-passage-time self-avoiding paths from x to
y inside the search box, take the one with the fewest edges, and among those
the lexicographically smallest vertex sequence.  It is computed by one
Dijkstra from y, a breadth-first hop count on the graph of tight edges, and a
greedy walk from x that always steps to the smallest admissible neighbour.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, shortest_path

from .lattice import EdgeId, LatticeBox, Point, box_around, edge, l1, point
from .weights import Environment

REL_TOL = 1e-9


@dataclass(frozen=True)
class PathRec:
    """Vertex self-avoiding nearest-neighbour path."""

    vertices: tuple

    def __post_init__(self) -> None:
        vs = tuple(point(v) for v in self.vertices)
        if not vs:
            raise ValueError("a path needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise ValueError("path is not vertex self-avoiding")
        for a, b in zip(vs, vs[1:]):
            if l1(a, b) != 1:
                raise ValueError(f"consecutive vertices {a}, {b} are not adjacent")
        object.__setattr__(self, "vertices", vs)

    @property
    def edges(self) -> tuple[EdgeId, ...]:
        return tuple(edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    def __len__(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(bases, 0-based axes)`` of the path edges in path order."""
        v = np.array(self.vertices, dtype=np.int64)
        if len(v) < 2:
            return np.zeros((0, v.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
        step = v[1:] - v[:-1]
        axes = np.argmax(np.abs(step), axis=1)
        bases = np.where((step.sum(1) > 0)[:, None], v[:-1], v[1:])
        return bases, axes


def path_weights(env: Environment, p: PathRec) -> np.ndarray:
    bases, axes = p.edge_arrays()
    return env.weights(bases, axes)


def passage_time(env: Environment, p: PathRec) -> float:
    return math.fsum(path_weights(env, p).tolist())


@dataclass(frozen=True)
class GeodesicResult:
    passage_time: float
    geodesic: PathRec
    search_box: LatticeBox
    boundary_touched: bool = False
    attempts: int = 1
    weights: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def T(self) -> float:
        return self.passage_time

    def to_json(self) -> dict:
        return {
            "T": self.passage_time,
            "vertices": [list(v) for v in self.geodesic.vertices],
            "boundary_touched": self.boundary_touched,
        }


class _BoxGraph:
    """CSR weight graph of all edges inside a box."""

    def __init__(self, env: Environment, box: LatticeBox):
        self.box = box
        self.n = len(box)
        shape = box.shape
        self.strides = [int(np.prod(shape[a + 1:])) for a in range(box.d)]
        grids = env.box_weights(box)
        idx = np.arange(self.n).reshape(shape)
        rows, cols, data = [], [], []
        self.w_plus = []
        for a, g in enumerate(grids):
            sl = [slice(None)] * box.d
            sl[a] = slice(0, shape[a] - 1)
            u = idx[tuple(sl)].ravel()
            w = g.ravel()
            wp = np.full(self.n, np.inf)
            wp[u] = w
            self.w_plus.append(wp)
            rows += [u, u + self.strides[a]]
            cols += [u + self.strides[a], u]
            data += [w, w]
        if rows:
            r, c, dt = np.concatenate(rows), np.concatenate(cols), np.concatenate(data)
        else:
            r = c = np.zeros(0, dtype=np.int64)
            dt = np.zeros(0)
        self.rows, self.cols, self.data = r, c, dt
        self.csr = csr_matrix((dt, (r, c)), shape=(self.n, self.n))
        self.coords = [np.unravel_index(np.arange(self.n), shape)[a] for a in range(box.d)]

    def neighbours(self, i: int):
        """(neighbour index, edge weight) pairs inside the box."""
        out = []
        for a, s in enumerate(self.strides):
            c = self.coords[a][i]
            if c > 0:
                out.append((i - s, self.w_plus[a][i - s]))
            if c < self.box.shape[a] - 1:
                out.append((i + s, self.w_plus[a][i]))
        return out


def _select(g: _BoxGraph, ix: int, iy: int) -> tuple[float, list[int]]:
    dist = dijkstra(g.csr, directed=True, indices=iy)
    T = float(dist[ix])
    if not math.isfinite(T):
        raise RuntimeError("target unreachable inside the search box")
    tol = REL_TOL * T
    # arc u -> v when v is reached from y through u along a tight edge
    tight = np.abs(dist[g.cols] - dist[g.rows] - g.data) <= tol
    arcs = csr_matrix((np.ones(int(tight.sum())), (g.rows[tight], g.cols[tight])), shape=(g.n, g.n))
    hops = shortest_path(arcs, method="D", directed=True, unweighted=True, indices=iy)
    seq = [ix]
    cur = ix
    while cur != iy:
        best = None
        for nb, w in g.neighbours(cur):
            if hops[nb] == hops[cur] - 1 and abs(dist[cur] - dist[nb] - w) <= tol:
                if best is None or nb < best:
                    best = nb
        if best is None:
            raise RuntimeError("tight-graph walk got stuck")
        seq.append(best)
        cur = best
    return T, seq


def shortest_passage(env: Environment, x: Sequence[int], y: Sequence[int], padding: float = 1.0,
                     window: LatticeBox | None = None) -> GeodesicResult:
    """Minimal passage time from x to y inside a padded box, with the selected geodesic.

    The box is hull(x, y) grown by ``ceil(padding * |x - y|_1)``; an explicit
    ``window`` replaces it.
    """
    x, y = point(x), point(y)
    if len(x) != env.d or len(y) != env.d:
        raise ValueError("endpoint dimension does not match the environment")
    box = window if window is not None else box_around(x, y, padding)
    if x not in box or y not in box:
        raise ValueError("endpoints must lie inside the search window")
    if x == y:
        return GeodesicResult(0.0, PathRec((x,)), box, False, 1, np.zeros(0))
    g = _BoxGraph(env, box)
    T, seq = _select(g, box.index(x), box.index(y))
    verts = tuple(box.point_of(i) for i in seq)
    p = PathRec(verts)
    touched = any(box.on_boundary(v) for v in verts)
    return GeodesicResult(T, p, box, touched, 1, path_weights(env, p))


def geodesic(env: Environment, x: Sequence[int], y: Sequence[int], padding: float = 1.0,
             max_doublings: int = 2) -> GeodesicResult:
    """shortest_passage, recomputed with doubled padding while the path touches the box boundary."""
    pad = padding
    res = None
    for attempt in range(max_doublings + 1):
        res = shortest_passage(env, x, y, pad)
        if not res.boundary_touched:
            break
        pad *= 2
    return GeodesicResult(res.passage_time, res.geodesic, res.search_box, res.boundary_touched,
                          attempt + 1, res.weights)


class GeodesicEnumeration(NamedTuple):
    paths: list
    partial: bool
    passage_time: float


def enumerate_geodesics(env: Environment, x: Sequence[int], y: Sequence[int], padding: float = 1.0,
                        cap: int = 10_000, window: LatticeBox | None = None) -> GeodesicEnumeration:
    """All geodesics from x to y inside the box (up to ``cap`` of them)."""
    dist_ = env.dist
    if dist_.r == 0 and float(dist_.cdf(0.0)) > 0:
        raise ValueError("enumeration unsupported for zero weights")
    x, y = point(x), point(y)
    box = window if window is not None else box_around(x, y, padding)
    if x == y:
        return GeodesicEnumeration([PathRec((x,))], False, 0.0)
    g = _BoxGraph(env, box)
    ix, iy = box.index(x), box.index(y)
    dx = dijkstra(g.csr, directed=True, indices=ix)
    dy = dijkstra(g.csr, directed=True, indices=iy)
    T = float(dx[iy])
    tol = REL_TOL * T
    on = (np.abs(dx[g.rows] + g.data + dy[g.cols] - T) <= tol) & (dx[g.rows] < dx[g.cols])
    succ: dict[int, list[int]] = {}
    for u, v in zip(g.rows[on].tolist(), g.cols[on].tolist()):
        succ.setdefault(u, []).append(v)
    for u in succ:
        succ[u].sort()
    paths: list[PathRec] = []
    partial = False
    stack = [(ix, [ix])]
    while stack:
        u, seq = stack.pop()
        if u == iy:
            if len(paths) >= cap:
                partial = True
                break
            paths.append(PathRec(tuple(box.point_of(i) for i in seq)))
            continue
        for v in reversed(succ.get(u, [])):
            stack.append((v, seq + [v]))
    return GeodesicEnumeration(paths, partial, T)
