"""Kesten shells, good barriers, the cheap-crossing check and black boxes.

Colours live on the sup-norm adjacency graph (every pair at sup-distance 1
is joined).  A nearest-neighbour pair takes the colour of its lattice edge:
white (open) iff tau_e <= Mbar.  A diagonal pair is white iff its two
vertices are joined by an open lattice path inside their common unit cube,
so white connectivity on the sup-norm graph is exactly open lattice
connectivity.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Collection, Sequence

import numpy as np
from scipy import ndimage
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .. import constants
from ..geodesics import PathRec, geodesic
from ..hashing import replica_seed
from ..lattice import LatticeBox, Point, l1, linf_neighbors, point
from ..weights import DistributionSpec, Environment
from .boxes import (BoxGeometry, BoxParams, box_crossings, box_geometry, canonical_thin_box,
                    enlarged_cube, thin_box, visited_cubes)
from .fields import OpenField, chemical_sample, open_field


@dataclass(frozen=True)
class PercConfig:
    d: int
    rho: int
    delta: float
    Mbar: float
    strict: bool = False
    window_factor: float = 6.0
    pair_budget: int = 2_000_000
    lenient_diam_fraction: float = 0.5

    def __post_init__(self) -> None:
        if self.rho < 1 or self.delta <= 0 or self.Mbar <= 0:
            raise ValueError("rho >= 1, delta > 0 and Mbar > 0 are required")

    @property
    def Cd(self) -> int:
        return constants.barrier_length_constant(self.d)

    @property
    def Lbar(self) -> float:
        return self.Cd * self.rho * self.d * self.Mbar

    def diameter_limit(self, m1: int) -> float:
        """Shells must have l1 diameter strictly below this."""
        if self.strict:
            return m1 / 10000
        return max(m1 / 10000, self.lenient_diam_fraction * self.rho * m1)


def default_barrier_threshold(dist: DistributionSpec, d: int) -> float:
    """Smallest threshold whose open probability beats the three critical levels (up to one ulp of tail)."""
    q = min(1 - constants.p_c(d), 1 - constants.p_c_oriented(2), 3.0 ** (-(d + (d + 1) * 7 ** d)))
    return dist.tail_quantile(q)


def estimate_rho(dist: DistributionSpec, threshold: float, n: int, connected: int = 200,
                 master_seed: int = 0, max_tries: int = 100_000) -> float:
    """max d_C(0, y) / |y|_1 over the first ``connected`` replicas where 0 and y = n e1 connect."""
    ratios = []
    i = 0
    while len(ratios) < connected and i < max_tries:
        env = Environment(replica_seed(master_seed, i), dist, 2)
        s = chemical_sample(env, threshold, (n, 0))
        if s.connected:
            ratios.append(s.ratio)
        i += 1
    return max(ratios) if ratios else math.nan


def pilot_delta(dist: DistributionSpec, d: int = 2, n: int = 40, replicas: int = 50,
                master_seed: int = 0) -> float:
    """0.25 (T(0, n e1) / n - r) averaged over a few replicas."""
    x = (n,) + (0,) * (d - 1)
    tot = 0.0
    for i in range(replicas):
        tot += geodesic(Environment(replica_seed(master_seed, i), dist, d), (0,) * d, x).T / n
    return 0.25 * (tot / replicas - dist.r)


# ------------------------------------------------------------ clusters & shells

@dataclass(frozen=True)
class ClusterResult:
    cluster: frozenset
    exterior_boundary: frozenset
    truncated: bool


class ShellContext:
    """Open-edge data on one window, shared by many shell computations."""

    def __init__(self, field: OpenField, window: LatticeBox):
        self.field = field
        self.window = window
        self.d = window.d
        self.lo = np.array(window.lo)
        self.grids = field.open_grids(window)
        shape = window.shape
        n = len(window)
        idx = np.arange(n).reshape(shape)
        rows, cols = [], []
        for a, g in enumerate(self.grids):
            sl = [slice(None)] * self.d
            sl[a] = slice(0, shape[a] - 1)
            u = idx[tuple(sl)].ravel()[g.ravel()]
            rows.append(u)
            cols.append(u + int(np.prod(shape[a + 1:])))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        _, labels = connected_components(csr_matrix((np.ones(len(r)), (r, c)), shape=(n, n)), directed=False)
        labels = labels.reshape(shape)
        border = np.zeros(shape, dtype=bool)
        for a in range(self.d):
            sl = [slice(None)] * self.d
            sl[a] = 0
            border[tuple(sl)] = True
            sl[a] = -1
            border[tuple(sl)] = True
        self.infinite = np.isin(labels, np.unique(labels[border]))
        if not self.infinite.any():
            raise RuntimeError("no open cluster reaches the window boundary")
        self.reach = ndimage.distance_transform_cdt(~self.infinite, metric="chessboard")
        self._diag: dict = {}

    def _rel(self, p) -> tuple:
        return tuple(int(c) - a for c, a in zip(p, self.window.lo))

    def edge_open(self, p, q) -> bool:
        """Colour of a nearest-neighbour pair (both inside the window)."""
        a = next(i for i in range(self.d) if p[i] != q[i])
        base = p if p[a] < q[a] else q
        return bool(self.grids[a][self._rel(base)])

    def white(self, p, q) -> bool:
        """Colour of a sup-norm adjacency pair; out-of-window pairs count as white."""
        if p not in self.window or q not in self.window:
            return True
        if l1(p, q) == 1:
            return self.edge_open(p, q)
        key = (p, q) if p < q else (q, p)
        hit = self._diag.get(key)
        if hit is None:
            hit = self._cube_connected(*key)
            self._diag[key] = hit
        return hit

    def _cube_connected(self, p, q) -> bool:
        free = [i for i in range(self.d) if p[i] != q[i]]
        cube = set()
        for bits in product((0, 1), repeat=len(free)):
            v = list(p)
            for i, b in zip(free, bits):
                v[i] = min(p[i], q[i]) + b
            cube.add(tuple(v))
        seen = {p}
        dq = deque([p])
        while dq:
            u = dq.popleft()
            if u == q:
                return True
            for i in free:
                for s in (-1, 1):
                    w = list(u)
                    w[i] += s
                    w = tuple(w)
                    if w in cube and w not in seen and self.edge_open(u, w):
                        seen.add(w)
                        dq.append(w)
        return False

    def cluster(self, A: Collection, color: str) -> ClusterResult:
        want_white = {"white": True, "black": False}[color]
        A = {point(a) for a in A}
        clus = set(A)
        dq = deque(A)
        truncated = False
        while dq:
            u = dq.popleft()
            if self.window.on_boundary(u):
                truncated = True
                continue
            for w in linf_neighbors(u):
                if w in clus:
                    continue
                if self.white(u, w) == want_white:
                    clus.add(w)
                    dq.append(w)
        return ClusterResult(frozenset(clus), exterior_boundary(clus), truncated)

    def n_of(self, v) -> int:
        return int(self.reach[self._rel(v)])

    def shell(self, v) -> tuple[frozenset, int, bool]:
        n = self.n_of(v)
        A = [tuple(c + o for c, o in zip(v, off)) for off in product(range(-n, n + 1), repeat=self.d)]
        res = self.cluster(A, "black")
        return res.exterior_boundary, n, res.truncated


def exterior_boundary(A: Collection) -> frozenset:
    """Sup-norm neighbours of A that reach infinity by a lattice path avoiding A."""
    pts = np.array(sorted(A), dtype=np.int64)
    d = pts.shape[1]
    lo = pts.min(0) - 2
    shape = tuple(pts.max(0) + 2 - lo + 1)
    blocked = np.zeros(shape, dtype=bool)
    blocked[tuple((pts - lo).T)] = True
    lab, _ = ndimage.label(~blocked, structure=ndimage.generate_binary_structure(d, 1))
    outside = lab[(0,) * d]  # the grown frame is free and connected
    out = set()
    Aset = {tuple(p) for p in pts.tolist()}
    for p in Aset:
        for w in linf_neighbors(p):
            if w not in Aset and lab[tuple(c - o for c, o in zip(w, lo))] == outside:
                out.add(w)
    return frozenset(out)


def cluster_and_boundary(field: OpenField, A: Collection, color: str, window: LatticeBox) -> ClusterResult:
    return ShellContext(field, window).cluster(A, color)


@dataclass(frozen=True)
class KestenShell:
    shell: frozenset
    n: int
    truncated: bool

    def __iter__(self):
        return iter((self.shell, self.n, self.truncated))


def kesten_shell(field: OpenField, v: Sequence[int], window: LatticeBox) -> KestenShell:
    S, n, tr = ShellContext(field, window).shell(point(v))
    return KestenShell(S, n, tr)


def l1_diameter(pts: Collection) -> int:
    a = np.array(list(pts), dtype=np.int64)
    if len(a) < 2:
        return 0
    best = 0
    for signs in product((1, -1), repeat=a.shape[1] - 1):
        s = np.array((1,) + signs)
        proj = a @ s
        best = max(best, int(proj.max() - proj.min()))
    return best


# ------------------------------------------------------------------ barriers

@dataclass
class BarrierResult:
    ok: bool
    G: frozenset = frozenset()
    witnesses: dict = field(default_factory=dict)
    failure: str | None = None
    offending: Point | None = None
    reason: str = ""
    diameter_limit: float = math.nan

    def __bool__(self) -> bool:
        return self.ok


def _near_boundary_points(B: LatticeBox) -> list[Point]:
    """Points within sup-distance 1 of the vertex boundary of B."""
    outer = B.grow(1)
    inner_lo = tuple(a + 2 for a in B.lo)
    inner_hi = tuple(b - 2 for b in B.hi)
    inner = None if any(a > b for a, b in zip(inner_lo, inner_hi)) else LatticeBox(inner_lo, inner_hi)
    return [p for p in outer.points() if inner is None or p not in inner]


def good_barrier(env: Environment, params: BoxParams, cfg: PercConfig,
                 geom: BoxGeometry | None = None) -> BarrierResult:
    geom = geom if geom is not None else box_geometry(params, cfg.rho)
    if geom.degenerate:
        raise ValueError("box geometry is degenerate: " + "; ".join(geom.notes))
    m, m1 = params.m, params.m1
    window = geom.Bj.grow(int(math.ceil(cfg.window_factor * m)))
    ctx = ShellContext(open_field(env, cfg.Mbar), window)
    limit = cfg.diameter_limit(m1)
    G: set = set()
    for x in _near_boundary_points(geom.Bj):
        S, n, truncated = ctx.shell(x)
        if truncated:
            return BarrierResult(False, failure="i", offending=x, reason="shell reaches the window boundary",
                                 diameter_limit=limit)
        if l1_diameter(S) >= limit:
            return BarrierResult(False, failure="i", offending=x,
                                 reason=f"shell diameter {l1_diameter(S)} >= {limit:g}", diameter_limit=limit)
        G |= S
    for u in sorted(G):
        if u not in geom.annulus:
            return BarrierResult(False, failure="i", offending=u, reason="barrier leaves the annulus",
                                 diameter_limit=limit)
    # clause (ii): multi-source Dijkstra from the scaffold ends, through the annulus only
    targets = sorted(geom.C & geom.inner_boundary())
    if not targets:
        return BarrierResult(False, failure="ii", offending=min(G) if G else None,
                             reason="no scaffold vertex on the shrunk-box boundary", diameter_limit=limit)
    box = geom.Bcheck_minus
    pts = box.points_array()
    in_A = geom.annulus.contains_array(pts)
    is_T = np.zeros(len(box), dtype=bool)
    is_T[[box.index(t) for t in targets]] = True
    shape = box.shape
    idx = np.arange(len(box)).reshape(shape)
    rows, cols, data = [], [], []
    for a, g in enumerate(env.box_weights(box)):
        sl = [slice(None)] * box.d
        sl[a] = slice(0, shape[a] - 1)
        u = idx[tuple(sl)].ravel()
        v = u + int(np.prod(shape[a + 1:]))
        w = g.ravel()
        ok = (in_A[u] & (in_A[v] | is_T[v])) | (is_T[u] & in_A[v])
        rows += [u[ok], v[ok]]
        cols += [v[ok], u[ok]]
        data += [w[ok], w[ok]]
    graph = csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(len(box), len(box)))
    src = np.array([box.index(t) for t in targets])
    dist, pred, _ = dijkstra(graph, directed=True, indices=src, min_only=True, return_predecessors=True)
    witnesses = {}
    budget_T, budget_len = cfg.Lbar * m1, cfg.Cd * m1
    for u in sorted(G):
        iu = box.index(u)
        if not math.isfinite(dist[iu]) or dist[iu] > budget_T:
            return BarrierResult(False, frozenset(G), witnesses, "ii", u, "no cheap path to the scaffold", limit)
        seq = [iu]
        while pred[seq[-1]] >= 0:
            seq.append(int(pred[seq[-1]]))
        path = PathRec(tuple(map(tuple, pts[seq].tolist())))
        if len(path) > budget_len:
            return BarrierResult(False, frozenset(G), witnesses, "ii", u, "witness path too long", limit)
        witnesses[u] = (path, float(dist[iu]))
    return BarrierResult(True, frozenset(G), witnesses, None, None, "", limit)


# ------------------------------------------------------------- cheap crossings

def b1_violation(env: Environment, params: BoxParams, delta: float,
                 pair_budget: int = 2_000_000) -> tuple[Point, Point] | None:
    """A pair v, w in the thin box with |v - w|_1 >= m and T(v, w) < (r + delta)|v - w|_1, or None.

    Passage times use paths inside the enlarged cube.  When the number of
    ordered pairs exceeds the budget, sources are the thin-box vertices on its
    faces plus an evenly spaced subsample of the rest.
    """
    m = params.m
    B = thin_box(params.l, params.j, m)
    R = enlarged_cube(params.l, m)
    r = env.dist.r
    shape = R.shape
    idx = np.arange(len(R)).reshape(shape)
    rows, cols, data = [], [], []
    for a, g in enumerate(env.box_weights(R)):
        sl = [slice(None)] * R.d
        sl[a] = slice(0, shape[a] - 1)
        u = idx[tuple(sl)].ravel()
        v = u + int(np.prod(shape[a + 1:]))
        rows += [u, v]
        cols += [v, u]
        data += [g.ravel(), g.ravel()]
    graph = csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(len(R), len(R)))
    bpts = B.points_array()
    nb = len(bpts)
    if nb * nb <= pair_budget:
        src = bpts
    else:
        face = np.any((bpts == np.array(B.lo)) | (bpts == np.array(B.hi)), axis=1)
        rest = np.nonzero(~face)[0]
        room = max(0, pair_budget // nb - int(face.sum()))
        step = max(1, int(math.ceil(len(rest) / room))) if room > 0 else len(rest) + 1
        keep = face.copy()
        keep[rest[::step]] = True
        src = bpts[keep]
    tidx = R.index_array(bpts)
    for chunk in range(0, len(src), 256):
        s = src[chunk:chunk + 256]
        dist = dijkstra(graph, directed=True, indices=R.index_array(s))[:, tidx]
        sep = np.abs(s[:, None, :] - bpts[None, :, :]).sum(-1)
        bad = (sep >= m) & (dist < (r + delta) * sep)
        if bad.any():
            i, k = np.argwhere(bad)[0]
            return tuple(int(c) for c in s[i]), tuple(int(c) for c in bpts[k])
    return None


def check_B1(env: Environment, params: BoxParams, delta: float, pair_budget: int = 2_000_000) -> bool:
    if delta <= 0:
        raise ValueError("delta must be positive")
    return b1_violation(env, params, delta, pair_budget) is None


def is_black(env: Environment, params: BoxParams, cfg: PercConfig) -> bool:
    if not check_B1(env, params, cfg.delta, cfg.pair_budget):
        return False
    return good_barrier(env, params, cfg).ok


class BlacknessCache:
    """Memoised blackness of thin boxes (by canonical label) in one environment."""

    def __init__(self, env: Environment, m: int, m1: int, cfg: PercConfig):
        self.env, self.m, self.m1, self.cfg = env, m, m1, cfg
        self.boxes: dict = {}

    def box(self, l, j) -> bool:
        key = canonical_thin_box(l, j)
        if key not in self.boxes:
            self.boxes[key] = is_black(self.env, BoxParams(key[0], key[1], self.m, self.m1), self.cfg)
        return self.boxes[key]

    def cube(self, l) -> bool:
        return all(self.box(l, s * k) for k in range(1, len(l) + 1) for s in (1, -1))


def black_cube_stats(env: Environment, path: PathRec, params: BoxParams, cfg: PercConfig,
                     count_cubes: bool = True) -> dict:
    """Distinct black m-cubes visited and distinct black thin boxes crossed in their short direction."""
    cache = BlacknessCache(env, params.m, params.m1, cfg)
    crossed = sorted(box_crossings(path, params.m))
    per_box = {}
    for l, j in crossed:
        per_box[(l, j)] = cache.box(l, j)
    cubes = sorted(visited_cubes(path, params.m)) if count_cubes else []
    black_cubes = [c for c in cubes if cache.cube(c)]
    return {
        "visited_black_cubes": len(black_cubes),
        "crossed_black_boxes": sum(per_box.values()),
        "crossed_boxes": len(crossed),
        "per_box": per_box,
    }
