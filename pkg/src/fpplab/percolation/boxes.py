"""Box geometry around an m-cube: cubes, enlarged cubes, thin boxes and their scaffolds.

Notation: the cube of index l is ``S = {m l_i <= v_i < m(l_i + 1)}``, its
enlargement ``R = {m(l_i - 1) <= v_i < m(l_i + 2)}``, and the thin box for a
signed axis j is ``R(l) ∩ R(l + 2 sgn(j) e_|j|)``: side m along |j|, 3m
across.  Shrunk and grown copies of the thin box start from its
lexicographically smallest corner shifted by ±rho*m1 in every coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..geodesics import PathRec, geodesic
from ..intervals import IntervalSet
from ..lattice import EdgeId, LatticeBox, Point, point
from ..weights import Environment


@dataclass(frozen=True)
class BoxParams:
    l: Point
    j: int
    m: int
    m1: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", point(self.l))
        d = len(self.l)
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if not 1 <= self.m1 < self.m:
            raise ValueError("need 1 <= m1 < m")
        if not 1 <= abs(self.j) <= d:
            raise ValueError(f"j must be a signed axis in ±1..±{d}")

    @classmethod
    def from_scales(cls, l: Sequence[int], j: int, K: float, M: float, s: float) -> "BoxParams":
        """m = floor(K M), m1 = floor(s K M)."""
        return cls(point(l), j, int(math.floor(K * M)), int(math.floor(s * K * M)))

    @property
    def d(self) -> int:
        return len(self.l)

    @property
    def s(self) -> float:
        return self.m1 / self.m

    @property
    def axis(self) -> int:
        """0-based thin axis."""
        return abs(self.j) - 1

    def key(self) -> dict:
        return {"l": list(self.l), "j": self.j, "m": self.m}


def cube(l: Sequence[int], m: int) -> LatticeBox:
    return LatticeBox(tuple(m * c for c in l), tuple(m * (c + 1) - 1 for c in l))


def enlarged_cube(l: Sequence[int], m: int) -> LatticeBox:
    return LatticeBox(tuple(m * (c - 1) for c in l), tuple(m * (c + 2) - 1 for c in l))


def thin_box(l: Sequence[int], j: int, m: int) -> LatticeBox:
    k = abs(j) - 1
    shift = tuple(c + (2 * (1 if j > 0 else -1) if i == k else 0) for i, c in enumerate(l))
    out = enlarged_cube(l, m).intersect(enlarged_cube(shift, m))
    assert out is not None
    return out


def canonical_thin_box(l: Sequence[int], j: int) -> tuple[Point, int]:
    """The label (l', +|j|) of the same vertex set: B^{-k}(l) = B^{+k}(l - 2 e_k)."""
    if j > 0:
        return point(l), j
    k = -j - 1
    return tuple(c - 2 if i == k else c for i, c in enumerate(l)), -j


def checked_box(params: BoxParams, rho: int, sign: int) -> LatticeBox | None:
    """Shrunk (sign=+1) or grown (sign=-1) thin box; None when empty."""
    B = thin_box(params.l, params.j, params.m)
    off = sign * rho * params.m1
    lo = tuple(c + off for c in B.lo)
    sides = [(params.m if i == params.axis else 3 * params.m) - 2 * off for i in range(params.d)]
    if any(s < 0 for s in sides):
        return None
    return LatticeBox(lo, tuple(a + s for a, s in zip(lo, sides)))


def _box_boundary_mask(box: LatticeBox, pts: np.ndarray) -> np.ndarray:
    lo, hi = np.array(box.lo), np.array(box.hi)
    return np.any((pts == lo) | (pts == hi), axis=1) & box.contains_array(pts)


@dataclass(frozen=True)
class Annulus:
    outer: LatticeBox
    inner: LatticeBox | None

    def __contains__(self, p) -> bool:
        return p in self.outer and (self.inner is None or p not in self.inner)

    def contains_array(self, pts: np.ndarray) -> np.ndarray:
        ok = self.outer.contains_array(pts)
        if self.inner is not None:
            ok &= ~self.inner.contains_array(pts)
        return ok


@dataclass
class BoxGeometry:
    params: BoxParams
    rho: int
    S: LatticeBox
    R: LatticeBox
    Bj: LatticeBox
    Bcheck_plus: LatticeBox | None
    Bcheck_minus: LatticeBox
    D: frozenset
    C: frozenset
    Ctilde: frozenset
    Etilde1: frozenset
    Etilde2: frozenset
    annulus: Annulus
    degenerate: bool
    notes: list = field(default_factory=list)

    @property
    def Etilde(self) -> frozenset:
        return self.Etilde1 | self.Etilde2

    def inner_boundary(self) -> frozenset:
        """Vertices of the shrunk box having a lattice neighbour outside it."""
        if self.Bcheck_plus is None:
            return frozenset()
        pts = self.Bcheck_plus.points_array()
        return frozenset(map(tuple, pts[_box_boundary_mask(self.Bcheck_plus, pts)].tolist()))

    def summary(self) -> dict:
        return {
            **self.params.key(), "m1": self.params.m1, "rho": self.rho,
            "S": len(self.S), "R": len(self.R), "Bj": len(self.Bj),
            "Bcheck_plus": 0 if self.Bcheck_plus is None else len(self.Bcheck_plus),
            "Bcheck_minus": len(self.Bcheck_minus),
            "D": len(self.D), "C": len(self.C), "Ctilde": len(self.Ctilde),
            "Etilde1": len(self.Etilde1), "Etilde2": len(self.Etilde2),
            "degenerate": self.degenerate, "notes": list(self.notes),
        }


def box_geometry(params: BoxParams, rho: int) -> BoxGeometry:
    if rho < 1:
        raise ValueError("rho must be at least 1")
    m, m1, d = params.m, params.m1, params.d
    S = cube(params.l, m)
    R = enlarged_cube(params.l, m)
    Bj = thin_box(params.l, params.j, m)
    Bp = checked_box(params, rho, +1)
    Bm = checked_box(params, rho, -1)
    notes = []
    degenerate = False
    if Bp is None:
        degenerate = True
        notes.append("shrunk box is empty: m < 2 rho m1")
    elif not (Bj.contains_array(np.array([Bp.lo, Bp.hi])).all()):
        degenerate = True
        notes.append("shrunk box is not inside the thin box")
    D: set = set()
    C: set = set()
    Ct: set = set()
    E1: set = set()
    E2: set = set()
    if Bp is not None:
        lo, hi = np.array(Bp.lo), np.array(Bp.hi)
        # sublattice points at sup-distance > m1 from the complement
        axes_pts = [np.arange(-((-(int(a) + m1)) // m1) * m1, int(b) - m1 + 1, m1) for a, b in zip(lo, hi)]
        if all(len(a) for a in axes_pts):
            grids = np.meshgrid(*axes_pts, indexing="ij")
            Dpts = np.stack([g.ravel() for g in grids], axis=1)
            D = set(map(tuple, Dpts.tolist()))
            for i in range(d):
                # lines through D along axis i: keep the other coordinates, sweep coordinate i
                others = np.unique(np.delete(Dpts, i, axis=1), axis=0)
                sweep = np.arange(lo[i], hi[i] + 1)
                for o in others.tolist():
                    for t in sweep.tolist():
                        C.add(tuple(o[:i] + [t] + o[i:]))
        if not D:
            degenerate = True
            notes.append("no sublattice point sits deep inside the shrunk box")
        bd = Bp
        on_bd = lambda p: any(c == a or c == b for a, c, b in zip(bd.lo, p, bd.hi))
        for v in C:
            for a in range(d):
                for s in (1, -1):
                    w = list(v)
                    w[a] += s
                    w = tuple(w)
                    e = EdgeId(v, a + 1) if s == 1 else EdgeId(w, a + 1)
                    if w in C:
                        Ct.add(e)
                    if w not in C or on_bd(w):
                        (E1 if on_bd(v) or on_bd(w) else E2).add(e)
    annulus = Annulus(Bm, Bp)
    return BoxGeometry(params, rho, S, R, Bj, Bp, Bm, frozenset(D), frozenset(C), frozenset(Ct),
                       frozenset(E1), frozenset(E2), annulus, degenerate, notes)


# ---------------------------------------------------------------- predicates

def check_Q(env: Environment, geom: BoxGeometry, c: float, gamma: float, M: float,
            variant: str = "Q", i: int = 0) -> bool:
    """Weight pattern on the scaffold edges.

    ``Q``: boundary-touching edges in [M, gamma M], other side edges >= M,
    remaining scaffold edges <= r + c.  ``Qtilde``: all side edges in
    [gamma^i M, gamma^(i+1) M), remaining scaffold edges <= r + c.
    """
    if geom.degenerate:
        raise ValueError("box geometry is degenerate")
    r = env.dist.r
    cheap = sorted(geom.Ctilde - geom.Etilde)
    wc = _weights_of(env, cheap)
    if np.any(wc > r + c):
        return False
    if variant == "Q":
        w1 = _weights_of(env, sorted(geom.Etilde1))
        w2 = _weights_of(env, sorted(geom.Etilde2))
        return bool(np.all((w1 >= M) & (w1 <= gamma * M)) and np.all(w2 >= M))
    if variant == "Qtilde":
        w = _weights_of(env, sorted(geom.Etilde))
        return bool(np.all((w >= gamma ** i * M) & (w < gamma ** (i + 1) * M)))
    raise ValueError(f"unknown variant {variant!r}")


def Q_probability(dist, geom: BoxGeometry, c: float, gamma: float, M: float,
                  variant: str = "Q", i: int = 0) -> float:
    """Exact probability of the Q pattern under i.i.d. weights (product over edges)."""
    r = dist.r
    p_cheap = float(dist.cdf(r + c))
    n_cheap = len(geom.Ctilde - geom.Etilde)
    if variant == "Q":
        p1 = dist.prob(IntervalSet.closed(M, gamma * M))
        p2 = float(dist.tail(M))
        return p_cheap ** n_cheap * p1 ** len(geom.Etilde1) * p2 ** len(geom.Etilde2)
    p = dist.prob(IntervalSet.half_open(gamma ** i * M, gamma ** (i + 1) * M))
    return p_cheap ** n_cheap * p ** len(geom.Etilde)


def _weights_of(env: Environment, edges) -> np.ndarray:
    if not edges:
        return np.zeros(0)
    bases = np.array([e.base for e in edges], dtype=np.int64)
    axes = np.array([e.axis - 1 for e in edges], dtype=np.int64)
    return env.weights(bases, axes)


def is_x_good(env: Environment, x: Sequence[int], params: BoxParams, M: float,
              band: tuple[float, float] | None = None, path: PathRec | None = None) -> bool:
    """Whether the selected geodesic to x has a heavy edge with both ends in the thin box."""
    if path is None:
        path = geodesic(env, (0,) * env.d, x).geodesic
    Bj = thin_box(params.l, params.j, params.m)
    bases, axes = path.edge_arrays()
    if len(axes) == 0:
        return False
    heads = bases.copy()
    heads[np.arange(len(axes)), axes] += 1
    inside = Bj.contains_array(bases) & Bj.contains_array(heads)
    w = env.weights(bases[inside], axes[inside])
    if band is None:
        return bool(np.any(w >= M))
    lo, hi = band
    return bool(np.any((w >= lo) & (w <= hi)))


# --------------------------------------------------------- crossings of paths

def box_crossings(path: PathRec, m: int) -> set[tuple[Point, int]]:
    """Canonical labels (l, +k) of thin boxes that some maximal run of the path crosses along k."""
    verts = np.array(path.vertices, dtype=np.int64)
    d = verts.shape[1]
    cubes = np.floor_divide(verts, m)
    candidates: set[tuple[Point, int]] = set()
    for c in {tuple(x) for x in cubes.tolist()}:
        for k in range(d):
            base = list(c)
            base[k] -= 1
            for off in np.ndindex(*([3] * (d - 1))):
                l = list(base)
                oi = 0
                for i in range(d):
                    if i != k:
                        l[i] += off[oi] - 1
                        oi += 1
                candidates.add((tuple(l), k + 1))
    out = set()
    for l, j in candidates:
        B = thin_box(l, j, m)
        k = j - 1
        inside = B.contains_array(verts)
        lo_hit = verts[:, k] == B.lo[k]
        hi_hit = verts[:, k] == B.hi[k]
        # split into maximal runs of consecutive inside vertices
        run_lo = run_hi = False
        for t in range(len(verts) + 1):
            if t < len(verts) and inside[t]:
                run_lo |= bool(lo_hit[t])
                run_hi |= bool(hi_hit[t])
                continue
            if run_lo and run_hi:
                out.add((l, j))
                break
            run_lo = run_hi = False
    return out


def visited_cubes(path: PathRec, m: int) -> set[Point]:
    return {tuple(int(c) // m for c in v) for v in path.vertices}
