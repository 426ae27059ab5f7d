"""Integer lattice primitives: points, nearest-neighbour edges, boxes and norms.

Points are plain tuples of ints.  An edge is stored as ``EdgeId(base, axis)``
with ``axis`` in ``1..d`` and joins ``base`` to ``base + e_axis``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

Point = tuple


def point(coords: Iterable[int]) -> Point:
    p = tuple(int(c) for c in coords)
    if not p:
        raise ValueError("a point needs at least one coordinate")
    return p


def l1(p: Sequence[int], q: Sequence[int] | None = None) -> int:
    if q is None:
        return sum(abs(a) for a in p)
    return sum(abs(a - b) for a, b in zip(p, q))


def linf(p: Sequence[int], q: Sequence[int] | None = None) -> int:
    if q is None:
        return max(abs(a) for a in p)
    return max(abs(a - b) for a, b in zip(p, q))


def unit(d: int, axis: int, sign: int = 1) -> Point:
    """``sign * e_axis`` in dimension ``d`` (axis is 1-based)."""
    return tuple(sign if i == axis - 1 else 0 for i in range(d))


def add(p: Sequence[int], q: Sequence[int]) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def sub(p: Sequence[int], q: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def scale(c: int, p: Sequence[int]) -> Point:
    return tuple(c * a for a in p)


class EdgeId(NamedTuple):
    base: Point
    axis: int

    @property
    def head(self) -> Point:
        return tuple(c + (1 if i == self.axis - 1 else 0) for i, c in enumerate(self.base))

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return self.base, self.head

    @property
    def low(self) -> Point:
        """Endpoint with the smaller l1 norm (ties go to the base)."""
        h = self.head
        return h if l1(h) < l1(self.base) else self.base

    def to_json(self) -> dict:
        return {"base": list(self.base), "axis": self.axis}


def edge(u: Sequence[int], v: Sequence[int]) -> EdgeId:
    """Canonical id of the nearest-neighbour edge {u, v}."""
    u, v = point(u), point(v)
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    diff = [b - a for a, b in zip(u, v)]
    nz = [i for i, c in enumerate(diff) if c != 0]
    if len(nz) != 1 or abs(diff[nz[0]]) != 1:
        raise ValueError(f"{u} and {v} are not nearest neighbours")
    i = nz[0]
    return EdgeId(u if diff[i] == 1 else v, i + 1)


def edge_low(e: EdgeId) -> Point:
    return e.low


def neighbors(p: Sequence[int]) -> list[Point]:
    """The 2d nearest neighbours of p in lexicographic order."""
    p = tuple(p)
    out = []
    for i in range(len(p)):
        for s in (-1, 1):
            q = list(p)
            q[i] += s
            out.append(tuple(q))
    out.sort()
    return out


def linf_neighbors(p: Sequence[int]) -> list[Point]:
    """The 3^d - 1 neighbours of p in the l-infinity adjacency graph."""
    p = tuple(p)
    out = []
    for off in product((-1, 0, 1), repeat=len(p)):
        if any(off):
            out.append(tuple(a + b for a, b in zip(p, off)))
    return out


@dataclass(frozen=True)
class LatticeBox:
    """Axis-aligned box ``{v : lo_i <= v_i <= hi_i}`` (inclusive corners)."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", point(self.lo))
        object.__setattr__(self, "hi", point(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("dimension mismatch")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    def __len__(self) -> int:
        return int(np.prod(self.shape))

    def __contains__(self, p) -> bool:
        return len(p) == self.d and all(a <= c <= b for a, c, b in zip(self.lo, p, self.hi))

    def contains_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts)
        return np.all((pts >= np.array(self.lo)) & (pts <= np.array(self.hi)), axis=-1)

    def on_boundary(self, p) -> bool:
        return p in self and any(c == a or c == b for a, c, b in zip(self.lo, p, self.hi))

    def grow(self, r: int) -> "LatticeBox":
        return LatticeBox(tuple(a - r for a in self.lo), tuple(b + r for b in self.hi))

    def points_array(self) -> np.ndarray:
        """All points as an (N, d) int64 array in lexicographic order."""
        axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(self.lo, self.hi)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def points(self) -> Iterator[Point]:
        return product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def index(self, p: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(c - a for c, a in zip(p, self.lo)), self.shape))

    def index_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.int64) - np.array(self.lo, dtype=np.int64)
        return np.ravel_multi_index(tuple(pts.T), self.shape)

    def point_of(self, idx: int) -> Point:
        return tuple(int(c) + a for c, a in zip(np.unravel_index(idx, self.shape), self.lo))

    def intersect(self, other: "LatticeBox") -> "LatticeBox | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return LatticeBox(lo, hi)


def box_around(x: Sequence[int], y: Sequence[int], padding: float = 1.0) -> LatticeBox:
    """Bounding box of x and y grown by ceil(padding * |x - y|_1) (at least 1)."""
    if padding < 0:
        raise ValueError("padding must be non-negative")
    x, y = point(x), point(y)
    r = max(1, int(np.ceil(padding * l1(x, y))))
    lo = tuple(min(a, b) - r for a, b in zip(x, y))
    hi = tuple(max(a, b) + r for a, b in zip(x, y))
    return LatticeBox(lo, hi)


def axis_edge_arrays(box: LatticeBox, axis: int) -> np.ndarray:
    """Bases of all axis-``axis`` edges (0-based axis) with both ends in box, lexicographic."""
    hi = list(box.hi)
    hi[axis] -= 1
    if hi[axis] < box.lo[axis]:
        return np.zeros((0, box.d), dtype=np.int64)
    return LatticeBox(box.lo, tuple(hi)).points_array()


def edges_in_box(box: LatticeBox) -> list[EdgeId]:
    """All edges with both endpoints in box, ordered by base then axis."""
    bases, axes = box_edges(box)
    return [EdgeId(tuple(int(c) for c in b), int(a) + 1) for b, a in zip(bases, axes)]


def box_edges(box: LatticeBox) -> tuple[np.ndarray, np.ndarray]:
    """Edge arrays ``(bases (E, d), axes (E,) 0-based)`` sorted by base then axis."""
    parts, axs = [], []
    for a in range(box.d):
        b = axis_edge_arrays(box, a)
        parts.append(b)
        axs.append(np.full(len(b), a, dtype=np.int64))
    bases = np.concatenate(parts)
    axes = np.concatenate(axs)
    order = np.lexsort((axes,) + tuple(bases[:, i] for i in reversed(range(box.d))))
    return bases[order], axes[order]
