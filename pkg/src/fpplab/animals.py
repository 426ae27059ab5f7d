"""Greedy lattice animals, their tail bounds, dependent Bernoulli bounds and box covers."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numba
import numpy as np

from .constants import animal_cover_constant
from .lattice import EdgeId, LatticeBox, Point, l1, neighbors, point
from .weights import Environment, KDependentField

EXACT_LIMIT = {2: 14, 3: 10}

Field = Union[KDependentField, Environment, Mapping]


def field_values(field: Field, bases: np.ndarray, axes: np.ndarray, d: int) -> np.ndarray:
    """0/1 values of a Bernoulli edge field on the given edges (0-based axes)."""
    if isinstance(field, KDependentField):
        return field.values(bases, axes)
    if isinstance(field, Environment):
        w = field.weights(bases, axes)
        if np.any((w != 0) & (w != 1)):
            raise ValueError("environment weights are not 0/1 valued")
        return w.astype(np.int64)
    out = np.zeros(len(axes), dtype=np.int64)
    for i, (b, a) in enumerate(zip(bases.tolist(), axes.tolist())):
        out[i] = int(field.get(EdgeId(tuple(b), a + 1), 0))
    return out


@dataclass(frozen=True)
class AnimalInstance:
    field: object
    n: int
    d: int = 2

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")


def _field_grid(inst: AnimalInstance) -> tuple[np.ndarray, np.ndarray, tuple, int]:
    n, d = inst.n, inst.d
    box = LatticeBox((-n - 1,) * d, (n + 1,) * d)
    shape = box.shape
    N = len(box)
    strides = np.array([int(np.prod(shape[a + 1:])) for a in range(d)], dtype=np.int64)
    vals = np.zeros((d, N), dtype=np.int64)
    idx = np.arange(N).reshape(shape)
    for a in range(d):
        hi = list(box.hi)
        hi[a] -= 1
        sub = LatticeBox(box.lo, tuple(hi))
        pts = sub.points_array()
        v = field_values(inst.field, pts, np.full(len(pts), a), d)
        sl = [slice(None)] * d
        sl[a] = slice(0, shape[a] - 1)
        vals[a, idx[tuple(sl)].ravel()] = v
    origin = box.index((0,) * d)
    return vals, strides, shape, origin


@numba.njit(cache=True)
def _dfs_max(vals, strides, n, origin, prune):
    d = strides.shape[0]
    N = vals.shape[1]
    visited = np.zeros(N, dtype=np.bool_)
    path = np.zeros(n + 1, dtype=np.int64)
    score = np.zeros(n + 1, dtype=np.int64)
    nextdir = np.zeros(n + 1, dtype=np.int64)
    best = 0
    depth = 0
    path[0] = origin
    visited[origin] = True
    while depth >= 0:
        if depth == n:
            if score[depth] > best:
                best = score[depth]
            visited[path[depth]] = False
            depth -= 1
            continue
        if best == n:
            break
        if prune and score[depth] + (n - depth) <= best:
            visited[path[depth]] = False
            depth -= 1
            continue
        k = nextdir[depth]
        if k == 2 * d:
            visited[path[depth]] = False
            depth -= 1
            continue
        nextdir[depth] = k + 1
        a = k // 2
        u = path[depth]
        if k % 2 == 0:
            w = u + strides[a]
            x = vals[a, u]
        else:
            w = u - strides[a]
            x = vals[a, w]
        if visited[w]:
            continue
        depth += 1
        path[depth] = w
        score[depth] = score[depth - 1] + x
        nextdir[depth] = 0
        visited[w] = True
    return best


def exact_Nn(inst: AnimalInstance, limit: int | None = None, prune: bool = True) -> int:
    """max over self-avoiding n-step paths from 0 of the summed field values."""
    lim = limit if limit is not None else EXACT_LIMIT.get(inst.d, 8)
    if inst.n > lim:
        raise ValueError(f"n={inst.n} exceeds the exact-solver limit {lim}")
    vals, strides, _, origin = _field_grid(inst)
    return int(_dfs_max(vals, strides, inst.n, origin, prune))


def animal_tail_threshold(d: int, k: int) -> float:
    """s below which the animal tail bound is vacuous."""
    return animal_cover_constant(d) * d * (k + 1) * math.log(3)


def animal_tail_bound(n: int, p: float, s: float, d: int, k: int = 0) -> float:
    """exp{-(n p^(1/d) / (k+1)) (s / C - d (k+1) log 3)} clipped to [0, 1]."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    C = animal_cover_constant(d)
    expo = (n * p ** (1.0 / d) / (k + 1)) * (s / C - d * (k + 1) * math.log(3))
    if expo <= 0:
        return 1.0
    return math.exp(-expo)


def _phi(y: float) -> float:
    return (1 + y) * math.log1p(y) - y


def kdep_bernoulli_bounds(n: int, p: float, m: int, t: float) -> tuple[float, float]:
    """Tail bounds on P(sum - np > t) for n Bernoulli(p) variables, each independent of all but m others."""
    if t <= 0 or m < 0:
        raise ValueError("need t > 0 and m >= 0")
    y = 4 * t / (5 * n * p)
    b_phi = math.exp(-(n * p / ((m + 1) * (1 - p))) * _phi(y))
    b_hoef = math.exp(-2 * t * t / ((m + 1) * n))
    return b_phi, b_hoef


def cover_connected(alpha: Iterable[Sequence[int]], l: int) -> list[Point]:
    """Points x_0..x_r with x_0 = 0, unit sup-norm steps and alpha inside the union of l x_i + B(2l)."""
    pts = {point(v) for v in alpha}
    if not pts:
        raise ValueError("alpha is empty")
    d = len(next(iter(pts)))
    origin = (0,) * d
    if origin not in pts:
        raise ValueError("alpha must contain the origin")
    n = len(pts)
    if not 1 <= l <= n:
        raise ValueError("l must lie in [1, #alpha]")
    # spanning tree by breadth-first search, children in lexicographic order
    children: dict[Point, list[Point]] = {origin: []}
    q = deque([origin])
    while q:
        u = q.popleft()
        for w in neighbors(u):
            if w in pts and w not in children:
                children[w] = []
                children[u].append(w)
                q.append(w)
    if len(children) != n:
        raise ValueError("alpha is not connected")
    # closed depth-first walk, unit steps, length 2(n - 1)
    walk = [origin]
    stack = [(origin, iter(children[origin]))]
    while stack:
        u, it = stack[-1]
        c = next(it, None)
        if c is None:
            stack.pop()
            if stack:
                walk.append(stack[-1][0])
        else:
            walk.append(c)
            stack.append((c, iter(children[c])))
    r = (2 * n) // l
    out = []
    for i in range(r + 1):
        v = walk[min(i * l, len(walk) - 1)]
        out.append(tuple(c // l for c in v))
    return out


def covered(alpha: Iterable[Sequence[int]], xs: Sequence[Sequence[int]], l: int) -> bool:
    """Whether every alpha vertex lies within sup-distance 2l of some l x_i."""
    centres = [tuple(l * c for c in x) for x in xs]
    return all(any(max(abs(a - b) for a, b in zip(v, c)) <= 2 * l for c in centres) for v in alpha)
