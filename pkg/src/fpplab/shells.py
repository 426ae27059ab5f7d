"""Sup-norm shells around an edge, shell-restricted passage times, large edges."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .lattice import EdgeId, linf
from .weights import DistributionSpec, Environment


@lru_cache(maxsize=None)
def _shell_offsets(d: int, h: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertex offsets of the radius-h sup-norm sphere and its internal edges (base offsets, axes)."""
    verts = [v for v in product(range(-h, h + 1), repeat=d) if max(abs(c) for c in v) == h]
    vs = set(verts)
    bases, axes = [], []
    for v in verts:
        for a in range(d):
            w = list(v)
            w[a] += 1
            if tuple(w) in vs:
                bases.append(v)
                axes.append(a)
    return (np.array(verts, dtype=np.int64).reshape(-1, d),
            np.array(bases, dtype=np.int64).reshape(-1, d),
            np.array(axes, dtype=np.int64))


@dataclass(frozen=True)
class ShellSpec:
    e: EdgeId
    h: int
    vertices: tuple
    edges: tuple

    @property
    def center(self):
        return self.e.low


def shell(e: EdgeId, h: int) -> ShellSpec:
    """Vertices at sup-distance h from the low endpoint of e, with the edges they span."""
    if h < 0:
        raise ValueError("shell radius must be non-negative")
    if h == 0:
        return ShellSpec(e, 0, tuple(sorted(e.endpoints)), (e,))
    c = np.array(e.low, dtype=np.int64)
    vo, bo, ax = _shell_offsets(len(e.base), h)
    verts = tuple(tuple(int(x) for x in v) for v in vo + c)
    edges = tuple(EdgeId(tuple(int(x) for x in b), int(a) + 1) for b, a in zip(bo + c, ax))
    return ShellSpec(e, h, verts, edges)


def shell_edge_count(d: int, h: int) -> int:
    return 1 if h == 0 else len(_shell_offsets(d, h)[2])


def shell_vertex_count(d: int, h: int) -> int:
    return 2 if h == 0 else len(_shell_offsets(d, h)[0])


def encloses(e: EdgeId, h: int, z) -> bool:
    return linf(e.low, z) <= h


def restricted_passage_max(env: Environment, e: EdgeId, h: int) -> float:
    """Largest passage time between two shell vertices using shell edges only."""
    if h == 0:
        return env.weight(e)
    c = np.array(e.low, dtype=np.int64)
    vo, bo, ax = _shell_offsets(env.d, h)
    w = env.weights(bo + c, ax)
    index = {tuple(v): i for i, v in enumerate(vo.tolist())}
    u = np.array([index[tuple(b)] for b in bo.tolist()])
    heads = bo.copy()
    heads[np.arange(len(ax)), ax] += 1
    v = np.array([index[tuple(b)] for b in heads.tolist()])
    n = len(vo)
    g = csr_matrix((np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(n, n))
    dist = dijkstra(g, directed=True)
    finite = dist[np.isfinite(dist)]
    return float(finite.max())


def is_kM_large(env: Environment, e: EdgeId, k: int, M: float) -> bool:
    if k < 0 or M <= 0:
        raise ValueError("need k >= 0 and M > 0")
    return all(restricted_passage_max(env, e, h) >= M for h in range(k + 1))


def klarge_bound(dist: DistributionSpec, k: int, M: float, d: int, variant: str = "crude") -> float:
    """Upper bound on P(e is (k, M)-large).

    ``crude``: C^(dk) (10k)^(10kd) P(tau >= M/C)^(k(d-1)) with C the largest
    shell edge count up to radius k.  ``tight``: the same union bound with the
    actual number of vertex pairs and edge count of each shell, times the
    radius-0 factor P(tau >= M).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if variant == "crude":
        C = max(shell_edge_count(d, h) for h in range(1, k + 1))
        tail = float(dist.tail(M / C))
        if tail == 0.0:
            return 0.0
        logb = d * k * math.log(C) + 10 * k * d * math.log(10 * k) + k * (d - 1) * math.log(tail)
        return 1.0 if logb >= 0 else math.exp(logb)
    if variant == "tight":
        b = float(dist.tail(M))
        for h in range(1, k + 1):
            C = shell_edge_count(d, h)
            nv = shell_vertex_count(d, h)
            pairs = nv * (nv - 1) // 2
            b *= min(1.0, pairs * (C * float(dist.tail(M / C))) ** (d - 1))
        return min(1.0, b)
    raise ValueError(f"unknown variant {variant!r}")
