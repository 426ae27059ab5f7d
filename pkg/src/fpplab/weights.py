"""Edge-weight laws, seeded lazy environments, k-dependent Bernoulli fields.

An :class:`Environment` never stores weights.  The weight of an edge is the
quantile transform of a uniform obtained by hashing ``(seed, axis, base)``,
so any edge can be queried at any time, in any order, from any process.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import constants
from .hashing import STREAM_KDEP, STREAM_RESAMPLE, STREAM_WEIGHT, hash64, uniform01
from .intervals import IntervalSet
from .lattice import EdgeId, LatticeBox, box_edges, point

KINDS = ("atoms", "bernoulli_shift", "exponential", "pareto", "uniform")


@dataclass(frozen=True)
class DistributionSpec:
    """A weight law on [0, inf).

    ``params`` by kind: atoms ``((value, prob), ...)``; bernoulli_shift
    ``(a, b, p)`` with P(a) = 1 - p, P(b) = p; exponential ``(rate,)``;
    pareto ``(alpha, xmin)``; uniform ``(a, b)``.
    """

    kind: str
    params: tuple

    def __post_init__(self) -> None:
        k, p = self.kind, self.params
        if k not in KINDS:
            raise ValueError(f"unknown distribution kind {k!r}")
        if k == "atoms":
            merged: dict[float, float] = {}
            for v, q in p:
                v, q = float(v), float(q)
                if v < 0 or q < 0:
                    raise ValueError("atoms need non-negative values and probabilities")
                merged[v] = merged.get(v, 0.0) + q
            if abs(sum(merged.values()) - 1.0) > 1e-9:
                raise ValueError("atom probabilities must sum to 1")
            object.__setattr__(self, "params", tuple((v, merged[v]) for v in sorted(merged) if merged[v] > 0))
        elif k == "bernoulli_shift":
            a, b, q = (float(x) for x in p)
            if a < 0 or b < 0 or not 0 <= q <= 1:
                raise ValueError("bernoulli_shift needs a, b >= 0 and p in [0, 1]")
            object.__setattr__(self, "params", (a, b, q))
        elif k == "exponential":
            (lam,) = (float(x) for x in p)
            if lam <= 0:
                raise ValueError("exponential rate must be positive")
            object.__setattr__(self, "params", (lam,))
        elif k == "pareto":
            alpha, xmin = (float(x) for x in p)
            if alpha <= 0 or xmin <= 0:
                raise ValueError("pareto needs alpha > 0 and xmin > 0")
            object.__setattr__(self, "params", (alpha, xmin))
        else:
            a, b = (float(x) for x in p)
            if not 0 <= a < b:
                raise ValueError("uniform needs 0 <= a < b")
            object.__setattr__(self, "params", (a, b))

    # constructors
    @classmethod
    def exponential(cls, rate: float = 1.0) -> "DistributionSpec":
        return cls("exponential", (rate,))

    @classmethod
    def pareto(cls, alpha: float, xmin: float = 1.0) -> "DistributionSpec":
        return cls("pareto", (alpha, xmin))

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> "DistributionSpec":
        return cls("uniform", (a, b))

    @classmethod
    def atoms(cls, pairs: Iterable[tuple[float, float]]) -> "DistributionSpec":
        return cls("atoms", tuple(tuple(x) for x in pairs))

    @classmethod
    def bernoulli_shift(cls, a: float, b: float, p: float) -> "DistributionSpec":
        return cls("bernoulli_shift", (a, b, p))

    @classmethod
    def point_mass(cls, value: float) -> "DistributionSpec":
        return cls("atoms", ((value, 1.0),))

    # atom view shared by the two discrete kinds
    def _atom_table(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "bernoulli_shift":
            a, b, q = self.params
            probs: dict[float, float] = {}
            probs[a] = probs.get(a, 0.0) + 1 - q
            probs[b] = probs.get(b, 0.0) + q
            pairs = [(v, probs[v]) for v in sorted(probs) if probs[v] > 0]
        else:
            pairs = list(self.params)
        vals = np.array([v for v, _ in pairs])
        return vals, np.cumsum([q for _, q in pairs])

    @property
    def discrete(self) -> bool:
        return self.kind in ("atoms", "bernoulli_shift")

    @property
    def r(self) -> float:
        """Essential infimum of the law."""
        if self.discrete:
            return float(self._atom_table()[0][0])
        if self.kind == "exponential":
            return 0.0
        if self.kind == "pareto":
            return self.params[1]
        return self.params[0]

    def cdf(self, t):
        """P(tau <= t)."""
        t = np.asarray(t, dtype=np.float64)
        if self.discrete:
            vals, cum = self._atom_table()
            i = np.searchsorted(vals, t, side="right")
            out = np.where(i > 0, cum[np.maximum(i - 1, 0)], 0.0)
        elif self.kind == "exponential":
            out = np.where(t > 0, -np.expm1(-self.params[0] * np.maximum(t, 0)), 0.0)
        elif self.kind == "pareto":
            alpha, xmin = self.params
            out = np.where(t >= xmin, 1.0 - (xmin / np.maximum(t, xmin)) ** alpha, 0.0)
        else:
            a, b = self.params
            out = np.clip((t - a) / (b - a), 0.0, 1.0)
        out = np.minimum(out, 1.0)
        return float(out) if out.ndim == 0 else out

    def cdf_left(self, t):
        """P(tau < t)."""
        if not self.discrete:
            return self.cdf(t)
        t = np.asarray(t, dtype=np.float64)
        vals, cum = self._atom_table()
        i = np.searchsorted(vals, t, side="left")
        out = np.minimum(np.where(i > 0, cum[np.maximum(i - 1, 0)], 0.0), 1.0)
        return float(out) if out.ndim == 0 else out

    def tail(self, t):
        """P(tau >= t)."""
        if self.kind == "exponential":
            t = np.asarray(t, dtype=np.float64)
            out = np.exp(-self.params[0] * np.maximum(t, 0.0))
            return float(out) if out.ndim == 0 else out
        if self.kind == "pareto":
            alpha, xmin = self.params
            t = np.asarray(t, dtype=np.float64)
            out = np.where(t > xmin, (xmin / np.maximum(t, xmin)) ** alpha, 1.0)
            return float(out) if out.ndim == 0 else out
        out = 1.0 - np.asarray(self.cdf_left(t))
        return float(out) if out.ndim == 0 else out

    def quantile(self, u):
        """inf{t : F(t) >= u} for u in [0, 1]."""
        u = np.asarray(u, dtype=np.float64)
        if np.any((u < 0) | (u > 1)) or np.any(np.isnan(u)):
            raise ValueError("quantile argument must lie in [0, 1]")
        if self.discrete:
            vals, cum = self._atom_table()
            cum = cum.copy()
            cum[-1] = 1.0
            i = np.searchsorted(cum, u, side="left")
            out = vals[np.minimum(i, len(vals) - 1)]
        elif self.kind == "exponential":
            with np.errstate(divide="ignore"):
                out = -np.log1p(-u) / self.params[0]
        elif self.kind == "pareto":
            alpha, xmin = self.params
            with np.errstate(divide="ignore"):
                out = xmin * (1.0 - u) ** (-1.0 / alpha)
        else:
            a, b = self.params
            out = a + u * (b - a)
        return float(out) if out.ndim == 0 else out

    def tail_quantile(self, q: float) -> float:
        """Smallest t with P(tau > t) <= q; accurate for tiny q."""
        if not 0 <= q <= 1:
            raise ValueError("tail probability must lie in [0, 1]")
        if self.kind == "exponential":
            return math.inf if q == 0 else max(0.0, -math.log(q) / self.params[0])
        if self.kind == "pareto":
            alpha, xmin = self.params
            return math.inf if q == 0 else max(xmin, xmin * q ** (-1.0 / alpha))
        return float(self.quantile(1.0 - q))

    def prob(self, B: IntervalSet) -> float:
        """mu(B)."""
        total = 0.0
        for a, b, lc, rc in B.pieces:
            upper = 1.0 if b == math.inf else (self.cdf(b) if rc else self.cdf_left(b))
            lower = 0.0 if a == -math.inf else (self.cdf_left(a) if lc else self.cdf(a))
            total += max(0.0, upper - lower)
        return min(1.0, total)

    def to_json(self) -> dict:
        if self.kind == "atoms":
            return {"kind": "atoms", "params": [list(x) for x in self.params]}
        return {"kind": self.kind, "params": list(self.params)}

    def __str__(self) -> str:
        if self.kind == "atoms":
            return "atoms(" + ",".join(f"({_num(v)},{_num(q)})" for v, q in self.params) + ")"
        return f"{self.kind}(" + ",".join(_num(x) for x in self.params) + ")"

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse ``kind(args)``, e.g. ``exponential(1)`` or ``atoms((1,0.5),(10,0.5))``."""
        m = re.fullmatch(r"\s*([a-z_]+)\s*\((.*)\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse distribution {text!r}")
        kind, body = m.group(1), m.group(2)
        if kind not in KINDS:
            raise ValueError(f"unknown distribution kind {kind!r}")
        try:
            if kind == "atoms":
                pairs = re.findall(r"\(\s*([^(),]+)\s*,\s*([^(),]+)\s*\)", body)
                if not pairs or re.sub(r"\(\s*[^(),]+\s*,\s*[^(),]+\s*\)", "", body).strip(" ,"):
                    raise ValueError("atoms needs a list of (value, prob) pairs")
                return cls.atoms((float(a), float(b)) for a, b in pairs)
            args = tuple(float(x) for x in body.split(",")) if body.strip() else ()
        except ValueError as exc:
            raise ValueError(f"bad arguments in {text!r}: {exc}") from None
        arity = {"bernoulli_shift": 3, "exponential": 1, "pareto": 2, "uniform": 2}[kind]
        if len(args) != arity:
            raise ValueError(f"{kind} takes {arity} arguments, got {len(args)}")
        return cls(kind, args)


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def dist_eval(dist: DistributionSpec, mode: str, arg: float) -> float:
    """Evaluate the law: ``cdf`` is F(t), ``tail`` is mu[t, inf), ``quantile`` the left inverse."""
    if mode == "cdf":
        return float(dist.cdf(arg))
    if mode == "tail":
        return float(dist.tail(arg))
    if mode == "quantile":
        return float(dist.quantile(arg))
    raise ValueError(f"unknown mode {mode!r}")


def check_useful(dist: DistributionSpec, d: int) -> bool:
    """Whether F(r) lies below the relevant critical probability."""
    r = dist.r
    mass = float(dist.cdf(r))
    if r == 0:
        return mass < constants.p_c(d)
    return mass < constants.p_c_oriented(d)


# ---------------------------------------------------------------- environments

def _edge_codes(bases: np.ndarray, axes: np.ndarray) -> np.ndarray:
    return hash64(0x5EED, axes, *bases.T)


@dataclass(frozen=True)
class Environment:
    """Lazy i.i.d. weight field on the edges of Z^d.

    ``overrides`` pins individual weights; ``layers`` holds resampling
    rounds ``(seed2, edges)``, applied in order, later ones on top.
    """

    seed: int
    dist: DistributionSpec
    d: int = 2
    overrides: Mapping[EdgeId, float] = field(default_factory=dict)
    layers: tuple = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for e, w in dict(self.overrides).items():
            e = EdgeId(point(e[0]), int(e[1]))
            if len(e.base) != self.d or not 1 <= e.axis <= self.d:
                raise ValueError(f"override edge {e} does not live in dimension {self.d}")
            if w < 0 or math.isnan(w):
                raise ValueError("override weights must be non-negative")
            clean[e] = float(w)
        object.__setattr__(self, "overrides", clean)

    def with_overrides(self, mapping: Mapping[EdgeId, float]) -> "Environment":
        merged = dict(self.overrides)
        merged.update(mapping)
        return Environment(self.seed, self.dist, self.d, merged, self.layers)

    def weight(self, e: EdgeId) -> float:
        base = np.array([e.base], dtype=np.int64)
        return float(self.weights(base, np.array([e.axis - 1]))[0])

    def weights(self, bases: np.ndarray, axes: np.ndarray) -> np.ndarray:
        """Weights of edges given as ``bases (E, d)`` and 0-based ``axes (E,)``."""
        bases = np.asarray(bases, dtype=np.int64).reshape(-1, self.d)
        axes = np.asarray(axes, dtype=np.int64).reshape(-1)
        if len(axes) == 0:
            return np.zeros(0)
        w = self.dist.quantile(uniform01(self.seed, STREAM_WEIGHT, axes, *bases.T))
        w = np.atleast_1d(w).astype(np.float64)
        if not self.layers and not self.overrides:
            return w
        codes = _edge_codes(bases, axes)
        for seed2, edges in self.layers:
            idx = _locate(codes, bases, axes, edges)
            if len(idx):
                fresh = self.dist.quantile(uniform01(seed2, STREAM_RESAMPLE, axes[idx], *bases[idx].T))
                w[idx] = fresh
        if self.overrides:
            items = list(self.overrides.items())
            idx = _locate(codes, bases, axes, [e for e, _ in items])
            if len(idx):
                vals = {e: v for e, v in items}
                for i in idx:
                    w[i] = vals[EdgeId(tuple(int(c) for c in bases[i]), int(axes[i]) + 1)]
        return w

    def box_weights(self, box: LatticeBox) -> list[np.ndarray]:
        """Per-axis weight grids: entry ``[a][v - lo]`` is the weight of edge (v, a)."""
        out = []
        for a in range(self.d):
            hi = list(box.hi)
            hi[a] -= 1
            shape = list(box.shape)
            shape[a] -= 1
            if shape[a] <= 0:
                out.append(np.zeros(shape))
                continue
            pts = LatticeBox(box.lo, tuple(hi)).points_array()
            out.append(self.weights(pts, np.full(len(pts), a)).reshape(shape))
        return out

    def to_json(self) -> dict:
        return {
            "seed": int(self.seed),
            "dist": self.dist.to_json(),
            "d": self.d,
            "overrides": [[e.to_json(), w] for e, w in sorted(self.overrides.items())],
            "layers": [[int(s), [e.to_json() for e in sorted(es)]] for s, es in self.layers],
        }


def _locate(codes: np.ndarray, bases: np.ndarray, axes: np.ndarray, edges) -> np.ndarray:
    """Indices of the queried edges that belong to ``edges``."""
    edges = list(edges)
    if not edges:
        return np.zeros(0, dtype=np.int64)
    d = bases.shape[1]
    eb = np.array([e.base for e in edges], dtype=np.int64).reshape(-1, d)
    ea = np.array([e.axis - 1 for e in edges], dtype=np.int64)
    ecodes = np.sort(_edge_codes(eb, ea))
    pos = np.searchsorted(ecodes, codes)
    pos = np.minimum(pos, len(ecodes) - 1)
    cand = np.nonzero(ecodes[pos] == codes)[0]
    if len(cand) == 0:
        return cand
    wanted = {(tuple(b), a) for b, a in zip(eb.tolist(), ea.tolist())}
    keep = [i for i in cand if (tuple(bases[i].tolist()), int(axes[i])) in wanted]
    return np.array(keep, dtype=np.int64)


def resample(env: Environment, edges: Iterable[EdgeId], seed2: int) -> Environment:
    """Copy of ``env`` with fresh draws, keyed by ``seed2``, on ``edges``."""
    es = frozenset(EdgeId(point(e[0]), int(e[1])) for e in edges)
    if not es:
        return env
    overrides = {e: w for e, w in env.overrides.items() if e not in es}
    return Environment(env.seed, env.dist, env.d, overrides, env.layers + ((int(seed2), es),))


def box_edge_weights(env: Environment, box: LatticeBox) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(bases, axes, weights)`` for all edges of box, ordered by base then axis."""
    bases, axes = box_edges(box)
    return bases, axes, env.weights(bases, axes)


# ------------------------------------------------------------ k-dependent field

@dataclass(frozen=True)
class KDependentField:
    """Bernoulli(p) edge field with range-k dependence.

    Z^d is cut into boxes ``k * b + [0, k)^d``; every edge whose low endpoint
    falls in block b reads the same uniform, so X_e = 1 iff U_b <= p.
    """

    seed: int
    k: int
    p: float
    d: int = 2

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")

    def values(self, bases: np.ndarray, axes: np.ndarray) -> np.ndarray:
        bases = np.asarray(bases, dtype=np.int64).reshape(-1, self.d)
        axes = np.asarray(axes, dtype=np.int64).reshape(-1)
        heads = bases.copy()
        heads[np.arange(len(axes)), axes] += 1
        low = np.where((np.abs(heads).sum(1) < np.abs(bases).sum(1))[:, None], heads, bases)
        blocks = np.floor_divide(low, self.k)
        u = uniform01(self.seed, STREAM_KDEP, *blocks.T)
        return (u <= self.p).astype(np.int64)

    def value(self, e: EdgeId) -> int:
        return int(self.values(np.array([e.base]), np.array([e.axis - 1]))[0])


def kdep_value(f: KDependentField, e: EdgeId) -> int:
    return f.value(e)
