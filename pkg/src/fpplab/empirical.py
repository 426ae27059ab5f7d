"""Empirical edge-weight measures along paths and the Monte Carlo replica engine."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .geodesics import PathRec, path_weights
from .hashing import replica_seed
from .intervals import IntervalSet
from .weights import Environment


def truncation_length(trunc_k: int | None, d: int) -> int:
    """Number of edges cut from each end for truncation parameter k: (2k)^d."""
    if trunc_k is None:
        return 0
    if trunc_k < 1:
        raise ValueError("truncation parameter must be at least 1")
    return (2 * trunc_k) ** d


def _retained(w: np.ndarray, cut: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if len(w) < 1:
        raise ValueError("path has no edges")
    if cut == 0:
        return w
    if len(w) <= 2 * cut:
        raise ValueError(f"path of {len(w)} edges too short to drop {cut} edges at each end")
    return w[cut:len(w) - cut]


def weights_measure(w: Sequence[float], B: IntervalSet, cut: int = 0) -> float:
    """Fraction of the retained weights that fall in B."""
    kept = _retained(np.asarray(w), cut)
    return int(B.contains(kept).sum()) / len(kept)


def weights_count(w: Sequence[float], B: IntervalSet, cut: int = 0) -> int:
    return int(B.contains(_retained(np.asarray(w), cut)).sum())


def weights_moment(w: Sequence[float], ell: int, cut: int = 0) -> float:
    if ell < 1:
        raise ValueError("moment order must be a positive integer")
    kept = _retained(np.asarray(w), cut)
    return math.fsum((kept ** ell).tolist()) / len(kept)


def measure(env: Environment, p: PathRec, B: IntervalSet, trunc_k: int | None = None) -> float:
    """Empirical weight measure of B along p, optionally dropping (2k)^d edges at each end."""
    return weights_measure(path_weights(env, p), B, truncation_length(trunc_k, env.d))


def moment(env: Environment, p: PathRec, ell: int, trunc_k: int | None = None) -> float:
    return weights_moment(path_weights(env, p), ell, truncation_length(trunc_k, env.d))


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Weight histogram along one path; evaluates any IntervalSet."""

    weights: tuple

    @classmethod
    def along(cls, env: Environment, p: PathRec, trunc_k: int | None = None) -> "EmpiricalMeasure":
        kept = _retained(path_weights(env, p), truncation_length(trunc_k, env.d))
        return cls(tuple(kept.tolist()))

    @property
    def path_length(self) -> int:
        return len(self.weights)

    def hit_count(self, B: IntervalSet) -> int:
        return int(B.contains(self.weights).sum())

    def value(self, B: IntervalSet) -> float:
        return self.hit_count(B) / self.path_length


# ------------------------------------------------------------------ replicas

@dataclass(frozen=True)
class ReplicaRun:
    values: list          # results of successful replicas, in index order
    indices: list         # their replica indices
    failures: list        # (index, message) of failed replicas


def _guarded(fn: Callable[[int], Any], seed: int):
    try:
        return True, fn(seed)
    except Exception as exc:  # recorded, not raised
        return False, f"{type(exc).__name__}: {exc}"


def _task(args):
    fn, seed = args
    return _guarded(fn, seed)


def run_replicas(fn: Callable[[int], Any], replicas: int, master_seed: int, workers: int = 1) -> ReplicaRun:
    """Evaluate fn on replica seeds hash(master_seed, i), i = 0..replicas-1.

    Results come back in index order whatever the worker count, so any
    reduction over them is reproducible.
    """
    seeds = [replica_seed(master_seed, i) for i in range(replicas)]
    if workers <= 1 or replicas < 2:
        outs = [_guarded(fn, s) for s in seeds]
    else:
        chunk = max(1, replicas // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outs = list(ex.map(_task, [(fn, s) for s in seeds], chunksize=chunk))
    values, idx, fails = [], [], []
    for i, (ok, v) in enumerate(outs):
        if ok:
            values.append(v)
            idx.append(i)
        else:
            fails.append((i, v))
    return ReplicaRun(values, idx, fails)


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    values: list
    failures: int

    def __iter__(self):
        return iter((self.mean, self.stderr, self.values))


def mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error (unbiased variance), accumulated in index order."""
    v = [float(x) for x in values]
    n = len(v)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(v) / n
    if n < 2:
        return mean, math.nan
    var = math.fsum((x - mean) ** 2 for x in v) / (n - 1)
    return mean, math.sqrt(var / n)


def mc_mean(sampler: Callable[[int], float], replicas: int, master_seed: int, workers: int = 1) -> MCResult:
    if replicas < 2:
        raise ValueError("need at least two replicas")
    run = run_replicas(sampler, replicas, master_seed, workers)
    m, se = mean_stderr(run.values)
    return MCResult(m, se, [float(v) for v in run.values], len(run.failures))
