"""Counter-based random numbers: a splitmix64-style hash of integer keys.

Every random quantity in the package is a pure function of a seed and a tuple
of integer keys, so results never depend on evaluation order or worker count.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))

# stream tags keep unrelated draws apart
STREAM_WEIGHT = 0
STREAM_RESAMPLE = 1
STREAM_KDEP = 2
STREAM_REPLICA = 3
STREAM_AUX = 4


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _u64(k) -> np.ndarray:
    if isinstance(k, (int, np.integer)):
        return np.array([int(k) & MASK64], dtype=np.uint64)
    a = np.asarray(k)
    if a.dtype == np.uint64:
        return np.atleast_1d(a)
    return np.atleast_1d(a.astype(np.int64)).view(np.uint64)


def hash64(seed: int, *keys) -> np.ndarray:
    """Hash a seed and integer keys (scalars or broadcastable arrays) to uint64."""
    h = _mix(_u64(seed) + _GOLDEN)
    for k in keys:
        h = _mix((h ^ _u64(k)) + _GOLDEN)
    return h


def uniform01(seed: int, *keys) -> np.ndarray:
    """Uniform doubles in [0, 1) with 53 random bits."""
    return (hash64(seed, *keys) >> _S11).astype(np.float64) * (1.0 / 9007199254740992.0)


def replica_seed(master_seed: int, index: int) -> int:
    return int(hash64(master_seed, STREAM_REPLICA, index)[0])
