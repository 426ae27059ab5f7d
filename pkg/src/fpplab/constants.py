"""Numerical constants used across the package, with their provenance.

Critical probabilities are literature values for bond percolation.  The
combinatorial constants are derived here from their defining products.
"""
from __future__ import annotations

import hashlib
import json

# bond percolation on Z^d
P_C = {2: 0.5, 3: 0.2488126}
# oriented bond percolation (all steps in +e_i directions)
P_C_ORIENTED = {2: 0.6447001, 3: 0.382224}


class ConstantUnavailable(KeyError):
    pass


def p_c(d: int) -> float:
    try:
        return P_C[d]
    except KeyError:
        raise ConstantUnavailable(f"no bond percolation threshold stored for d={d}") from None


def p_c_oriented(d: int) -> float:
    try:
        return P_C_ORIENTED[d]
    except KeyError:
        raise ConstantUnavailable(f"no oriented percolation threshold stored for d={d}") from None


def animal_cover_constant(d: int) -> int:
    """Constant in the greedy-animal tail bound.

    A lattice animal with n edges is covered by r + 1 <= 5 n p^(1/d) boxes
    l x_i + B(2l); each box is hit by at most 2d (4l + 1)^d edges and
    l = ceil(p^(-1/d)) <= 2 p^(-1/d), so
    (r + 1) * 2d * (4l + 1)^d <= 5 n p^(1/d) * 2d * (9 p^(-1/d))^d
    = 10 d 9^d * n p^(1/d) * p^(-1).  The constant is 10 d 9^d.
    """
    return 10 * d * 9 ** d


def max_direction_steps(d: int) -> int:
    """Upper bound on the number of segments of a directed path."""
    return 1609 + 104 ** (d - 1)


def barrier_length_constant(d: int) -> int:
    return 13 * max_direction_steps(d) + 10


def table() -> dict:
    return {
        "p_c": {str(k): v for k, v in P_C.items()},
        "p_c_oriented": {str(k): v for k, v in P_C_ORIENTED.items()},
        "animal_cover_constant": {str(d): animal_cover_constant(d) for d in (2, 3)},
        "max_direction_steps": {str(d): max_direction_steps(d) for d in (2, 3)},
        "barrier_length_constant": {str(d): barrier_length_constant(d) for d in (2, 3)},
    }


def constants_hash() -> str:
    blob = json.dumps(table(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
