"""Decomposition (Renyi) entropy of a state's computational-basis weights.

All logarithms are natural. ``q`` may be ``math.inf``.
"""
from __future__ import annotations

import math

import numpy as np

from .states import State

DEFAULT_SUPPORT_TOL = 1e-8


def _weights(state_or_probs) -> np.ndarray:
    if isinstance(state_or_probs, State):
        return state_or_probs.probabilities
    return np.asarray(state_or_probs, dtype=float).reshape(-1)


def power_sum(probs: np.ndarray, q: float) -> float:
    """Compensated sum of ``p**q`` over the nonzero weights."""
    p = probs[probs > 0]
    return math.fsum(np.exp(q * np.log(p)))


def renyi_entropy(state, q: float, support_tol: float = DEFAULT_SUPPORT_TOL) -> float:
    """Renyi entropy ``S_q`` of the weights ``|c|^2`` of ``state``.

    Parameters
    ----------
    state : State or array_like
        A state, or directly a probability vector.
    q : float
        Order, ``q >= 0``; ``math.inf`` selects the min-entropy.
    support_tol : float
        Amplitude threshold used only for ``q = 0``.
    """
    if q < 0 or math.isnan(q):
        raise ValueError(f"q must be non-negative, got {q}")
    p = _weights(state)
    if q == 0:
        return math.log(support(state, support_tol))
    if q == 1:
        nz = p[p > 0]
        return -math.fsum(nz * np.log(nz))
    if math.isinf(q):
        return -math.log(float(p.max()))
    return math.log(power_sum(p, q)) / (1.0 - q)


def ipr(state, q: float) -> float:
    """Inverse participation ratio ``sum p**q`` for ``q > 1``."""
    if not q > 1:
        raise ValueError(f"IPR is defined here for q > 1, got {q}")
    return power_sum(_weights(state), q)


def support(state, tol: float = DEFAULT_SUPPORT_TOL) -> int:
    """Number of amplitudes with modulus above ``tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if isinstance(state, State):
        mods = np.abs(state.amplitudes)
    else:
        mods = np.sqrt(_weights(state))
    return int(np.count_nonzero(mods > tol))


def ame_lower_bound(n: int, d: int) -> float:
    """``floor(n/2) * ln d``, the smallest entropy any AME(n, d) state can have."""
    return (n // 2) * math.log(d)


def support_upper_bound(n: int, d: int) -> float:
    """``ln(d**n - n d (d-1) / 2)``, an upper bound on every minimal entropy."""
    r_max = d**n - n * d * (d - 1) // 2
    if r_max <= 0:
        raise ValueError(f"non-positive maximal support for n={n}, d={d}")
    return math.log(r_max)


def max_entropy(n: int, d: int) -> float:
    return n * math.log(d)
