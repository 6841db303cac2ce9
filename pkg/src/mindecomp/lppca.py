"""Complex Lp-norm PCA.

Maximizes ``F_p(W) = sum_ij |w_j^dag x_i|^p`` over ``d x m`` matrices with
orthonormal columns by alternating a gradient evaluation with the Procrustes
projection onto the Stiefel manifold. Every step is an ascent step because
``F_p`` is convex for ``p > 1``.

The array routines broadcast over leading axes, so a stack of independent
problems can be advanced in lockstep.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 500


class StationaryPoint(ArithmeticError):
    """Raised when the gradient vanishes and the projection is undefined."""


@dataclass
class LppcaResult:
    W: np.ndarray
    objective: float
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _dag(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _check_shapes(W: np.ndarray, X: np.ndarray):
    if W.shape[-2] != X.shape[-2]:
        raise ValueError(f"W has {W.shape[-2]} rows but X has {X.shape[-2]}")
    if W.shape[-1] > W.shape[-2]:
        raise ValueError("W cannot have more columns than rows")


def fp_objective(W, X, p: float):
    """``||W^dag X||_p^p``; an array over any leading batch axes."""
    W = np.asarray(W, dtype=complex)
    X = np.asarray(X, dtype=complex)
    _check_shapes(W, X)
    y = np.abs(_dag(W) @ X)
    out = np.sum(y**p, axis=(-2, -1))
    return float(out) if out.ndim == 0 else out


def lppca_gradient(W, X, p: float, rescale: bool = False) -> np.ndarray:
    """Wirtinger gradient ``dF_p/dW*``.

    Column k is ``(p/2) sum_i |w_k^dag x_i|^(p-2) conj(w_k^dag x_i) x_i``.
    With ``rescale`` the weights are divided by their largest modulus raised to
    ``p - 2`` (a positive factor per problem) to keep large ``p`` away from
    underflow; the Procrustes step is invariant to that factor.
    """
    W = np.asarray(W, dtype=complex)
    X = np.asarray(X, dtype=complex)
    _check_shapes(W, X)
    y = _dag(W) @ X
    mod = np.abs(y)
    if rescale:
        scale = np.max(mod, axis=(-2, -1), keepdims=True)
        scale = np.where(scale > 0, scale, 1.0)
        mod = mod / scale
    weights = mod ** (p - 2) * np.conj(y)
    return (p / 2.0) * (X @ np.swapaxes(weights, -1, -2))


def procrustes_step(G) -> np.ndarray:
    """Orthonormal-column matrix maximizing ``Re tr(Q^dag G)``: ``U V^dag`` from the thin SVD."""
    G = np.asarray(G, dtype=complex)
    if not np.all(np.any(np.abs(G) > 0, axis=(-2, -1))):
        raise StationaryPoint("zero gradient")
    u, _, vh = np.linalg.svd(G, full_matrices=False)
    return u @ vh


def spectral_solution(X, m: int) -> np.ndarray:
    """Global maximizer for ``p = 2``: the top-m eigenvectors of ``X X^dag``."""
    X = np.asarray(X, dtype=complex)
    _, vecs = np.linalg.eigh(X @ X.conj().T)
    return vecs[:, ::-1][:, :m]


def random_stiefel(d: int, m: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def lppca_maximize(
    X,
    m: int,
    p: float,
    W0=None,
    *,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> LppcaResult:
    """Run the gradient/Procrustes ascent from ``W0`` (random if omitted).

    Stops when the objective gain falls below ``tol`` relative to the current
    objective, or after ``max_iters`` steps. ``p == 2`` is solved spectrally.
    """
    X = np.asarray(X, dtype=complex)
    d = X.shape[0]
    if not 1 <= m <= d:
        raise ValueError(f"m={m} must lie in [1, {d}]")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    rng = np.random.default_rng() if rng is None else rng
    if p == 2:
        W = spectral_solution(X, m)
        f = fp_objective(W, X, 2)
        return LppcaResult(W, f, [f], 0, True)

    W = random_stiefel(d, m, rng) if W0 is None else np.asarray(W0, dtype=complex)
    if np.max(np.abs(W.conj().T @ W - np.eye(m))) > 1e-8:
        raise ValueError("W0 must have orthonormal columns")
    f = fp_objective(W, X, p)
    trace = [f]
    converged = False
    it = 0
    while it < max_iters:
        try:
            W_new = procrustes_step(lppca_gradient(W, X, p, rescale=True))
        except StationaryPoint:
            W = random_stiefel(d, m, rng)
            f = fp_objective(W, X, p)
            trace.append(f)
            it += 1
            continue
        f_new = fp_objective(W_new, X, p)
        it += 1
        if f_new < f:
            # rounding-level loss at a fixed point; keep the better iterate
            converged = True
            break
        gain = f_new - f
        W, f = W_new, f_new
        trace.append(f)
        if gain <= tol * f:
            converged = True
            break
    return LppcaResult(W, f, trace, it, converged)
