"""Minimal decomposition entropy ``S_q^min`` for finite ``q > 1``.

Maximizing ``||(u_1 x ... x u_N)|psi>||_{2q}^{2q}`` one party at a time: with
every other unitary fixed the problem for party ``i`` is a full-rank (m = d)
complex Lp-PCA with ``p = 2q`` on the ``d x d^(N-1)`` party matrix ``M_i``.
Parties are cycled in fixed order; restarts from Haar-random unitaries are
advanced together as one batch.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import renyi_entropy
from .lppca import _dag, fp_objective, lppca_gradient
from .states import State, apply_local, apply_local_unitaries, random_unitary

DEFAULT_SEED = 20240601


@dataclass
class MinEntropyConfig:
    q: float = 2.0
    restarts: int = 20
    sweep_tol: float = 1e-10
    max_sweeps: int = 10_000
    inner_tol: float = 1e-12
    inner_max_iters: int = 500
    rng_seed: int = DEFAULT_SEED
    include_identity: bool = True

    def __post_init__(self):
        if not self.q > 1 or math.isinf(self.q):
            raise ValueError(f"q must be finite and > 1, got {self.q}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RestartSummary:
    restart: int
    entropy: float
    sweeps: int
    converged: bool


@dataclass
class OptResult:
    entropy: float
    units: list[np.ndarray]
    optimized_state: State
    trace: list[float]
    restart_traces: list[RestartSummary] = field(default_factory=list)
    best_restart: int = 0
    config: MinEntropyConfig | None = None
    all_traces: list[list[float]] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "entropy": self.entropy,
            "q": None if self.config is None else self.config.q,
            "units": [
                [[[float(z.real), float(z.imag)] for z in row] for row in u] for u in self.units
            ],
            "trace": self.trace,
            "best_restart": self.best_restart,
            "restarts": [asdict(r) for r in self.restart_traces],
            "config": None if self.config is None else self.config.to_dict(),
        }


def party_matrix(state: State, i: int, units) -> np.ndarray:
    """``M_i``: every unitary but the i-th applied, party i on the rows."""
    n, d = state.n_parties, state.local_dim
    if not 0 <= i < n:
        raise ValueError(f"party {i} out of range")
    t = state.tensor
    for j, u in enumerate(units):
        if j != i:
            t = apply_local(t, np.asarray(u, dtype=complex), j)
    return np.moveaxis(t, i, 0).reshape(d, -1)


def _entropy_from_tensor(phi: np.ndarray, q: float) -> np.ndarray:
    """Renyi entropies of a batch of rotated states (batch on axis 0)."""
    p = np.abs(phi.reshape(phi.shape[0], -1)) ** 2
    return np.log(np.sum(p**q, axis=1)) / (1.0 - q)


def _inner_ascent(X, W, p, tol, max_iters):
    """Batched Lp-PCA ascent warm-started at ``W``; never returns a worse ``W``."""
    f = fp_objective(W, X, p)
    active = np.ones(X.shape[0], dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        G = lppca_gradient(W[idx], X[idx], p, rescale=True)
        u, _, vh = np.linalg.svd(G)
        W_new = u @ vh
        f_new = fp_objective(W_new, X[idx], p)
        better = f_new > f[idx]
        gain = np.where(better, f_new - f[idx], 0.0)
        upd = idx[better]
        W[upd] = W_new[better]
        f[upd] = f_new[better]
        active[idx[gain <= tol * f[idx]]] = False
    return W


def _optimize_batch(state: State, U: np.ndarray, config: MinEntropyConfig):
    """Alternating sweeps for a batch of seeds ``U`` of shape (B, N, d, d)."""
    n, d = state.n_parties, state.local_dim
    q, p = config.q, 2.0 * config.q
    B = U.shape[0]
    U = U.copy()
    phi = np.broadcast_to(state.tensor, (B,) + state.shape).copy()
    for i in range(n):
        phi = _apply_batch(phi, U[:, i], i)
    ent = _entropy_from_tensor(phi, q)
    traces = [[float(e)] for e in ent]
    sweeps = np.zeros(B, dtype=int)
    converged = np.zeros(B, dtype=bool)
    active = np.arange(B)
    while active.size:
        ph = phi[active]
        Ua = U[active]
        for i in range(n):
            Xcur = np.moveaxis(ph, i + 1, 1).reshape(active.size, d, -1)
            ui = Ua[:, i]
            M = _dag(ui) @ Xcur
            W = _inner_ascent(M, _dag(ui).copy(), p, config.inner_tol, config.inner_max_iters)
            ui = _dag(W)
            Ua[:, i] = ui
            Xnew = ui @ M
            rest = ph.shape[1:i + 1] + ph.shape[i + 2:]
            ph = np.moveaxis(Xnew.reshape((active.size, d) + rest), 1, i + 1)
        phi[active] = ph
        U[active] = Ua
        new_ent = _entropy_from_tensor(ph, q)
        sweeps[active] += 1
        keep = []
        for j, b in enumerate(active):
            traces[b].append(float(new_ent[j]))
            if ent[b] - new_ent[j] < config.sweep_tol:
                converged[b] = True
            elif sweeps[b] < config.max_sweeps:
                keep.append(b)
            ent[b] = new_ent[j]
        active = np.array(keep, dtype=int)
    return U, traces, sweeps, converged


def _apply_batch(phi: np.ndarray, u: np.ndarray, i: int) -> np.ndarray:
    B, d = phi.shape[0], phi.shape[1]
    X = np.moveaxis(phi, i + 1, 1).reshape(B, d, -1)
    out = (u @ X).reshape((B, d) + phi.shape[1:i + 1] + phi.shape[i + 2:])
    return np.moveaxis(out, 1, i + 1)


def _finish(state, U, traces, sweeps, converged, config) -> OptResult:
    summaries = []
    finals = []
    for b in range(U.shape[0]):
        rotated = apply_local_unitaries(state, list(U[b]))
        e = renyi_entropy(rotated, config.q)
        finals.append((e, b, rotated))
        summaries.append(RestartSummary(b, e, int(sweeps[b]), bool(converged[b])))
    e, b, rotated = min(finals, key=lambda t: (t[0], t[1]))
    return OptResult(
        entropy=e,
        units=[u.copy() for u in U[b]],
        optimized_state=rotated,
        trace=traces[b],
        restart_traces=summaries,
        best_restart=b,
        config=config,
        all_traces=[list(t) for t in traces],
    )


def minimize_entropy_once(state: State, q: float, seed_units, config: MinEntropyConfig | None = None) -> OptResult:
    """One alternating run from the given local unitaries."""
    config = MinEntropyConfig(q=q, restarts=1) if config is None else config
    if config.q != q:
        config = MinEntropyConfig(**{**config.to_dict(), "q": q})
    U = np.asarray(seed_units, dtype=complex)[None]
    return _finish(state, *_optimize_batch(state, U, config), config)


def random_seed_units(n: int, d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    return np.array([[random_unitary(d, rng) for _ in range(n)] for _ in range(count)])


def minimize_entropy(state: State, config: MinEntropyConfig | None = None) -> OptResult:
    """Best of ``config.restarts`` runs from Haar-random local unitaries.

    With ``config.include_identity`` one more run starts from the identity
    (reported as the last restart). Every run only ever lowers the entropy,
    so the result then never exceeds ``S_q`` of the input.
    """
    config = MinEntropyConfig() if config is None else config
    rng = np.random.default_rng(config.rng_seed)
    n, d = state.n_parties, state.local_dim
    U = random_seed_units(n, d, config.restarts, rng)
    if config.include_identity:
        U = np.concatenate([U, np.broadcast_to(np.eye(d, dtype=complex), (1, n, d, d))])
    return _finish(state, *_optimize_batch(state, U, config), config)


def entropy_vs_q_sweep(state: State, q_grid, config: MinEntropyConfig | None = None):
    """``(q, S_q, S_q^min)`` for each ``q`` in ``q_grid``, each with fresh restarts."""
    config = MinEntropyConfig() if config is None else config
    seeds = np.random.SeedSequence(config.rng_seed).generate_state(len(q_grid), dtype=np.uint64)
    rows = []
    for q, seed in zip(q_grid, seeds):
        cfg = MinEntropyConfig(**{**config.to_dict(), "q": float(q), "rng_seed": int(seed)})
        res = minimize_entropy(state, cfg)
        rows.append((float(q), renyi_entropy(state, q), res.entropy))
    return rows
