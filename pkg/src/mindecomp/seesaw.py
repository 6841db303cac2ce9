"""Closest product state by seesaw iteration.

``S_inf^min = -ln(lambda)`` where ``lambda`` is the largest squared overlap of
the state with a fully separable state, and the geometric measure of
entanglement is ``1 - lambda``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import State

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class ProductState:
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        facs = []
        for f in self.factors:
            f = np.array(f, dtype=complex).reshape(-1)
            nrm = np.linalg.norm(f)
            if nrm == 0:
                raise ValueError("zero factor")
            f = f / nrm
            f.setflags(write=False)
            facs.append(f)
        object.__setattr__(self, "factors", tuple(facs))

    def to_state(self) -> State:
        amps = self.factors[0]
        for f in self.factors[1:]:
            amps = np.kron(amps, f)
        return State(len(self.factors), self.factors[0].size, amps)


@dataclass
class SeesawResult:
    lambda_: float
    prod: ProductState
    trace: list[float] = field(default_factory=list)
    best_restart: int = 0
    restart_lambdas: list[float] = field(default_factory=list)

    @property
    def s_inf_min(self) -> float:
        return -math.log(self.lambda_)

    @property
    def gme(self) -> float:
        return 1.0 - self.lambda_

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_,
            "s_inf_min": self.s_inf_min,
            "gme": self.gme,
            "factors": [[[float(z.real), float(z.imag)] for z in f] for f in self.prod.factors],
            "best_restart": self.best_restart,
            "restart_lambdas": self.restart_lambdas,
        }


def _check(state: State, factors):
    if len(factors) != state.n_parties or any(f.size != state.local_dim for f in factors):
        raise ValueError("product state does not match the state's shape")


def product_overlap(state: State, prod: ProductState) -> complex:
    """``<psi|phi_1 x ... x phi_N>`` by contracting one party at a time."""
    _check(state, prod.factors)
    t = np.conj(state.tensor)
    for f in reversed(prod.factors):
        t = t @ f
    return complex(t)


def _contract_except(tensor: np.ndarray, F: np.ndarray, i: int) -> np.ndarray:
    """Batched ``<phi_j (j != i)|psi>`` -> shape (B, d). ``F`` is (B, N, d)."""
    n = F.shape[1]
    t = np.broadcast_to(tensor, (F.shape[0],) + tensor.shape)
    for j in reversed(range(n)):
        if j == i:
            continue
        t = np.moveaxis(t, j + 1, -1)
        t = np.einsum("b...k,bk->b...", t, np.conj(F[:, j]))
    return t


def seesaw_update(state: State, prod: ProductState, i: int, rng=None) -> ProductState:
    """Replace factor ``i`` by the normalized partial contraction, the exact maximizer."""
    _check(state, prod.factors)
    F = np.array(prod.factors)[None]
    v = _contract_except(state.tensor, F, i)[0]
    nrm = np.linalg.norm(v)
    facs = list(prod.factors)
    if nrm == 0:
        rng = np.random.default_rng() if rng is None else rng
        facs[i] = rng.standard_normal(v.size) + 1j * rng.standard_normal(v.size)
    else:
        facs[i] = v / nrm
    return ProductState(tuple(facs))


def _random_factors(count, n, d, rng) -> np.ndarray:
    z = rng.standard_normal((count, n, d)) + 1j * rng.standard_normal((count, n, d))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def _seesaw_batch(state: State, F: np.ndarray, tol: float, max_cycles: int, rng):
    n = state.n_parties
    B = F.shape[0]
    lam = np.zeros(B)
    traces = [[] for _ in range(B)]
    active = np.arange(B)
    cycles = 0
    while active.size and cycles < max_cycles:
        Fa = F[active]
        for i in range(n):
            v = _contract_except(state.tensor, Fa, i)
            nrm = np.linalg.norm(v, axis=1)
            dead = nrm == 0
            if np.any(dead):
                Fa[dead, i] = _random_factors(int(dead.sum()), 1, state.local_dim, rng)[:, 0]
            Fa[~dead, i] = v[~dead] / nrm[~dead, None]
        F[active] = Fa
        new_lam = nrm**2
        cycles += 1
        keep = []
        for j, b in enumerate(active):
            traces[b].append(float(new_lam[j]))
            if new_lam[j] - lam[b] >= tol:
                keep.append(b)
            lam[b] = new_lam[j]
        active = np.array(keep, dtype=int)
    return F, lam, traces


def s_infinity_min(
    state: State,
    restarts: int = 50,
    tol: float = 1e-12,
    max_cycles: int = 10_000,
    rng_seed: int = DEFAULT_SEED,
) -> SeesawResult:
    """Best seesaw overlap over ``restarts`` Haar-random product seeds."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(rng_seed)
    F = _random_factors(restarts, state.n_parties, state.local_dim, rng)
    F, lam, traces = _seesaw_batch(state, F, tol, max_cycles, rng)
    prods = [ProductState(tuple(F[b])) for b in range(restarts)]
    exact = np.array([abs(product_overlap(state, p)) ** 2 for p in prods])
    b = int(np.argmax(exact))
    return SeesawResult(
        lambda_=float(exact[b]),
        prod=prods[b],
        trace=traces[b],
        best_restart=b,
        restart_lambdas=[float(x) for x in exact],
    )
