"""Random k-uniform / AME states by nuclear-norm ascent.

A state is represented by its scaled ``d^k x d^(N-k)`` matrix ``A`` with
``tr(A^dag A) = d^k``. Each iteration replaces every bipartition reshape of
``A`` by its nearest isometry and averages the results back; the normalized
objective ``f(A)`` (mean nuclear norm over the C(N, k) reshapes divided by
``d^k``) never decreases and equals 1 exactly for k-uniform states.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .states import State, reshape_tensor, unreshape_tensor
from .uniformity import UniformityReport, k_uniformity_deviation

DEFAULT_SEED = 20240601


class DegenerateMatrixWarning(RuntimeWarning):
    pass


@dataclass
class GenConfig:
    n: int
    d: int
    k: int | None = None
    max_iters: int = 5000
    f_tol: float = 1e-10
    restarts: int = 10
    rng_seed: int = DEFAULT_SEED
    verify_tol: float = 1e-6

    def __post_init__(self):
        if self.k is None:
            self.k = self.n // 2
        if not 1 <= self.k <= self.n // 2:
            raise ValueError(f"k={self.k} out of range for n={self.n}")
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class GenResult:
    success: bool
    state: State | None
    f_final: float
    iterations: int
    restart: int
    report: UniformityReport | None
    config: GenConfig
    restart_f: list[float] = field(default_factory=list)
    f_trace: list[float] = field(default_factory=list)

    def metadata(self) -> dict:
        return {
            "success": self.success,
            "f_final": self.f_final,
            "iterations": self.iterations,
            "restart": self.restart,
            "restart_f": self.restart_f,
            "config": self.config.to_dict(),
        }


def nearest_isometry(A) -> np.ndarray:
    """``U [I_m | 0] V`` from the SVD ``A = U D V``: the Frobenius-closest isometry."""
    A = np.asarray(A, dtype=complex)
    m, n = A.shape
    if m > n:
        raise ValueError("need rows <= columns")
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    if s[-1] <= s[0] * 1e-14:
        warnings.warn("matrix is rank deficient; nearest isometry is not unique",
                      DegenerateMatrixWarning, stacklevel=2)
    return u @ vh


def nuclear_norm(A) -> float:
    return float(np.sum(np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)))


def _subsets(n, k):
    return list(itertools.combinations(range(n), k))


def _check_scaling(A, n, d, k, tol=1e-6):
    if A.shape != (d**k, d ** (n - k)):
        raise ValueError(f"expected shape {(d**k, d**(n-k))}, got {A.shape}")
    norm2 = float(np.real(np.vdot(A, A)))
    if abs(norm2 - d**k) > tol * d**k:
        raise ValueError(f"tr(A^dag A) = {norm2}, expected {d**k}")


def objective_f(A, n: int, d: int, k: int) -> float:
    """Average nuclear norm of the C(n, k) reshapes of ``A``, divided by ``d^k``."""
    A = np.asarray(A, dtype=complex)
    _check_scaling(A, n, d, k)
    t = A.reshape((d,) * n)
    subsets = _subsets(n, k)
    total = math.fsum(nuclear_norm(reshape_tensor(t, s)) for s in subsets)
    return total / (len(subsets) * d**k)


def _step(t: np.ndarray, n: int, d: int, k: int, subsets):
    """One averaged projection; also returns f and the worst ``|s^2 - 1|`` at ``t``."""
    acc = np.zeros_like(t)
    nuc = 0.0
    worst = 0.0
    for s in subsets:
        u, sv, vh = np.linalg.svd(reshape_tensor(t, s), full_matrices=False)
        nuc += float(np.sum(sv))
        worst = max(worst, float(np.max(np.abs(sv**2 - 1.0))))
        acc += unreshape_tensor(u @ vh, s, n, d)
    f = nuc / (len(subsets) * d**k)
    acc *= math.sqrt(d**k) / np.linalg.norm(acc)
    return acc, f, worst


def gen_iterate(A, n: int, d: int, k: int) -> np.ndarray:
    """Average of the nearest isometries of all reshapes, rescaled to ``tr = d^k``."""
    A = np.asarray(A, dtype=complex)
    _check_scaling(A, n, d, k)
    t, _, _ = _step(A.reshape((d,) * n), n, d, k, _subsets(n, k))
    return t.reshape(d**k, -1)


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    u, _, vh = np.linalg.svd(z, full_matrices=False)
    return u @ vh


def _run(A0, config: GenConfig):
    n, d, k = config.n, config.d, config.k
    subsets = _subsets(n, k)
    t = A0.reshape((d,) * n)
    trace = []
    for it in range(config.max_iters + 1):
        t_next, f, worst = _step(t, n, d, k, subsets)
        trace.append(f)
        if 1.0 - f < config.f_tol and worst <= config.verify_tol:
            return t, f, it, True, trace
        if it == config.max_iters:
            break
        t = t_next
    return t, f, config.max_iters, False, trace


def generate_kuniform(config: GenConfig) -> GenResult:
    """Search for a k-uniform state, restarting from fresh random isometries.

    Success requires ``1 - f < f_tol`` and every reshape within ``verify_tol``
    of an isometry; the returned state is re-verified independently.
    """
    n, d, k = config.n, config.d, config.k
    rng = np.random.default_rng(config.rng_seed)
    best = None
    restart_f = []
    for r in range(config.restarts):
        A0 = random_isometry(d**k, d ** (n - k), rng)
        t, f, iters, ok, trace = _run(A0, config)
        restart_f.append(f)
        if best is None or f > best[1]:
            best = (t, f, iters, r, trace)
        if ok:
            state = State(n, d, (t / np.linalg.norm(t)).reshape(-1))
            report = k_uniformity_deviation(state, k, tol=config.verify_tol)
            if report.is_uniform:
                return GenResult(True, state, f, iters, r, report, config, restart_f, trace)
    t, f, iters, r, trace = best
    state = State(n, d, (t / np.linalg.norm(t)).reshape(-1))
    report = k_uniformity_deviation(state, k, tol=config.verify_tol)
    return GenResult(False, state, f, iters, r, report, config, restart_f, trace)
