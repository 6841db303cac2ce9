"""Dense N-qudit pure states, local unitary action and bipartition reshapes.

Amplitudes are stored flat in row-major order with party 1 as the most
significant digit, i.e. ``flat = sum_i j_i * d**(N - i)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class State:
    """Normalized pure state of ``n_parties`` qudits of dimension ``local_dim``."""

    n_parties: int
    local_dim: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.local_dim ** self.n_parties:
            raise ValueError(
                f"expected {self.local_dim ** self.n_parties} amplitudes, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.local_dim,) * self.n_parties

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class BipartitionMatrix:
    """Row side ``subset`` against its complement, scaled by ``sqrt(d**k)``."""

    entries: np.ndarray
    subset: tuple[int, ...]

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray
    subset: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def state_from_amplitudes(n: int, d: int, amps) -> State:
    """Build a normalized :class:`State` from raw amplitudes.

    Raises
    ------
    ValueError
        If the length is not ``d**n`` or the vector is zero.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if amps.size != d**n:
        raise ValueError(f"expected {d**n} amplitudes, got {amps.size}")
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise ValueError("all-zero amplitude vector")
    return State(n, d, amps / nrm)


def basis_state(indices: Sequence[int], d: int) -> State:
    amps = np.zeros(d ** len(indices), dtype=complex)
    amps[flat_index(indices, d)] = 1.0
    return State(len(indices), d, amps)


def flat_index(indices: Sequence[int], d: int) -> int:
    out = 0
    for j in indices:
        if not 0 <= j < d:
            raise ValueError(f"index {j} out of range for local dimension {d}")
        out = out * d + int(j)
    return out


def unflatten(index: int, n: int, d: int) -> tuple[int, ...]:
    if not 0 <= index < d**n:
        raise ValueError(f"flat index {index} out of range")
    digits = []
    for _ in range(n):
        index, r = divmod(index, d)
        digits.append(r)
    return tuple(reversed(digits))


def _check_subset(n: int, subset: Iterable[int]) -> tuple[int, ...]:
    subset = tuple(int(s) for s in subset)
    if len(set(subset)) != len(subset):
        raise ValueError(f"duplicate party indices in {subset}")
    if any(not 0 <= s < n for s in subset):
        raise ValueError(f"party indices out of range in {subset}")
    if not 1 <= len(subset) <= n - 1:
        raise ValueError("subset must contain between 1 and n-1 parties")
    return subset


def complement(n: int, subset: Iterable[int]) -> tuple[int, ...]:
    s = set(subset)
    return tuple(i for i in range(n) if i not in s)


def reshape_tensor(tensor: np.ndarray, subset: Sequence[int]) -> np.ndarray:
    """Matricize an N-index tensor with ``subset`` on rows (no scaling)."""
    n = tensor.ndim
    d = tensor.shape[0]
    perm = tuple(subset) + complement(n, subset)
    k = len(subset)
    return np.transpose(tensor, perm).reshape(d**k, d ** (n - k))


def unreshape_tensor(mat: np.ndarray, subset: Sequence[int], n: int, d: int) -> np.ndarray:
    """Inverse of :func:`reshape_tensor`."""
    perm = tuple(subset) + complement(n, subset)
    t = mat.reshape((d,) * n)
    return np.transpose(t, np.argsort(perm))


def reshape_bipartition(state: State, subset: Sequence[int]) -> BipartitionMatrix:
    """Reshaped matrix for an arbitrary row-side subset (0-based parties)."""
    subset = _check_subset(state.n_parties, subset)
    k = len(subset)
    mat = reshape_tensor(state.tensor, subset) * math.sqrt(state.local_dim**k)
    return BipartitionMatrix(mat, subset)


def matricize(state: State, k: int) -> BipartitionMatrix:
    if not 1 <= k <= state.n_parties - 1:
        raise ValueError(f"k={k} out of range for N={state.n_parties}")
    return reshape_bipartition(state, tuple(range(k)))


def reduced_density(state: State, subset: Sequence[int]) -> DensityMatrix:
    bm = reshape_bipartition(state, subset)
    a = bm.entries
    rho = a @ a.conj().T / bm.rows
    return DensityMatrix(rho, bm.subset)


def linear_entropy(rho: DensityMatrix) -> float:
    r = rho.entries
    return float(1.0 - np.real(np.vdot(r.conj().T, r)))


def apply_local(tensor: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    """Contract ``u`` with one mode of ``tensor``: out[..j..] = sum_l u[j, l] t[..l..]."""
    out = np.tensordot(u, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _check_unitary(u: np.ndarray, d: int, tol: float = 1e-8):
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > tol:
        raise ValueError("matrix is not unitary")


def apply_local_unitaries(state: State, units: Sequence[np.ndarray]) -> State:
    """Return ``(u_1 x ... x u_N)|psi>`` via sequential mode contractions."""
    if len(units) != state.n_parties:
        raise ValueError(f"need {state.n_parties} unitaries, got {len(units)}")
    t = state.tensor
    for i, u in enumerate(units):
        u = np.asarray(u, dtype=complex)
        _check_unitary(u, state.local_dim)
        t = apply_local(t, u, i)
    return State(state.n_parties, state.local_dim, t.reshape(-1))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``d x d`` unitary (Ginibre + QR with phase fix)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_haar_state(n: int, d: int, rng: np.random.Generator) -> State:
    size = d**n
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return State(n, d, z / np.linalg.norm(z))


def overlap(a: State, b: State) -> complex:
    """Inner product <a|b>, conjugate-linear in ``a``."""
    if (a.n_parties, a.local_dim) != (b.n_parties, b.local_dim):
        raise ValueError("states live in different spaces")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# --- JSON state files -------------------------------------------------------

def state_to_dict(state: State) -> dict:
    return {
        "n_parties": state.n_parties,
        "local_dim": state.local_dim,
        "amplitudes": [[float(c.real), float(c.imag)] for c in state.amplitudes],
    }


def state_from_dict(data: dict) -> tuple[State, float]:
    """Parse a state dictionary; returns the state and its pre-normalization norm."""
    try:
        n, d = int(data["n_parties"]), int(data["local_dim"])
        raw = np.array([complex(re, im) for re, im in data["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state file: {exc}") from exc
    return state_from_amplitudes(n, d, raw), float(np.linalg.norm(raw))


def write_state(state: State, path, **metadata) -> None:
    data = state_to_dict(state)
    if metadata:
        data["metadata"] = metadata
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def read_state(path) -> State:
    with open(path) as fh:
        state, _ = state_from_dict(json.load(fh))
    return state
