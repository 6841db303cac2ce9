"""Combinatorial designs, the states built from them, and a few known states.

Also holds :func:`canonicalize`, which strips local phases and reorders local
levels without touching any basis weight.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .states import State, flat_index, state_from_amplitudes


@dataclass(frozen=True)
class LatinSquare:
    cells: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.cells)

    def __post_init__(self):
        if not is_latin_square(self.cells):
            raise ValueError("not a Latin square")


@dataclass(frozen=True)
class OrthogonalArray:
    rows: tuple[tuple[int, ...], ...]
    levels: int
    strength: int

    @property
    def runs(self) -> int:
        return len(self.rows)

    @property
    def factors(self) -> int:
        return len(self.rows[0])

    def __post_init__(self):
        if not has_strength(self.rows, self.levels, self.strength):
            raise ValueError(f"array does not have strength {self.strength}")


def is_latin_square(cells) -> bool:
    d = len(cells)
    target = set(range(d))
    if any(len(row) != d or set(row) != target for row in cells):
        return False
    return all({cells[i][j] for i in range(d)} == target for j in range(d))


def are_orthogonal(l1: LatinSquare, l2: LatinSquare) -> bool:
    d = l1.order
    if l2.order != d:
        return False
    pairs = {(l1.cells[i][j], l2.cells[i][j]) for i in range(d) for j in range(d)}
    return len(pairs) == d * d


def has_strength(rows, levels: int, strength: int) -> bool:
    """Every ``strength``-column projection hits each tuple equally often."""
    r = len(rows)
    if r % levels**strength:
        return False
    expected = r // levels**strength
    ncols = len(rows[0])
    for cols in itertools.combinations(range(ncols), strength):
        counts = Counter(tuple(row[c] for c in cols) for row in rows)
        if len(counts) != levels**strength or any(v != expected for v in counts.values()):
            return False
    return True


def latin_square(d: int) -> LatinSquare:
    """Cyclic Latin square ``L[i][j] = (i + j) mod d``."""
    if d < 1:
        raise ValueError("order must be positive")
    return LatinSquare(tuple(tuple((i + j) % d for j in range(d)) for i in range(d)))


def _is_prime(d: int) -> bool:
    return d >= 2 and all(d % p for p in range(2, math.isqrt(d) + 1))


def mols_pair(d: int) -> tuple[LatinSquare, LatinSquare]:
    """``L_a[i][j] = (a i + j) mod d`` for a = 1, 2; odd primes only."""
    if d == 2:
        raise ValueError("no pair of orthogonal Latin squares of order 2 exists")
    if d == 6:
        raise ValueError("no pair of orthogonal Latin squares of order 6 exists (Euler's 36 officers)")
    if not (_is_prime(d) and d % 2):
        raise ValueError(f"only odd prime orders are supported, got {d}")
    l1 = LatinSquare(tuple(tuple((i + j) % d for j in range(d)) for i in range(d)))
    l2 = LatinSquare(tuple(tuple((2 * i + j) % d for j in range(d)) for i in range(d)))
    assert are_orthogonal(l1, l2)
    return l1, l2


def oa_from_ls(ls: LatinSquare) -> OrthogonalArray:
    """A Latin square as an OA(d^2, 3, d, 2): rows ``(i, j, L[i][j])``."""
    d = ls.order
    rows = tuple((i, j, ls.cells[i][j]) for i in range(d) for j in range(d))
    return OrthogonalArray(rows, d, 2)


def oa_from_mols(l1: LatinSquare, l2: LatinSquare) -> OrthogonalArray:
    """OA(d^2, 4, d, 2) with rows ``(i, j, L1[i][j], L2[i][j])``."""
    if not are_orthogonal(l1, l2):
        raise ValueError("Latin squares are not orthogonal")
    d = l1.order
    rows = tuple((i, j, l1.cells[i][j], l2.cells[i][j]) for i in range(d) for j in range(d))
    return OrthogonalArray(rows, d, 2)


def state_from_rows(rows, d: int) -> State:
    """Equal-weight superposition of the basis states listed in ``rows``."""
    n = len(rows[0])
    amps = np.zeros(d**n, dtype=complex)
    for row in rows:
        amps[flat_index(row, d)] += 1.0
    return state_from_amplitudes(n, d, amps)


def state_from_oa(oa: OrthogonalArray) -> State:
    return state_from_rows(oa.rows, oa.levels)


# --- known states -----------------------------------------------------------

# Kets of the 2-unitary O_16 written 1-based; converted to 0-based on construction.
_O16_MINUS = (
    "1133 1144 1221 1234 1243 1313 1331 1342 1414 2121 2211 2244 2314 2332 2341 2413 "
    "2424 2442 3113 3124 3131 3232 3311 3322 3333 3344 3412 3421 3434 4114 4123 4132 "
    "4224 4231 4242 4334 4422 4444"
)
_O16_PLUS = (
    "1111 1122 1212 1324 1423 1432 1441 2112 2134 2143 2222 2233 2323 2431 3142 3214 "
    "3223 3241 3443 4141 4213 4312 4321 4343 4411 4433"
)
_O16_REF = {
    1: "1111 2222 3333 4444",
}
# The sign of |1,2,3,4> is -1: with +1 instead no reshape is unitary, with -1
# the state is AME(4,4) and LU-equivalent to O_16.
_O16_REF_HALF = {
    1: "1342 2143 3124 3142 3241 3412 3421 4123 4132 4321",
    -1: "1234 1324 2341 2413 4231 4312",
    -1j: "1423 2134 2314 3214",
    1j: "1243 1432 2431 4213",
}


def _kets(spec: str):
    return [tuple(int(c) - 1 for c in ket) for ket in spec.split()]


def _from_terms(terms, n: int, d: int) -> State:
    amps = np.zeros(d**n, dtype=complex)
    for ket, coeff in terms:
        idx = flat_index(ket, d)
        if amps[idx] != 0:
            raise ValueError(f"duplicate ket {ket}")
        amps[idx] = coeff
    return state_from_amplitudes(n, d, amps)


def _o16() -> State:
    terms = [(k, -1 / 8) for k in _kets(_O16_MINUS)] + [(k, 1 / 8) for k in _kets(_O16_PLUS)]
    return _from_terms(terms, 4, 4)


def _o16_ref() -> State:
    terms = [(k, c / 4) for c, s in _O16_REF.items() for k in _kets(s)]
    terms += [(k, c / (4 * math.sqrt(2))) for c, s in _O16_REF_HALF.items() for k in _kets(s)]
    return _from_terms(terms, 4, 4)


def _ame_4_3() -> State:
    return state_from_oa(oa_from_mols(*mols_pair(3)))


def _ghz3() -> State:
    return state_from_rows([(0, 0, 0), (1, 1, 1)], 2)


def _w3() -> State:
    return state_from_rows([(0, 0, 1), (0, 1, 0), (1, 0, 0)], 2)


KNOWN_STATES = {
    "ghz3": _ghz3,
    "w3": _w3,
    "ame_4_3": _ame_4_3,
    "o16": _o16,
    "o16_ref": _o16_ref,
}


def known_state(name: str) -> State:
    try:
        return KNOWN_STATES[name]()
    except KeyError:
        raise ValueError(f"unknown state {name!r}; choose from {sorted(KNOWN_STATES)}") from None


# --- canonical form ---------------------------------------------------------

_DIGITS = 10


def _level_keys(t: np.ndarray, axis: int):
    mods = np.round(np.abs(np.moveaxis(t, axis, 0)), _DIGITS)
    d = mods.shape[0]
    weights = np.round(np.sum(mods.reshape(d, -1) ** 2, axis=1), _DIGITS)
    return [(-weights[j], tuple(-mods[j].reshape(-1))) for j in range(d)]


def _sort_levels(t: np.ndarray, max_passes: int = 100) -> np.ndarray:
    """Per-party level permutations, repeated until none changes anything.

    Levels are ordered by decreasing marginal weight, then by the moduli of
    their slice read in flat order (larger first). Each reorder lowers the
    flattened modulus pattern lexicographically, so the loop terminates.
    """
    for _ in range(max_passes):
        changed = False
        for axis in range(t.ndim):
            keys = _level_keys(t, axis)
            perm = sorted(range(len(keys)), key=lambda j: keys[j])
            if perm != list(range(len(keys))):
                t = np.take(t, perm, axis=axis)
                changed = True
        if not changed:
            break
    return t


def _fix_phases(t: np.ndarray, tol: float) -> np.ndarray:
    """Local diagonal phases making a maximal independent set of anchors real positive.

    Amplitudes are visited by decreasing modulus (ties by flat index); an
    amplitude becomes an anchor when its party/level incidence vector is
    independent of the anchors already chosen, and the phases are then
    solved for exactly (minimum-norm solution).
    """
    n, d = t.ndim, t.shape[0]
    flat = t.reshape(-1)
    mods = np.round(np.abs(flat), _DIGITS)
    order = sorted(np.flatnonzero(np.abs(flat) > tol), key=lambda x: (-mods[x], x))
    basis = []
    rows, targets = [], []
    for x in order:
        digits = np.unravel_index(x, t.shape)
        v = np.zeros(n * d)
        v[[i * d + j for i, j in enumerate(digits)]] = 1.0
        r = v.copy()
        for b in basis:
            r -= (b @ r) * b
        nrm = np.linalg.norm(r)
        if nrm < 1e-9:
            continue
        basis.append(r / nrm)
        rows.append(v)
        targets.append(-np.angle(flat[x]))
        if len(basis) == n * d - n + 1:
            break
    if not rows:
        return t
    theta, *_ = np.linalg.lstsq(np.array(rows), np.array(targets), rcond=None)
    theta = theta.reshape(n, d)
    out = t
    for i in range(n):
        out = out * np.exp(1j * theta[i]).reshape((1,) * i + (d,) + (1,) * (n - i - 1))
    return out


def canonicalize(state: State, tol: float = 1e-8) -> State:
    """Reorder local levels, then remove a global phase and local diagonal phases.

    Only permutations and diagonal unitaries are applied, so every
    computational-basis weight is preserved as a multiset.
    """
    t = _sort_levels(state.tensor.copy())
    flat = t.reshape(-1)
    mods = np.round(np.abs(flat), _DIGITS)
    lead = int(np.argmax(mods))
    if abs(flat[lead]) > 0:
        t = t * np.exp(-1j * np.angle(flat[lead]))
    t = _fix_phases(t, tol)
    return State(state.n_parties, state.local_dim, t.reshape(-1))
