"""k-uniformity and AME checks over the C(N, k) bipartitions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .states import State, reshape_bipartition


@dataclass
class UniformityReport:
    k: int
    tolerance: float
    max_deviation: float
    per_bipartition: list[tuple[tuple[int, ...], float]] = field(default_factory=list)

    @property
    def is_uniform(self) -> bool:
        return self.max_deviation <= self.tolerance

    @property
    def bipartitions_checked(self) -> list[tuple[int, ...]]:
        return [s for s, _ in self.per_bipartition]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "tolerance": self.tolerance,
            "max_deviation": self.max_deviation,
            "is_uniform": self.is_uniform,
            "per_bipartition": [
                {"subset": list(s), "deviation": dev} for s, dev in self.per_bipartition
            ],
        }


def bipartitions(n: int, k: int, reduce_complements: bool = True) -> list[tuple[int, ...]]:
    """All k-subsets of ``range(n)`` in lexicographic order.

    For ``k == n/2`` and ``reduce_complements`` only the subsets containing
    party 0 are returned, one per complementary pair.
    """
    if not 1 <= k <= n // 2:
        raise ValueError(f"k={k} out of range for n={n}")
    subsets = list(itertools.combinations(range(n), k))
    if reduce_complements and 2 * k == n:
        subsets = [s for s in subsets if s[0] == 0]
    return subsets


def isometry_deviation(a: np.ndarray) -> float:
    """``max |A A^dag - I|`` entrywise."""
    return float(np.max(np.abs(a @ a.conj().T - np.eye(a.shape[0]))))


def k_uniformity_deviation(
    state: State, k: int, tol: float = 1e-8, reduce_complements: bool = True
) -> UniformityReport:
    per = []
    for subset in bipartitions(state.n_parties, k, reduce_complements):
        a = reshape_bipartition(state, subset).entries
        per.append((subset, isometry_deviation(a)))
    worst = max(dev for _, dev in per)
    return UniformityReport(k=k, tolerance=tol, max_deviation=worst, per_bipartition=per)


def is_ame(state: State, tol: float = 1e-8, reduce_complements: bool = True) -> UniformityReport:
    return k_uniformity_deviation(state, state.n_parties // 2, tol, reduce_complements)
