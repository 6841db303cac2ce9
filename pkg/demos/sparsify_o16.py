"""
Sparsifying a 2-unitary AME(4,4) state
======================================

The state O16 has 64 equal-modulus terms. Minimizing S_2 and then
canonicalizing (level reordering plus local phases) exposes a much sparser
representative of the same LU class.
"""
import numpy as np

from mindecomp import (
    MinEntropyConfig,
    canonicalize,
    is_ame,
    known_state,
    minimize_entropy,
    renyi_entropy,
    support,
)

o16 = known_state("o16")
print(f"O16: S_2 = {renyi_entropy(o16, 2):.5f}, support = {support(o16)}, AME = {is_ame(o16).is_uniform}")

# %%
res = minimize_entropy(o16, MinEntropyConfig(q=2.0, restarts=50))
sparse = canonicalize(res.optimized_state)
print(f"after minimization: S_2 = {res.entropy:.5f}, support (tol 1e-4) = {support(sparse, 1e-4)}")

# %%
# The surviving amplitudes take only a couple of moduli and quarter-turn phases.
amps = sparse.amplitudes[np.abs(sparse.amplitudes) > 1e-4]
print("moduli:", sorted({float(m) for m in np.round(np.abs(amps), 4)}))
print("phases / (pi/2):", sorted({float(p) for p in np.round(np.angle(amps) / (np.pi / 2), 3) % 4}))
