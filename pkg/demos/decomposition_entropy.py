"""
Decomposition entropy and its local-unitary minimum
===================================================

The decomposition entropy S_q of a pure state is the Renyi entropy of its
computational-basis weights. It depends on the basis, so we minimize it over
local unitaries to get an LU invariant.
"""
import math

import numpy as np

from mindecomp import (
    MinEntropyConfig,
    apply_local_unitaries,
    known_state,
    minimize_entropy,
    random_unitary,
    renyi_entropy,
    s_infinity_min,
)

# %%
# GHZ has two equal weights, so every S_q is ln 2.
ghz = known_state("ghz3")
for q in (1, 2, math.inf):
    print(f"GHZ   S_{q} = {renyi_entropy(ghz, q):.6f}")

# %%
# Hide GHZ behind random local unitaries: S_2 grows, but the minimum over
# local unitaries finds ln 2 again.
rng = np.random.default_rng(0)
hidden = apply_local_unitaries(ghz, [random_unitary(2, rng) for _ in range(3)])
print(f"\nrotated GHZ  S_2 = {renyi_entropy(hidden, 2):.6f}")
res = minimize_entropy(hidden, MinEntropyConfig(q=2.0, restarts=20))
print(f"rotated GHZ  S_2^min = {res.entropy:.9f}   (ln 2 = {math.log(2):.9f})")

# %%
# q -> infinity is the geometric measure: S_inf^min = -ln max |<product|psi>|^2.
w = known_state("w3")
gme = s_infinity_min(w)
print(f"\nW state  S_inf^min = {gme.s_inf_min:.6f}   ln(9/4) = {math.log(9 / 4):.6f}")
print("closest product factor |<0|phi>|^2 =", np.round(np.abs(gme.prod.factors[0]) ** 2, 4))
