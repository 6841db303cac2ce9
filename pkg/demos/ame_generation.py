"""
Generating and checking AME states
==================================

Random absolutely maximally entangled states come from an averaged
nearest-isometry iteration. The normalized nuclear-norm objective f reaches 1
exactly when every balanced reshape is an isometry.
"""
import math

from mindecomp import GenConfig, MinEntropyConfig, generate_kuniform, is_ame, minimize_entropy

# %%
for n, d in [(3, 2), (3, 3), (4, 3), (5, 2)]:
    res = generate_kuniform(GenConfig(n, d))
    rep = is_ame(res.state, tol=1e-6)
    print(f"AME({n},{d}): success={res.success}  1-f={1 - res.f_final:.1e}  "
          f"iterations={res.iterations}  max deviation={rep.max_deviation:.1e}")

# %%
# Four qubits admit no AME state, and the iteration plateaus well below 1.
bad = generate_kuniform(GenConfig(4, 2, restarts=3, max_iters=1000))
print(f"\nAME(4,2): success={bad.success}  best f per restart =",
      [round(f, 6) for f in bad.restart_f])

# %%
# Every AME(4,3) state is LU-equivalent to the 9-term design state, so the
# minimal entropy of a random one is ln 9.
ame = generate_kuniform(GenConfig(4, 3)).state
smin = minimize_entropy(ame, MinEntropyConfig(restarts=20)).entropy
print(f"\nrandom AME(4,3): S_2^min = {smin:.6f}   ln 9 = {math.log(9):.6f}")
