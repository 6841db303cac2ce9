"""
How S_q^min depends on q
========================

S_q^min is non-increasing in q and approaches the seesaw value S_inf^min as
q grows.
"""
from mindecomp import GenConfig, MinEntropyConfig, entropy_vs_q_sweep, generate_kuniform, s_infinity_min

state = generate_kuniform(GenConfig(3, 3, rng_seed=1)).state
rows = entropy_vs_q_sweep(state, [1.5, 2, 3, 5, 10, 20, 50], MinEntropyConfig(restarts=20))
print("    q      S_q      S_q^min")
for q, s, smin in rows:
    print(f"{q:5.1f}  {s:.5f}  {smin:.5f}")
print(f"  inf    seesaw   {s_infinity_min(state).s_inf_min:.5f}")
