#!/usr/bin/env python3
"""Detecting a target with a vacuum transmitter.

With a bare (target-independent) thermal background, the reflected noise
power differs between the two hypotheses even when no photons are sent, so
the vacuum probe carries a positive error exponent: the target casts an
optical shadow.  Under the rescaled-background convention the two
hypotheses coincide and the problem degenerates.
"""

import numpy as np

import gaussqi as gq
from gaussqi.divergence import bhattacharyya_error_bound, chernoff

N_B, KAPPA = 1.0, 0.1

agnostic = gq.make_pair(gq.vacuum(), gq.TargetConfig(kappa=KAPPA, n_b=N_B))
legacy = gq.make_pair(gq.vacuum(), gq.TargetConfig(kappa=KAPPA, n_b=N_B, model="legacy"))

res = chernoff(agnostic)
print(f"bare background:      xi = {res.xi:.6e}  (s* = {res.s_star:.4f})")
res_l = chernoff(legacy)
print(f"rescaled background:  xi = {res_l.xi:.1e}  flags = {res_l.flags}")

print("\ncopies needed for p_err <= 1e-6 (Bhattacharyya bound), bare background:")
n = int(np.ceil(np.log(2e6) / res.xi))
print(f"  N = {n}  ->  bound = {bhattacharyya_error_bound(agnostic, n):.3e}")

# The shadow gets easier to see in brighter backgrounds
print("\nvacuum-probe exponent vs background occupation (kappa = 0.1):")
for n_b in (0.1, 1.0, 10.0, 100.0):
    pair = gq.make_pair(gq.vacuum(), gq.TargetConfig(kappa=KAPPA, n_b=n_b))
    print(f"  N_B = {n_b:7.1f}:  xi = {chernoff(pair).xi:.6e}")

# The same shadow term corrects the coherent-transmitter exponent: compare a
# coherent probe against the sum of its illumination and shadow parts.
print("\ncoherent probe vs vacuum + illumination split (N_B = 100, kappa = 0.01):")
cfg = gq.TargetConfig(kappa=0.01, n_b=100.0)
for n_s in (0.1, 1.0, 10.0):
    xi_c = chernoff(gq.make_pair(gq.coherent(n_s), cfg)).xi
    xi_v = chernoff(gq.make_pair(gq.vacuum(), cfg)).xi
    print(f"  N_S = {n_s:5.1f}:  xi_coherent = {xi_c:.6e},  vacuum share = {xi_v / xi_c:.1%}")
