#!/usr/bin/env python3
"""Cross-check the Gaussian closed forms against the truncated number basis.

The oracle builds both hypotheses from exact Fock amplitudes, applies the
beamsplitter as a matrix exponential, and evaluates tr rho^s sigma^{1-s}
spectrally.  It shares no code with the covariance route, which is what
makes the agreement meaningful.
"""

import numpy as np

import gaussqi as gq
from gaussqi.divergence import fidelity, q_s_general
from gaussqi.fock_oracle import (
    choose_cutoff,
    fidelity_fock,
    hypothesis_pair_fock,
    q_s_fock,
    thermal_fock,
)

cfg = gq.TargetConfig(kappa=0.2, n_b=0.3)
print(f"target: kappa = {cfg.kappa}, N_B = {cfg.n_b}\n")

print(f"{'transmitter':>11s} {'cutoff':>6s} {'s':>5s} {'Fock':>18s} {'Gaussian':>18s} {'diff':>9s}")
for kind, n_s in (("vacuum", 0.0), ("coherent", 0.4), ("smsv", 0.4), ("tmss", 0.4)):
    spec = gq.TransmitterSpec(kind, n_s)
    d = 24 if kind == "tmss" else choose_cutoff(spec, cfg, tol=1e-8)
    rho0, rho1 = hypothesis_pair_fock(spec, cfg, d)
    pair = gq.make_pair(spec, cfg)
    for s in (0.3, 0.5, 0.7):
        a = q_s_fock(rho0, rho1, s)
        b = q_s_general(pair.rho0, pair.rho1, s)
        print(f"{kind:>11s} {d:6d} {s:5.1f} {a:18.12f} {b:18.12f} {abs(a - b):9.1e}")

print("\nfidelity cross-check (thermal pair, cutoff 80):")
a = fidelity_fock(thermal_fock(0.2, 80), thermal_fock(0.5, 80))
b = fidelity(gq.thermal_state(0.2), gq.thermal_state(0.5))
print(f"  Fock {a:.12f}  closed form {b:.12f}  diff {abs(a - b):.1e}")

print("\ntruncation bookkeeping for the entangled probe at growing cutoffs:")
for d in (8, 12, 16, 20, 24):
    # loose budget on purpose: the point is to watch the deficit shrink
    rho0, rho1 = hypothesis_pair_fock(gq.tmss(0.4), cfg, d, budget=1e-3)
    q = q_s_fock(rho0, rho1, 0.5)
    print(f"  D = {d:2d}: deficit(rho1) = {rho1.trace_deficit:8.1e}   Q_1/2 = {q:.12f}")
