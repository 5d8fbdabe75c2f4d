"""Arbitrary-precision overlap evaluation for extreme parameters.

At reflectivities below roughly 1e-7 the Bhattacharyya exponent
-log Q_{1/2} drops to the 1e-16 scale, where double precision cannot
separate Q from 1.  These helpers rebuild the hypothesis covariances and
the overlap formula in mpmath so the limit-order study can evaluate exact
exponent ratios instead of expansions.  At moderate parameters the results
agree with the float64 path (tested), which is what certifies this route.

The Williamson step assumes a non-degenerate symplectic spectrum, which
holds for every pair built here (n_b != n_s in all uses).
"""

from __future__ import annotations

import mpmath as mp


def _mp_symplectic_form(n: int) -> mp.matrix:
    delta = mp.zeros(2 * n)
    for k in range(n):
        delta[2 * k, 2 * k + 1] = mp.mpf(1)
        delta[2 * k + 1, 2 * k] = mp.mpf(-1)
    return delta


def _sym_root(v: mp.matrix, power):
    """v**power for symmetric positive definite v, via eigendecomposition."""
    evals, q = mp.eigsy(v)
    d = mp.zeros(v.rows)
    for i in range(v.rows):
        d[i, i] = evals[i] ** power
    return q * d * q.T


def _williamson_pl(v: mp.matrix):
    """Symplectic eigenvalues nu_k and T with v = T diag(nu x I2) T^T."""
    n = v.rows // 2
    root = _sym_root(v, mp.mpf(1) / 2)
    root_inv = _sym_root(v, mp.mpf(-1) / 2)
    anti = root_inv * _mp_symplectic_form(n) * root_inv
    evals, evecs = mp.eig(anti)

    cols = []
    nus = []
    for i, ev in enumerate(evals):
        lam = mp.im(ev)
        if lam <= 0:
            continue
        w = evecs[:, i]
        u = mp.matrix([mp.re(w[j]) for j in range(2 * n)])
        x = mp.matrix([mp.im(w[j]) for j in range(2 * n)])
        nu_u, nu_x = mp.norm(u), mp.norm(x)
        # Real and imaginary parts of an eigenvector of a real antisymmetric
        # matrix have equal norm unless eigenvalues collide.
        if abs(nu_u - nu_x) > mp.mpf(10) ** (10 - mp.mp.dps) * nu_u:
            raise ValueError("degenerate symplectic spectrum not supported here")
        cols.append((u / nu_u, x / nu_x))
        nus.append(1 / lam)

    o = mp.zeros(2 * n)
    for k, (u, x) in enumerate(cols):
        for j in range(2 * n):
            o[j, 2 * k] = u[j]
            o[j, 2 * k + 1] = x[j]
    d_inv_half = mp.zeros(2 * n)
    for k, nu in enumerate(nus):
        d_inv_half[2 * k, 2 * k] = 1 / mp.sqrt(nu)
        d_inv_half[2 * k + 1, 2 * k + 1] = 1 / mp.sqrt(nu)
    return nus, root * o * d_inv_half


def _g(p, x):
    return mp.mpf(2) ** p / ((x + 1) ** p - (x - 1) ** p)


def _lam(p, x):
    hi = (x + 1) ** p
    lo = (x - 1) ** p
    return (hi + lo) / (hi - lo)


def _log_q(v0, m0, v1, m1, s):
    n = v0.rows // 2
    nus0, t0 = _williamson_pl(v0)
    nus1, t1 = _williamson_pl(v1)
    lam0 = mp.zeros(2 * n)
    lam1 = mp.zeros(2 * n)
    log_g = mp.mpf(0)
    for k in range(n):
        x0, x1 = 2 * nus0[k], 2 * nus1[k]
        lam0[2 * k, 2 * k] = lam0[2 * k + 1, 2 * k + 1] = _lam(s, x0)
        lam1[2 * k, 2 * k] = lam1[2 * k + 1, 2 * k + 1] = _lam(1 - s, x1)
        log_g += mp.log(_g(s, x0)) + mp.log(_g(1 - s, x1))
    sig = t0 * lam0 * t0.T + t1 * lam1 * t1.T
    delta = mp.sqrt(2) * (m1 - m0)
    quad = (delta.T * mp.lu_solve(sig, delta))[0]
    return n * mp.log(2) + log_g - mp.log(mp.det(sig)) / 2 - quad / 2


def _pair_moments(kind: str, n_s, n_b, kappa, model: str):
    """Hypothesis-pair moments (v0, m0, v1, m1) built natively in mpmath."""
    n_s, n_b, kappa = mp.mpf(n_s), mp.mpf(n_b), mp.mpf(kappa)
    half = mp.mpf(1) / 2
    n_eff = n_b / (1 - kappa) if model == "legacy" else n_b
    if kind in ("vacuum", "coherent"):
        v0 = mp.diag([n_b + half] * 2)
        m0 = mp.matrix([0, 0])
        v1 = mp.diag([kappa * half + (1 - kappa) * (n_eff + half)] * 2)
        amp = mp.sqrt(2 * kappa * n_s) if kind == "coherent" else mp.mpf(0)
        m1 = mp.matrix([amp, 0])
        return v0, m0, v1, m1
    if kind == "smsv":
        r = mp.asinh(mp.sqrt(n_s))
        v0 = mp.diag([n_b + half] * 2)
        v1 = mp.diag(
            [
                kappa * mp.e ** (-2 * r) / 2 + (1 - kappa) * (n_eff + half),
                kappa * mp.e ** (2 * r) / 2 + (1 - kappa) * (n_eff + half),
            ]
        )
        return v0, mp.matrix([0, 0]), v1, mp.matrix([0, 0])
    if kind == "tmss":
        v0 = mp.diag([n_b + half, n_b + half, n_s + half, n_s + half])
        a = kappa * (n_s + half) + (1 - kappa) * (n_eff + half)
        c = mp.sqrt(kappa * n_s * (n_s + 1))
        b = n_s + half
        v1 = mp.matrix(
            [
                [a, 0, c, 0],
                [0, a, 0, -c],
                [c, 0, b, 0],
                [0, -c, 0, b],
            ]
        )
        zero4 = mp.matrix([0, 0, 0, 0])
        return v0, zero4, v1, zero4
    raise ValueError(f"unsupported transmitter kind {kind!r}")


def log_q_half(kind: str, n_s, n_b, kappa, model: str = "agnostic", dps: int = 60) -> mp.mpf:
    """High-precision log Q_{1/2} for a transmitter/target configuration."""
    with mp.workdps(dps):
        v0, m0, v1, m1 = _pair_moments(kind, n_s, n_b, kappa, model)
        return _log_q(v0, m0, v1, m1, mp.mpf(1) / 2)


def log_q_s(kind: str, n_s, n_b, kappa, s, model: str = "agnostic", dps: int = 60) -> mp.mpf:
    """High-precision log Q_s for a transmitter/target configuration."""
    with mp.workdps(dps):
        v0, m0, v1, m1 = _pair_moments(kind, n_s, n_b, kappa, model)
        return _log_q(v0, m0, v1, m1, mp.mpf(s))


def q_half_deficit(kind: str, n_s, n_b, kappa, model: str = "agnostic", dps: int = 60) -> float:
    """High-precision 1 - Q_{1/2}, taken to float only at the end."""
    with mp.workdps(dps):
        return float(-mp.expm1(log_q_half(kind, n_s, n_b, kappa, model, dps=dps)))


def exponent_ratio(n_s, n_b, kappa, model: str = "agnostic", dps: int = 60) -> float:
    """Ratio of Bhattacharyya exponents, entangled over coherent transmitter,
    at matched signal intensity."""
    with mp.workdps(dps):
        num = -log_q_half("tmss", n_s, n_b, kappa, model, dps=dps)
        den = -log_q_half("coherent", n_s, n_b, kappa, model, dps=dps)
        return float(num / den)
