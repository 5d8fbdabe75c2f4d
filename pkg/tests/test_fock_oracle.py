import numpy as np
import pytest

from gaussqi.divergence import fidelity, q_s_general
from gaussqi.fock_oracle import (
    FockOperator,
    apply_target_fock,
    build_state,
    choose_cutoff,
    fidelity_fock,
    hypothesis_pair_fock,
    mean_photon_number,
    partial_trace_fock,
    q_s_fock,
    thermal_fock,
    _beamsplitter_unitary,
)
from gaussqi.target import TargetConfig, make_pair
from gaussqi.transmitters import TransmitterSpec, coherent, smsv, thermal_state, tmss, vacuum


def test_thermal_build():
    op = thermal_fock(0.5, 60)
    assert op.trace_deficit < 1e-12
    assert mean_photon_number(op, 0) == pytest.approx(0.5, abs=1e-10)


def test_coherent_build():
    op = build_state(coherent(0.3), 30)
    assert mean_photon_number(op, 0) == pytest.approx(0.3, abs=1e-12)
    assert op.trace_deficit < 1e-12


def test_smsv_build_even_support():
    op = build_state(smsv(0.4), 40)
    diag = np.real(np.diag(op.matrix))
    assert np.all(diag[1::2] < 1e-30)
    assert mean_photon_number(op, 0) == pytest.approx(0.4, abs=1e-9)


def test_tmss_build():
    op = build_state(tmss(0.2), 25)
    assert mean_photon_number(op, 0) == pytest.approx(0.2, abs=1e-10)
    assert mean_photon_number(op, 1) == pytest.approx(0.2, abs=1e-10)


def test_build_rejects_small_cutoff():
    with pytest.raises(ValueError):
        build_state(coherent(5.0), 4, budget=1e-10)


def test_beamsplitter_unitary_exact_on_truncation():
    u = _beamsplitter_unitary(np.arccos(np.sqrt(0.3)), 12, 12).toarray()
    assert np.linalg.norm(u.T @ u - np.eye(144)) < 1e-9


def test_vacuum_through_empty_channel():
    st = build_state(vacuum(), 10)
    out = apply_target_fock(st, TargetConfig(kappa=0.4, n_b=0.0), 10)
    assert abs(out.matrix[0, 0] - 1.0) < 1e-12
    assert out.trace_deficit < 1e-12


def test_photon_bookkeeping_through_channel():
    st = build_state(coherent(0.3), 20)
    out = apply_target_fock(st, TargetConfig(kappa=0.2, n_b=0.4), 20)
    assert mean_photon_number(out, 0) == pytest.approx(0.2 * 0.3 + 0.8 * 0.4, abs=1e-6)


def test_smsv_quadratures_through_channel():
    n_s, kappa, n_b, d = 0.3, 0.2, 0.4, 40
    st = build_state(smsv(n_s), d)
    out = apply_target_fock(st, TargetConfig(kappa=kappa, n_b=n_b), d)
    a = np.diag(np.sqrt(np.arange(1, d)), 1)
    q = (a + a.T) / np.sqrt(2)
    p = (a - a.T) / (1j * np.sqrt(2))
    r = np.arcsinh(np.sqrt(n_s))
    vq = np.trace(out.matrix @ (q @ q)).real
    vp = np.trace(out.matrix @ (p @ p)).real
    assert vq == pytest.approx((kappa * np.exp(-2 * r) + (1 - kappa) * (2 * n_b + 1)) / 2, abs=1e-6)
    assert vp == pytest.approx((kappa * np.exp(2 * r) + (1 - kappa) * (2 * n_b + 1)) / 2, abs=1e-6)


def test_apply_target_rejects_legacy():
    st = build_state(vacuum(), 8)
    with pytest.raises(ValueError):
        apply_target_fock(st, TargetConfig(kappa=0.2, n_b=0.4, model="legacy"), 8)


def test_q_s_fock_self_overlap_is_trace():
    op = thermal_fock(0.5, 40)
    assert q_s_fock(op, op, 0.4) == pytest.approx(1.0 - op.trace_deficit, abs=1e-10)
    # continuity spot-check towards s = 1
    sig = thermal_fock(0.8, 40)
    assert q_s_fock(op, sig, 0.999) == pytest.approx(1.0 - op.trace_deficit, abs=2e-3)


def test_q_s_fock_matches_gaussian_thermal():
    a = q_s_fock(thermal_fock(0.3, 100), thermal_fock(0.6, 100), 0.5)
    b = q_s_general(thermal_state(0.3), thermal_state(0.6), 0.5)
    assert abs(a - b) < 1e-8


def test_q_s_alt_oracle_anchor():
    from gaussqi.divergence import q_s_alt

    a = q_s_fock(thermal_fock(1.0, 120), thermal_fock(2.0, 120), 0.5)
    b = q_s_general(thermal_state(1.0), thermal_state(2.0), 0.5)
    c = q_s_alt(thermal_state(1.0), thermal_state(2.0), 0.5)
    assert abs(a - b) < 1e-8
    assert abs(a - c) < 1e-8


def test_fidelity_fock_anchors():
    op = thermal_fock(0.4, 60)
    assert fidelity_fock(op, op) == pytest.approx(1.0, abs=1e-9)
    a = fidelity_fock(thermal_fock(0.2, 80), thermal_fock(0.5, 80))
    b = fidelity(thermal_state(0.2), thermal_state(0.5))
    assert abs(a - b) < 1e-8
    # orthogonal number states
    zero = np.zeros((10, 10), dtype=complex)
    zero[0, 0] = 1.0
    one = np.zeros((10, 10), dtype=complex)
    one[1, 1] = 1.0
    f = fidelity_fock(
        FockOperator(zero, 1, 10, 0.0), FockOperator(one, 1, 10, 0.0)
    )
    assert abs(f) < 1e-12


def test_partial_trace_fock_tmss_memory():
    op = build_state(tmss(0.3), 20)
    mem = partial_trace_fock(op, keep={1})
    ref = thermal_fock(0.3, 20)
    assert np.abs(mem.matrix - ref.matrix).max() < 1e-12


def test_oracle_agreement_sample():
    # one point per transmitter kind; the dense grid runs in the acceptance suite
    cfg = TargetConfig(kappa=0.2, n_b=0.3)
    for kind, n_s, d in [("vacuum", 0.0, 20), ("coherent", 0.4, 24), ("smsv", 0.4, 36), ("tmss", 0.4, 22)]:
        spec = TransmitterSpec(kind, n_s)
        rho0, rho1 = hypothesis_pair_fock(spec, cfg, d)
        pair = make_pair(spec, cfg)
        for s in (0.3, 0.7):
            assert abs(q_s_fock(rho0, rho1, s) - q_s_general(pair.rho0, pair.rho1, s)) < 1e-6


def test_oracle_zero_background_pure_overlap():
    # at N_B = 0 both hypotheses are pure and the overlap is e^{-kappa N_S}
    kappa, n_s = 0.2, 0.3
    rho0, rho1 = hypothesis_pair_fock(coherent(n_s), TargetConfig(kappa=kappa, n_b=0.0), 24)
    for s in (0.3, 0.5, 0.7):
        assert abs(q_s_fock(rho0, rho1, s) - np.exp(-kappa * n_s)) < 1e-8


def test_legacy_pair_agreement():
    cfg = TargetConfig(kappa=0.25, n_b=0.4, model="legacy")
    rho0, rho1 = hypothesis_pair_fock(smsv(0.4), cfg, 40)
    pair = make_pair(smsv(0.4), cfg)
    assert abs(q_s_fock(rho0, rho1, 0.5) - q_s_general(pair.rho0, pair.rho1, 0.5)) < 1e-9


def test_choose_cutoff():
    d = choose_cutoff(vacuum(), TargetConfig(kappa=0.2, n_b=0.0), tol=1e-10)
    assert d == 2
    d = choose_cutoff(coherent(0.3), TargetConfig(kappa=0.2, n_b=0.3), tol=1e-8)
    assert 2 < d <= 128
    with pytest.raises(ValueError):
        choose_cutoff(tmss(0.5), TargetConfig(kappa=0.2, n_b=20.0), tol=1e-10)


def test_fock_operator_validation():
    with pytest.raises(ValueError):
        FockOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), 1, 2, 0.0)  # not Hermitian
    with pytest.raises(ValueError):
        FockOperator(np.eye(3), 1, 2, 0.0)  # wrong shape
