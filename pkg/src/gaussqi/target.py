"""Target models and hypothesis-pair construction.

Two conventions for the thermal background are supported.  In the
"agnostic" model the environment occupation N_B is a property of the scene
alone: the target is a beamsplitter of reflectivity kappa mixing the
transmitted mode with a bare thermal mode.  The "legacy" model substitutes
N_B -> N_B / (1 - kappa) so that the reflected noise is kappa-independent,
which makes a vacuum transmitter unable to see the target at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import (
    GaussianState,
    apply_unitary,
    beamsplitter,
    partial_trace,
    tensor,
)
from .transmitters import TransmitterSpec, probe_state, thermal_state

MODELS = ("agnostic", "legacy")

# Transmitted mode is always the first mode of the probe; memory modes follow.
TRANSMITTED_MODE = 0


@dataclass(frozen=True)
class TargetConfig:
    """Reflectivity kappa, background occupation n_b, and model convention."""

    kappa: float
    n_b: float
    model: str = "agnostic"

    def __post_init__(self):
        if not np.isfinite(self.kappa) or not 0.0 <= self.kappa < 1.0:
            raise ValueError(f"kappa must lie in [0, 1), got {self.kappa}")
        if not np.isfinite(self.n_b) or self.n_b < 0:
            raise ValueError(f"n_b must be a finite non-negative number, got {self.n_b}")
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")

    @property
    def effective_n_b(self) -> float:
        """Background occupation fed into the beamsplitter dilation."""
        if self.model == "legacy":
            return self.n_b / (1.0 - self.kappa)
        return self.n_b


@dataclass(frozen=True, eq=False)
class HypothesisPair:
    """The two hypotheses: rho0 = target absent, rho1 = target present."""

    rho0: GaussianState
    rho1: GaussianState
    config: TargetConfig
    transmitter: TransmitterSpec
    degenerate: bool = False


def dilated_present(probe: GaussianState, cfg: TargetConfig) -> GaussianState:
    """Joint probe+environment state after reflection, before tracing.

    Appends the thermal environment as the last mode and applies the
    beamsplitter between the transmitted mode and the environment.  For the
    two-mode entangled probe this exposes the full 6x6 covariance.
    """
    if not 0.0 < cfg.kappa < 1.0:
        raise ValueError(f"target-present requires kappa in (0, 1), got {cfg.kappa}")
    env = thermal_state(cfg.effective_n_b)
    joint = tensor(probe, env)
    u = beamsplitter(cfg.kappa, TRANSMITTED_MODE, probe.n_modes, probe.n_modes + 1)
    return apply_unitary(joint, u)


def target_present(probe: GaussianState, cfg: TargetConfig) -> GaussianState:
    """State received under the 'target present' hypothesis.

    Built by the dilation route: tensor a thermal mode, beamsplit with the
    transmitted mode, trace out the environment.
    """
    out = dilated_present(probe, cfg)
    return partial_trace(out, keep=range(probe.n_modes))


def attenuator_closed_form(probe: GaussianState, kappa: float, n_b: float) -> GaussianState:
    """Single-mode thermal attenuator in closed form.

    mean -> sqrt(kappa) mean, cov -> kappa cov + (1 - kappa)(n_b + 1/2) I.
    Equivalent to the dilation route; kept as an independent expression for
    cross-checking.
    """
    if probe.n_modes != 1:
        raise ValueError("closed form applies to single-mode probes only")
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must lie in (0, 1), got {kappa}")
    if n_b < 0:
        raise ValueError(f"n_b must be non-negative, got {n_b}")
    cov = kappa * probe.cov + (1.0 - kappa) * (n_b + 0.5) * np.eye(2)
    return GaussianState(mean=np.sqrt(kappa) * probe.mean, cov=cov)


def target_absent(probe: GaussianState, cfg: TargetConfig) -> GaussianState:
    """State received under the 'target absent' hypothesis.

    The transmitted mode is fully replaced by the thermal background; any
    memory modes keep their reduced state.  Identical for both models.
    """
    background = thermal_state(cfg.n_b)
    if probe.n_modes == 1:
        return background
    memory = partial_trace(probe, keep=range(1, probe.n_modes))
    return tensor(background, memory)


def make_pair(spec: TransmitterSpec, cfg: TargetConfig) -> HypothesisPair:
    """Build the hypothesis pair for a transmitter/target configuration.

    A legacy-model vacuum transmitter yields rho0 == rho1; the pair is
    returned flagged as degenerate rather than rejected, so downstream code
    can exhibit the ill-posedness instead of crashing.
    """
    probe = probe_state(spec)
    rho0 = target_absent(probe, cfg)
    rho1 = target_present(probe, cfg)
    return HypothesisPair(
        rho0=rho0,
        rho1=rho1,
        config=cfg,
        transmitter=spec,
        degenerate=rho0.isclose(rho1, atol=1e-13),
    )
