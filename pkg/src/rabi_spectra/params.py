"""Physical parameters, validation, normalization and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    LambdaZeroError,
    NonPositiveOmegaError,
    SqueezeTooStrongError,
)

#: default relative tolerance (in units of omega) for regime classification
CLASSIFY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the two-level + squeezed-mode Hamiltonian.

    omega    mode frequency (> 0)
    delta    half level-splitting
    epsilon  spontaneous-transition bias
    g        linear coupling
    lam      squeezing (two-photon) coupling

    A real discrete spectrum additionally needs |2*lam| < omega; use
    :func:`validate_params` to enforce both invariants.  Direct construction
    is allowed so diagnostics (e.g. the divergence guard of the Fock oracle)
    can probe the forbidden region.
    """

    omega: float
    delta: float
    epsilon: float
    g: float
    lam: float

    def mirrored(self) -> "ModelParams":
        """Parameters of the other spin sector: (eps, g, lam) -> -(eps, g, lam)."""
        return ModelParams(self.omega, self.delta, -self.epsilon, -self.g, -self.lam)


def validate_params(omega: float, delta: float, epsilon: float,
                    g: float, lam: float) -> ModelParams:
    """Validate and build :class:`ModelParams`.

    Raises NonPositiveOmegaError or SqueezeTooStrongError.
    """
    for name, v in (("omega", omega), ("delta", delta), ("epsilon", epsilon),
                    ("g", g), ("lam", lam)):
        if not math.isfinite(v):
            raise NonPositiveOmegaError(f"{name} must be finite, got {v!r}")
    if omega <= 0:
        raise NonPositiveOmegaError(f"omega must be > 0, got {omega}")
    if abs(2.0 * lam) >= omega:
        raise SqueezeTooStrongError(
            f"|2*lambda| = {abs(2 * lam)} >= omega = {omega}: "
            "sqrt(omega^2 - 4 lambda^2) is not real positive")
    return ModelParams(omega, delta, epsilon, g, lam)


@dataclass(frozen=True)
class NormalizedParams:
    """Dimensionless parameters, each physical quantity divided by lam.

    lam_bar == 1 by construction; the map is invertible for lam != 0.
    """

    omega_bar: float
    delta_bar: float
    epsilon_bar: float
    g_bar: float
    e_bar: float

    lam_bar: float = 1.0


def normalize_params(p: ModelParams, energy: float) -> NormalizedParams:
    """Divide (omega, delta, epsilon, g, E) by lam.  Requires lam != 0."""
    if p.lam == 0.0:
        raise LambdaZeroError("normalization divides by lambda")
    return NormalizedParams(p.omega / p.lam, p.delta / p.lam,
                            p.epsilon / p.lam, p.g / p.lam, energy / p.lam)


class RegimeTag(enum.Enum):
    UNCOUPLED = "uncoupled"      # delta = 0
    ASYMMETRIC = "asymmetric"    # lam = 0
    TWO_PHOTON = "two_photon"    # g = 0
    GENERAL = "general"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    tol: float


def classify_regime(p: ModelParams, tol: float = CLASSIFY_TOL) -> Regime:
    """Deterministic routing by which couplings vanish (tol in units of omega)."""
    t = tol * p.omega
    if abs(p.delta) <= t:
        tag = RegimeTag.UNCOUPLED
    elif abs(p.lam) <= t:
        tag = RegimeTag.ASYMMETRIC
    elif abs(p.g) <= t:
        tag = RegimeTag.TWO_PHOTON
    else:
        tag = RegimeTag.GENERAL
    return Regime(tag, tol)
