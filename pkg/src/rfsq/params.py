"""Physical parameters and derived decay rates.

All rates and frequencies are expressed in units of the spontaneous decay
rate gamma, which defaults to 1. The squeezed reservoir is broadband and
characterised by its photon number N, the two-photon correlation strength
M = eta * sqrt(N(N+1)) with ideality eta in [0, 1], and the relative phase
Phi = 2*phi_l - phi_s between the driving laser and the squeezed vacuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

TWO_PI = 2.0 * math.pi


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class AtomFieldParams:
    """Inputs for a coherently driven two-level atom in a squeezed vacuum.

    Attributes
    ----------
    gamma : spontaneous decay rate, the global frequency unit (> 0)
    n_sq : squeezed photon number N (>= 0)
    eta : squeezing-correlation ideality (0 <= eta <= 1; 1 is ideal)
    phi : relative phase Phi = 2*phi_l - phi_s, radians
    omega : Rabi frequency, in units of gamma (>= 0)
    delta : detuning of the atom from the laser, in units of gamma
    phi_l : laser phase, radians (optional, default 0)
    phi_s : squeeze phase, radians (optional; when given, it must be
        consistent with phi and phi_l modulo 2*pi)
    """

    gamma: float = 1.0
    n_sq: float = 0.0
    eta: float = 1.0
    phi: float = 0.0
    omega: float = 0.0
    delta: float = 0.0
    phi_l: float = 0.0
    phi_s: float | None = None

    def __post_init__(self):
        for name in ("gamma", "n_sq", "eta", "phi", "omega", "delta", "phi_l"):
            _require_finite(name, getattr(self, name))
        if self.gamma <= 0.0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")
        if self.n_sq < 0.0:
            raise ValidationError(f"n_sq must be non-negative, got {self.n_sq}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValidationError(f"eta must lie in [0, 1], got {self.eta}")
        if self.omega < 0.0:
            raise ValidationError(f"omega must be non-negative, got {self.omega}")
        if self.phi_s is not None:
            _require_finite("phi_s", self.phi_s)
            mismatch = self.phi - (2.0 * self.phi_l - self.phi_s)
            # compare modulo 2*pi, mapping the difference into (-pi, pi]
            mismatch = mismatch - TWO_PI * round(mismatch / TWO_PI)
            if abs(mismatch) >= 1e-12:
                raise ValidationError(
                    "phi is inconsistent with 2*phi_l - phi_s "
                    f"(mismatch {mismatch:.3e} rad)"
                )


@dataclass(frozen=True)
class DerivedRates:
    """Decay rates of the Bloch components in the squeezed reservoir.

    m_corr is dimensionless; the remaining rates carry units of gamma.
    gamma_x and gamma_y are the decay rates of the in-phase and
    out-of-phase atomic polarisation quadratures, gamma_z that of the
    population inversion; gamma_x + gamma_y = gamma_z = 2 * big_gamma.
    """

    m_corr: float
    big_gamma: float
    gamma_x: float
    gamma_y: float
    gamma_z: float


def derive_rates(params: AtomFieldParams) -> DerivedRates:
    """Compute M, Gamma and the quadrature decay rates from the inputs."""
    m = params.eta * math.sqrt(params.n_sq * (params.n_sq + 1.0))
    big = params.gamma * (params.n_sq + 0.5)
    gm_cos = params.gamma * m * math.cos(params.phi)
    return DerivedRates(
        m_corr=m,
        big_gamma=big,
        gamma_x=big + gm_cos,
        gamma_y=big - gm_cos,
        gamma_z=2.0 * big,
    )
