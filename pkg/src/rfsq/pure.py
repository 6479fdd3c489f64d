"""Drive settings that relax the atom into a pure steady state.

For a given squeezing phase there is a drive (omega, delta) under which
the damped, driven atom becomes fully polarised (Sigma = 1). Closed
forms exist for Phi = 0, pi/2 and (asymptotically) pi, and a full
analytic family at N = 1/8 realises Sigma = 1 together with <sz> = -1/2,
the combination that saturates the -0.25 variance floor. Away from the
closed forms, purity is located numerically by maximising Sigma over the
drive strength.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .bloch import steady_state, steady_state_grid
from .errors import (
    AsymptoticConditionWarning,
    NoPureStateError,
    PhaseOutOfRangeError,
    UnitMismatchError,
    ValidationError,
)
from .metrics import sphere_angles
from .optimize import golden_section_max
from .params import AtomFieldParams, derive_rates

#: photon number of the maximal-squeezing family
N_MAXIMAL = 0.125


@dataclass(frozen=True)
class PureStateSolution:
    """Parameters of a pure-state working point and the purity achieved.

    ``exact`` is True for the analytic conditions; the large-detuning
    condition is asymptotic and reports the purity actually reached.
    ``theta_0`` carries the optimal quadrature phase for the
    maximal-squeezing family.
    """

    phi: float
    n_sq: float
    delta: float
    omega: float
    alpha: float
    beta: float
    sigma_achieved: float
    exact: bool
    theta_0: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _require_photons(n_sq: float):
    if n_sq <= 0.0:
        raise ValidationError(f"n_sq must be positive, got {n_sq}")


def _achieved(phi, n_sq, eta, omega, delta) -> float:
    params = AtomFieldParams(n_sq=n_sq, eta=eta, phi=phi, omega=omega, delta=delta)
    return steady_state(params).sigma


def condition_phi0(n_sq: float, eta: float = 1.0) -> PureStateSolution:
    """Pure state at Phi = 0: resonant drive with omega = sqrt(M)/(sqrt(N+1)+sqrt(N))."""
    _require_photons(n_sq)
    m = eta * math.sqrt(n_sq * (n_sq + 1.0))
    omega = math.sqrt(m) / (math.sqrt(n_sq + 1.0) + math.sqrt(n_sq))
    params = AtomFieldParams(n_sq=n_sq, eta=eta, phi=0.0, omega=omega, delta=0.0)
    _, beta = sphere_angles(params)
    return PureStateSolution(
        phi=0.0,
        n_sq=n_sq,
        delta=0.0,
        omega=omega,
        alpha=math.pi / 2.0,
        beta=beta,
        sigma_achieved=_achieved(0.0, n_sq, eta, omega, 0.0),
        exact=True,
    )


def condition_phi_half_pi(n_sq: float, eta: float = 1.0) -> PureStateSolution:
    """Pure state at Phi = pi/2: delta = Gamma - gM, omega = sqrt(2M)/(sqrt(N+1)+sqrt(N))."""
    _require_photons(n_sq)
    m = eta * math.sqrt(n_sq * (n_sq + 1.0))
    delta = (n_sq + 0.5) - m
    omega = math.sqrt(2.0 * m) / (math.sqrt(n_sq + 1.0) + math.sqrt(n_sq))
    params = AtomFieldParams(n_sq=n_sq, eta=eta, phi=math.pi / 2.0,
                             omega=omega, delta=delta)
    _, beta = sphere_angles(params)
    return PureStateSolution(
        phi=math.pi / 2.0,
        n_sq=n_sq,
        delta=delta,
        omega=omega,
        alpha=math.pi / 4.0,
        beta=beta,
        sigma_achieved=_achieved(math.pi / 2.0, n_sq, eta, omega, delta),
        exact=True,
    )


def condition_phi_pi(n_sq: float, delta: float, eta: float = 1.0) -> PureStateSolution:
    """Asymptotic pure state at Phi = pi for large detuning.

    omega = 2 delta sqrt(M)/(sqrt(N+1) - sqrt(N)); purity improves as
    delta grows past Gamma - gM. Warns when delta is below ten times
    that margin. alpha = 0 is the asymptotic longitude.
    """
    _require_photons(n_sq)
    if delta <= 0.0:
        raise ValidationError(f"delta must be positive, got {delta}")
    m = eta * math.sqrt(n_sq * (n_sq + 1.0))
    margin = (n_sq + 0.5) - m
    if delta < 10.0 * margin:
        warnings.warn(
            f"delta = {delta:g} is below 10 * (Gamma - gM) = {10.0 * margin:g}; "
            "the pure-state condition is asymptotic in delta",
            AsymptoticConditionWarning,
            stacklevel=2,
        )
    omega = 2.0 * delta * math.sqrt(m) / (math.sqrt(n_sq + 1.0) - math.sqrt(n_sq))
    params = AtomFieldParams(n_sq=n_sq, eta=eta, phi=math.pi,
                             omega=omega, delta=delta)
    _, beta = sphere_angles(params)
    return PureStateSolution(
        phi=math.pi,
        n_sq=n_sq,
        delta=delta,
        omega=omega,
        alpha=0.0,
        beta=beta,
        sigma_achieved=_achieved(math.pi, n_sq, eta, omega, delta),
        exact=False,
    )


def maximal_family(phi: float, eta: float = 1.0) -> PureStateSolution:
    """Maximal-squeezing working point at N = 1/8 for a given phase.

    With t = tan(phi/2) the drive delta = t/4, omega = sqrt(3(1+t^2))/4
    yields Sigma = 1 and <sz> = -1/2 simultaneously, hence a variance of
    exactly -0.25 in the theta_0 = atan2(1, t) quadrature. The family
    diverges at phi = pi (delta -> inf with omega -> sqrt(3) * delta),
    which is reported as out of range.
    """
    if not 0.0 <= phi < 2.0 * math.pi:
        raise PhaseOutOfRangeError(f"phi must lie in [0, 2*pi), got {phi}")
    if abs(phi - math.pi) < 1e-8:
        raise PhaseOutOfRangeError(
            "the family diverges at phi = pi: delta grows without bound "
            "with omega -> sqrt(3) * delta; use the large-detuning "
            "condition instead"
        )
    if eta != 1.0:
        raise ValidationError("the maximal-squeezing family requires eta = 1")
    t = math.tan(phi / 2.0)
    delta = t / 4.0
    omega = 0.25 * math.sqrt(3.0 * (1.0 + t * t))
    theta_0 = math.atan2(1.0, t)
    params = AtomFieldParams(n_sq=N_MAXIMAL, phi=phi, omega=omega, delta=delta)
    _, beta = sphere_angles(params)
    return PureStateSolution(
        phi=phi,
        n_sq=N_MAXIMAL,
        delta=delta,
        omega=omega,
        alpha=theta_0,
        beta=beta,
        sigma_achieved=_achieved(phi, N_MAXIMAL, eta, omega, delta),
        exact=True,
        theta_0=theta_0,
    )


def sz_plus_half(params: AtomFieldParams) -> float:
    """Closed form for <sz> + 1/2, printed in gamma = 1 (ideal reservoir) units.

    [(N + 1/2 + M cosPhi) omega^2 + (2N - 1)(delta^2 + 1/4)] /
    [2 ((N + 1/2 + M cosPhi) omega^2 + (delta^2 + 1/4)(2N + 1))]

    Vanishing at the maximal-squeezing drive, where <sz> = -1/2. Refuses
    gamma != 1 and eta != 1, for which this form does not hold.
    """
    if params.gamma != 1.0:
        raise UnitMismatchError(
            f"closed form for <sz> + 1/2 requires gamma = 1, got {params.gamma}"
        )
    if params.eta != 1.0:
        raise UnitMismatchError(
            f"closed form for <sz> + 1/2 requires eta = 1, got {params.eta}"
        )
    rates = derive_rates(params)
    drive = rates.gamma_x * params.omega**2  # N + 1/2 + M cosPhi = gamma_x
    lorentz = params.delta**2 + 0.25
    n = params.n_sq
    num = drive + (2.0 * n - 1.0) * lorentz
    den = 2.0 * (drive + lorentz * (2.0 * n + 1.0))
    return num / den


def find_pure_curve(
    phi: float,
    n_sq: float,
    delta: float,
    eta: float = 1.0,
) -> tuple[float, float]:
    """Drive strength maximising purity on a fixed (phi, N, delta) slice.

    Coarse-scans Sigma over 256 drive strengths in (0, max(10, 4 delta)],
    then refines the bracketed peak by golden-section search. Returns
    (omega, sigma_max); raises NoPureStateError when the slice never
    comes within 1e-4 of purity. Points with sigma_max >= 1 - 1e-7 count
    as pure.
    """
    _require_photons(n_sq)
    omega_hi = max(10.0, 4.0 * delta)
    omegas = np.linspace(omega_hi / 256.0, omega_hi, 256)

    def sigma_of(omega):
        sx, sy, sz = steady_state_grid(1.0, n_sq, eta, phi, omega, delta)
        return sx * sx + sy * sy + sz * sz

    coarse = sigma_of(omegas)
    k = int(np.argmax(coarse))
    lo = omegas[max(k - 1, 0)]
    hi = omegas[min(k + 1, len(omegas) - 1)]
    omega_best, sigma_best = golden_section_max(
        lambda w: float(sigma_of(w)), float(lo), float(hi), xtol=1e-10
    )
    if sigma_best < 1.0 - 1e-4:
        raise NoPureStateError(
            f"no pure state on this slice; best Sigma = {sigma_best:.6f}",
            sigma_max=float(sigma_best),
        )
    return float(omega_best), float(sigma_best)


def is_pure_point(sigma: float) -> bool:
    """Purity label used by the curve finder and the CLI."""
    return sigma >= 1.0 - 1e-7
