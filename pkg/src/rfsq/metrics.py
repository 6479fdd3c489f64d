"""Quadrature-variance metrics of the fluorescent field.

The total normally-ordered variance of the theta-phase quadrature is

    S_theta = 1 + <sz> - (<sx> cos(theta) - <sy> sin(theta))^2,

normalised so that S_theta = -0.25 is maximal squeezing and S_theta = 0
the shot-noise limit. Over theta the variance is pi-periodic and reaches
its minimum S = 1 + <sz> - <sx>^2 - <sy>^2 = <sz>(1+<sz>) + 1 - Sigma at
the optimal phase theta_o = atan2(gamma_x, delta + g M sinPhi), which for
a pure (fully polarised) atom coincides with its Bloch-sphere longitude
modulo pi.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .bloch import BlochState, steady_state
from .errors import DegeneratePhaseError, NumericalError
from .params import AtomFieldParams, derive_rates

#: coherence below this is treated as zero and every phase ties
COHERENCE_FLOOR = 1e-20

#: purity threshold for the report flag
PURE_FLAG_TOL = 1e-6


@dataclass(frozen=True)
class SqueezingReport:
    """Steady-state squeezing summary at one parameter point.

    theta_o : optimal quadrature phase in [0, pi)
    s_theta_o : minimal variance, in [-0.25, 2]
    s_x, s_y, s_pi4 : variances of the 0, pi/2 and pi/4 quadratures
    sigma : squared Bloch-vector length
    alpha, beta : Bloch-sphere longitude and colatitude angles
    is_pure : sigma within 1e-6 of one
    degree_percent : squeezing degree of the optimal quadrature,
        100 * s_theta_o / (-0.25)
    phase_degenerate : coherence is zero, so theta_o is conventional
    """

    theta_o: float
    s_theta_o: float
    s_x: float
    s_y: float
    s_pi4: float
    sigma: float
    alpha: float
    beta: float
    is_pure: bool
    degree_percent: float
    phase_degenerate: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def variance_theta_xyz(sx, sy, sz, theta):
    """S_theta from raw Bloch components; polymorphic over arrays."""
    coherence = sx * np.cos(theta) - sy * np.sin(theta)
    return 1.0 + sz - coherence * coherence


def variance_theta(state: BlochState, theta: float) -> float:
    """Normally-ordered variance of the theta-phase quadrature."""
    return float(variance_theta_xyz(state.sx, state.sy, state.sz, theta))


def optimal_variance(state: BlochState) -> float:
    """Minimal variance over the quadrature phase."""
    value = 1.0 + state.sz - state.sx**2 - state.sy**2
    alt = state.sz * (1.0 + state.sz) + 1.0 - state.sigma
    if abs(value - alt) > 1e-14 * max(1.0, abs(value)):
        raise NumericalError(
            f"variance identity violated: {value!r} vs {alt!r}"
        )
    return value


def optimal_phase_analytic(params: AtomFieldParams) -> float:
    """Optimal quadrature phase from the closed form, reduced into [0, pi)."""
    rates = derive_rates(params)
    gm_sin = params.gamma * rates.m_corr * math.sin(params.phi)
    den = params.delta + gm_sin
    if den == 0.0:
        return math.pi / 2.0
    # gamma_x > 0 always, so atan2 already lands in (0, pi)
    return math.atan2(rates.gamma_x, den) % math.pi


def optimal_phase_numeric(state: BlochState) -> float:
    """Phase in [0, pi) maximising the squared coherence amplitude."""
    c2 = state.sx**2 + state.sy**2
    if c2 <= COHERENCE_FLOOR:
        raise DegeneratePhaseError(
            "coherence is zero; all quadrature phases tie"
        )
    return math.atan2(-state.sy, state.sx) % math.pi


def sphere_angles(params: AtomFieldParams) -> tuple[float, float]:
    """Bloch-sphere angles (alpha, beta) of the pure-state target.

    alpha equals the optimal quadrature phase before reduction into
    [0, pi); beta is the colatitude fixed by the reservoir, with the
    undriven N = 0 corner mapped to the south pole (beta = pi).
    """
    rates = derive_rates(params)
    gm_sin = params.gamma * rates.m_corr * math.sin(params.phi)
    alpha = math.atan2(rates.gamma_x, params.delta + gm_sin)
    m, n = rates.m_corr, params.n_sq
    if m + n == 0.0:
        return alpha, math.pi
    beta = math.acos(-(m - n) / (m + n))
    return alpha, beta


def pure_state_variance(n_sq: float, eta: float = 1.0) -> float:
    """Optimal-quadrature variance radiated from the pure steady state.

    Equals (N - M) / (N + M + 1/2); for an ideal reservoir this is also
    <sz>(1 + <sz>) with <sz> = (N - M)/(N + M).
    """
    m = eta * math.sqrt(n_sq * (n_sq + 1.0))
    return (n_sq - m) / (n_sq + m + 0.5)


def input_vacuum_variance(n_sq: float, eta: float = 1.0) -> float:
    """Normally-ordered quadrature variance of the squeezed-vacuum input.

    (N - M) / 2 in the same normalisation, approaching -0.25 as N grows.
    """
    m = eta * math.sqrt(n_sq * (n_sq + 1.0))
    return (n_sq - m) / 2.0


def full_report(params: AtomFieldParams) -> SqueezingReport:
    """Steady state plus every squeezing figure of merit at one point."""
    state = steady_state(params)
    theta_o = optimal_phase_analytic(params)
    degenerate = state.sx**2 + state.sy**2 <= COHERENCE_FLOOR
    s_opt = optimal_variance(state)
    alpha, beta = sphere_angles(params)
    sigma = state.sigma
    return SqueezingReport(
        theta_o=theta_o,
        s_theta_o=s_opt,
        s_x=variance_theta(state, 0.0),
        s_y=variance_theta(state, math.pi / 2.0),
        s_pi4=variance_theta(state, math.pi / 4.0),
        sigma=sigma,
        alpha=alpha,
        beta=beta,
        is_pure=sigma > 1.0 - PURE_FLAG_TOL,
        degree_percent=100.0 * s_opt / -0.25,
        phase_degenerate=bool(degenerate),
    )
