"""Pure-state drive conditions and the maximal-squeezing family."""

import math
import warnings

import numpy as np
import pytest

from rfsq import (
    AtomFieldParams,
    condition_phi0,
    condition_phi_half_pi,
    condition_phi_pi,
    find_pure_curve,
    maximal_family,
    minimize_variance,
    optimal_variance,
    steady_state,
    sz_plus_half,
    variance_theta,
)
from rfsq.errors import (
    AsymptoticConditionWarning,
    NoPureStateError,
    PhaseOutOfRangeError,
    UnitMismatchError,
    ValidationError,
)


def params_of(sol):
    return AtomFieldParams(n_sq=sol.n_sq, phi=sol.phi,
                           omega=sol.omega, delta=sol.delta)


class TestConditionZeroPhase:
    def test_special_photon_number(self):
        sol = condition_phi0(0.125)
        assert sol.omega == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)
        assert sol.delta == 0.0
        assert sol.alpha == math.pi / 2.0
        assert sol.sigma_achieved == pytest.approx(1.0, abs=1e-9)

    def test_half_photon(self):
        sol = condition_phi0(0.5)
        assert sol.omega == pytest.approx(0.4817165220011426, abs=1e-12)
        assert sol.sigma_achieved == pytest.approx(1.0, abs=1e-9)

    def test_weak_reservoir_limit(self):
        assert condition_phi0(1e-10).omega < 1e-2
        with pytest.raises(ValidationError):
            condition_phi0(0.0)


class TestConditionQuarterPhase:
    def test_special_photon_number(self):
        sol = condition_phi_half_pi(0.125)
        assert sol.delta == pytest.approx(0.25, abs=1e-15)
        assert sol.omega == pytest.approx(math.sqrt(6.0) / 4.0, abs=1e-15)
        assert sol.alpha == math.pi / 4.0
        assert sol.sigma_achieved == pytest.approx(1.0, abs=1e-9)

    def test_small_photon_number(self):
        sol = condition_phi_half_pi(0.05)
        assert sol.delta == pytest.approx(0.3208712152522081, abs=1e-12)
        assert sol.omega == pytest.approx(0.5422945015811449, abs=1e-12)
        assert sol.sigma_achieved == pytest.approx(1.0, abs=1e-9)

    def test_weak_reservoir_limit(self):
        sol = condition_phi_half_pi(1e-10)
        assert sol.delta == pytest.approx(0.5, abs=1e-4)
        assert sol.omega < 1e-2


class TestConditionOpposedPhase:
    def test_special_photon_number(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            sol = condition_phi_pi(0.125, 12.5)
        # at N = 1/8 the condition reduces to omega = sqrt(3) * delta
        assert sol.omega == pytest.approx(12.5 * math.sqrt(3.0), rel=1e-12)
        assert sol.omega == pytest.approx(21.6506, abs=1e-4)
        assert not sol.exact

    def test_moderate_photon_number(self):
        sol = condition_phi_pi(0.1, 10.0)
        assert sol.omega == pytest.approx(15.72253128275022, rel=1e-12)

    def test_purity_is_asymptotic_in_detuning(self):
        sigmas = [condition_phi_pi(0.125, d).sigma_achieved
                  for d in (12.5, 100.0, 1000.0)]
        assert sigmas == sorted(sigmas)
        assert sigmas[0] == pytest.approx(1.0, abs=2e-3)
        assert sigmas[2] == pytest.approx(1.0, abs=2e-7)

    def test_warns_below_the_asymptotic_margin(self):
        with pytest.warns(AsymptoticConditionWarning):
            condition_phi_pi(0.125, 2.0)

    def test_rejects_nonpositive_detuning(self):
        with pytest.raises(ValidationError):
            condition_phi_pi(0.125, 0.0)


class TestMaximalFamily:
    def test_quarter_phase_member(self):
        sol = maximal_family(math.pi / 2.0)
        assert sol.delta == pytest.approx(0.25, abs=1e-15)
        assert sol.omega == pytest.approx(math.sqrt(6.0) / 4.0, abs=1e-15)
        assert sol.theta_0 == pytest.approx(math.pi / 4.0, abs=1e-15)

    def test_zero_phase_limit_recovers_resonant_condition(self):
        sol = maximal_family(0.0)
        assert sol.delta == 0.0
        assert sol.omega == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)
        assert sol.theta_0 == pytest.approx(math.pi / 2.0)

    def test_steep_member(self):
        phi = 2.0 * math.atan(4.0)
        sol = maximal_family(phi)
        assert sol.delta == pytest.approx(1.0, abs=1e-12)
        assert sol.omega == pytest.approx(math.sqrt(51.0) / 4.0, abs=1e-12)
        assert sol.theta_0 == pytest.approx(math.atan(0.25), abs=1e-12)

    def test_floor_is_reached_along_the_family(self):
        for phi in np.linspace(0.05, math.pi - 0.05, 100):
            sol = maximal_family(float(phi))
            state = steady_state(params_of(sol))
            assert abs(state.sigma - 1.0) < 1e-9
            assert abs(state.sz + 0.5) < 1e-9
            assert abs(optimal_variance(state) + 0.25) < 1e-9
            assert abs(variance_theta(state, sol.theta_0) + 0.25) < 1e-9

    def test_reflex_phases_are_supported(self):
        sol = maximal_family(3.0 * math.pi / 2.0)
        assert sol.delta == pytest.approx(-0.25, abs=1e-12)
        state = steady_state(params_of(sol))
        assert abs(state.sigma - 1.0) < 1e-9
        assert abs(variance_theta(state, sol.theta_0) + 0.25) < 1e-9

    def test_divergent_phase_is_rejected(self):
        with pytest.raises(PhaseOutOfRangeError) as err:
            maximal_family(math.pi)
        assert "sqrt(3)" in str(err.value)
        for phi in (-0.1, 2.0 * math.pi, 7.0):
            with pytest.raises(PhaseOutOfRangeError):
                maximal_family(phi)


class TestSzPlusHalf:
    def test_vanishes_at_the_maximal_point(self):
        value = sz_plus_half(AtomFieldParams(
            n_sq=0.125, phi=0.0, delta=0.0, omega=math.sqrt(3.0) / 4.0))
        assert value == pytest.approx(0.0, abs=1e-15)

    def test_undriven_reduction(self):
        # omega = 0 leaves (2N-1)/(2(2N+1)), positive above N = 1/2
        for n, delta in ((0.6, 0.0), (0.6, 3.0), (0.2, 1.0)):
            value = sz_plus_half(AtomFieldParams(n_sq=n, omega=0.0, delta=delta))
            assert value == pytest.approx(
                (2.0 * n - 1.0) / (2.0 * (2.0 * n + 1.0)), rel=1e-14)
        assert sz_plus_half(AtomFieldParams(n_sq=0.6, omega=0.0)) > 0.0

    def test_ground_state_corner(self):
        assert sz_plus_half(AtomFieldParams()) == pytest.approx(-0.5, abs=1e-15)

    def test_matches_solver_over_sweep(self):
        rng = np.random.default_rng(43)
        for _ in range(200):
            params = AtomFieldParams(
                n_sq=rng.uniform(0.0, 2.0),
                phi=rng.uniform(0.0, 2.0 * math.pi),
                omega=rng.uniform(0.0, 30.0),
                delta=rng.uniform(-30.0, 30.0),
            )
            expected = steady_state(params).sz + 0.5
            assert sz_plus_half(params) == pytest.approx(expected, abs=1e-10)

    def test_refuses_other_units(self):
        with pytest.raises(UnitMismatchError):
            sz_plus_half(AtomFieldParams(gamma=2.0, omega=1.0))
        with pytest.raises(UnitMismatchError):
            sz_plus_half(AtomFieldParams(eta=0.5, n_sq=0.5, omega=1.0))


class TestFindPureCurve:
    def test_recovers_quarter_phase_condition(self):
        omega, sigma = find_pure_curve(math.pi / 2.0, 0.125, 0.25)
        assert omega == pytest.approx(math.sqrt(6.0) / 4.0, abs=1e-5)
        assert sigma >= 1.0 - 1e-7

    def test_recovers_resonant_condition(self):
        omega, sigma = find_pure_curve(0.0, 0.125, 0.0)
        assert omega == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-5)
        assert sigma >= 1.0 - 1e-7

    def test_detuned_resonant_phase_has_no_pure_state(self):
        with pytest.raises(NoPureStateError) as err:
            find_pure_curve(0.0, 0.125, 5.0)
        assert err.value.sigma_max < 0.7


def test_pure_points_lie_on_the_reported_sphere_angles():
    # at a pure point the steady vector is the fully polarised state
    # (-cos(alpha) sin(beta), sin(alpha) sin(beta), cos(beta))
    sols = [condition_phi0(0.3), condition_phi_half_pi(0.3),
            condition_phi_half_pi(1.5), maximal_family(0.8 * math.pi),
            maximal_family(0.3)]
    for sol in sols:
        state = steady_state(params_of(sol))
        expected = np.array([
            -math.cos(sol.alpha) * math.sin(sol.beta),
            math.sin(sol.alpha) * math.sin(sol.beta),
            math.cos(sol.beta),
        ])
        assert np.abs(state.as_array() - expected).max() < 1e-8


def test_floor_is_exclusive_to_the_special_photon_number():
    # away from N = 1/8 the best variance stays strictly above -0.25
    box = ((0.0, 3.0), (0.0, 2.0))
    for n in (0.05, 0.25, 0.5):
        report = minimize_variance(n, math.pi / 2.0, box)
        assert report.value > -0.25 + 1e-4
    report = minimize_variance(0.125, math.pi / 2.0, box)
    assert report.value == pytest.approx(-0.25, abs=1e-9)
