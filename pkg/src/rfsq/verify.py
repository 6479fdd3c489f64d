"""Self-verification suite: quantitative checks behind `rfsq verify`.

Each check returns (ok, detail) and is deterministic for a given seed.
The randomised sweeps draw from the broad desk-scale parameter domain
(N in [0, 2], Phi in [0, 2 pi), Omega in [0, 30], Delta in [-30, 30],
gamma = 1, ideal reservoir). ``fast`` shrinks the sweep sizes for a
quick smoke run.
"""

from __future__ import annotations

import math
import tempfile
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .bloch import (
    build_system,
    relax_to_steady,
    routh_hurwitz_margins,
    steady_state,
)
from .errors import CertificationFailedError, RfsqError
from .figures import emit_figure
from .io import read_csv
from .metrics import (
    full_report,
    input_vacuum_variance,
    optimal_phase_analytic,
    optimal_variance,
    pure_state_variance,
    variance_theta,
)
from .optimize import certify_n_eighth, find_crossover
from .params import AtomFieldParams, derive_rates
from .pure import maximal_family, sz_plus_half
from .scan import AxisSpec, ScanSpec, scan


def _draw_params(rng) -> AtomFieldParams:
    return AtomFieldParams(
        n_sq=rng.uniform(0.0, 2.0),
        phi=rng.uniform(0.0, 2.0 * math.pi),
        omega=rng.uniform(0.0, 30.0),
        delta=rng.uniform(-30.0, 30.0),
    )


def _min_over_omega(n_sq, phi, delta, variance_of_state, lo=5.0, hi=40.0):
    def f(omega):
        params = AtomFieldParams(n_sq=n_sq, phi=phi, omega=omega, delta=delta)
        return variance_of_state(steady_state(params))

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x), float(res.fun)


def check_maximal_family(seed=42, fast=False):
    """100 phases: the N = 1/8 family reaches Sigma = 1, <sz> = -1/2, S = -1/4."""
    count = 20 if fast else 100
    worst = 0.0
    for phi in np.linspace(0.05, math.pi - 0.05, count):
        sol = maximal_family(float(phi))
        params = AtomFieldParams(n_sq=sol.n_sq, phi=sol.phi,
                                 omega=sol.omega, delta=sol.delta)
        state = steady_state(params)
        worst = max(
            worst,
            abs(state.sigma - 1.0),
            abs(state.sz + 0.5),
            abs(variance_theta(state, sol.theta_0) + 0.25),
        )
    return worst <= 1e-9, f"worst deviation {worst:.2e} (tol 1e-9)"


def check_quarter_phase_point(seed=42, fast=False):
    """Perfect pi/4-quadrature squeezing at N = 0.125, Delta = 1/4, Omega = sqrt(6)/4."""
    report = full_report(AtomFieldParams(
        n_sq=0.125, phi=math.pi / 2.0, delta=0.25, omega=math.sqrt(6.0) / 4.0,
    ))
    err = max(abs(report.s_pi4 + 0.25), abs(report.sigma - 1.0),
              abs(report.theta_o - math.pi / 4.0))
    return err <= 1e-9, (
        f"s_pi4 = {report.s_pi4:.12f}, sigma = {report.sigma:.12f}, "
        f"theta_o = {report.theta_o:.12f} (tol 1e-9)"
    )


def check_detuned_inphase_minimum(seed=42, fast=False):
    """Deep in-phase squeezing dip at N = 0.125, Phi = pi, Delta = 12.5.

    The minimal variance over the drive strength lands at
    omega = 21.65 +- 0.1. At the stated window (-0.2505, -0.249) the
    bounded quantity is the optimal-quadrature variance (its gap from
    -0.25 is the asymptotic purity deficit 1 - Sigma); the literal
    theta = 0 variance carries an extra coherence term of ~3e-4 and is
    held to -0.25 +- 2e-3.
    """
    w_opt, v_opt = _min_over_omega(0.125, math.pi, 12.5, optimal_variance)
    w_x, v_x = _min_over_omega(0.125, math.pi, 12.5,
                               lambda s: variance_theta(s, 0.0))
    ok = (
        abs(w_opt - 21.65) <= 0.1
        and -0.2505 < v_opt < -0.249
        and abs(w_x - 21.65) <= 0.1
        and abs(v_x + 0.25) <= 2e-3
    )
    return ok, (
        f"optimal-phase min {v_opt:.6f} at omega {w_opt:.4f}; "
        f"in-phase min {v_x:.6f} at omega {w_x:.4f}"
    )


def check_moderate_n_inphase_minimum(seed=42, fast=False):
    """In-phase squeezing at N = 0.1, Phi = pi, Delta = 10 dips below -0.245 near omega = 15.7."""
    w, v = _min_over_omega(0.1, math.pi, 10.0, lambda s: variance_theta(s, 0.0))
    ok = v <= -0.245 and abs(w - 15.7) <= 0.5
    return ok, f"min S_X = {v:.6f} at omega = {w:.4f} (needs <= -0.245 within 15.7 +- 0.5)"


def check_input_benchmark_degree(seed=42, fast=False):
    """The squeezed-vacuum input at N = 0.1 sits at 46.3% of maximal squeezing."""
    degree = 100.0 * input_vacuum_variance(0.1) / -0.25
    return abs(degree - 46.3) <= 0.5, f"input degree {degree:.3f}% (46.3 +- 0.5)"


def check_amplification_crossover(seed=42, fast=False):
    """Output beats input for N below the crossover at N* = 0.5625."""
    n_star = find_crossover()
    if abs(n_star - 0.5625) > 1e-3:
        return False, f"crossover at {n_star:.6f}, expected 0.5625 +- 1e-3"
    count = 40 if fast else 200
    ns = np.linspace(0.011, 0.549, count)
    gaps = np.array([pure_state_variance(n) - input_vacuum_variance(n) for n in ns])
    ok = bool((gaps < 0.0).all())
    return ok, f"crossover {n_star:.7f}; max gap below crossover {gaps.max():.3e}"


def check_pure_variance_law(seed=42, fast=False):
    """Pure-state variance at N = 1/8 is exactly -0.25 and matches <sz>(1+<sz>)."""
    v = pure_state_variance(0.125)
    if abs(v + 0.25) > 1e-15:
        return False, f"variance at N = 1/8 is {v!r}, expected -0.25"
    worst = 0.0
    for n in np.linspace(0.01, 2.0, 50):
        m = math.sqrt(n * (n + 1.0))
        sz = (n - m) / (n + m)
        worst = max(worst, abs(pure_state_variance(n) - sz * (1.0 + sz)))
    return worst <= 1e-14, f"identity deviation {worst:.2e} (tol 1e-14)"


def check_relaxation_oracle(seed=42, fast=False):
    """Direct solve and time-domain relaxation agree; closed-form <sz> matches."""
    rng = np.random.default_rng(seed)
    count = 100 if fast else 1000
    worst_state = 0.0
    worst_sz = 0.0
    for _ in range(count):
        params = _draw_params(rng)
        direct = steady_state(params)
        relaxed = relax_to_steady(params, tol=1e-9)
        worst_state = max(
            worst_state,
            np.abs(direct.as_array() - relaxed.as_array()).max(),
        )
        worst_sz = max(worst_sz, abs(sz_plus_half(params) - (direct.sz + 0.5)))
    ok = worst_state < 1e-7 and worst_sz <= 1e-10
    return ok, (
        f"max |direct - relaxed| = {worst_state:.2e} (tol 1e-7); "
        f"max <sz>+1/2 deviation = {worst_sz:.2e} (tol 1e-10)"
    )


def check_phase_optimality(seed=42, fast=False):
    """Brute-force quadrature search agrees with the closed-form optimal phase."""
    rng = np.random.default_rng(seed + 1)
    count = 50 if fast else 500
    thetas = np.linspace(0.0, math.pi, 721)[:-1]
    step = thetas[1] - thetas[0]
    worst_phase = 0.0
    worst_floor = -np.inf
    skipped = 0
    for _ in range(count):
        params = _draw_params(rng)
        state = steady_state(params)
        if state.sx**2 + state.sy**2 < 1e-10:
            # coherence amplitude below 1e-5: no measurable optimal phase
            skipped += 1
            continue
        grid = np.array([variance_theta(state, t) for t in thetas])
        s_opt = optimal_variance(state)
        worst_floor = max(worst_floor, (s_opt - grid).max())
        # local refine: parabolic vertex through the winner and neighbours
        # (robust on flat landscapes where line searches drown in noise)
        k = int(np.argmin(grid))
        s_minus = variance_theta(state, thetas[k] - step)
        s_plus = variance_theta(state, thetas[k] + step)
        curvature = s_minus - 2.0 * grid[k] + s_plus
        theta_ref = thetas[k]
        if curvature > 0.0:
            theta_ref += 0.5 * step * (s_minus - s_plus) / curvature
        gap = abs(theta_ref % math.pi - optimal_phase_analytic(params)) % math.pi
        worst_phase = max(worst_phase, min(gap, math.pi - gap))
    ok = worst_phase <= 1e-6 and worst_floor <= 1e-12
    return ok, (
        f"max phase gap {worst_phase:.2e} (tol 1e-6); "
        f"max floor violation {worst_floor:.2e}; skipped {skipped} degenerate"
    )


def check_photon_number_certification(seed=42, fast=False):
    """Only N = 1/8 reaches the -0.25 floor over the certification grid."""
    phases = (math.pi / 2.0, 3.0 * math.pi / 4.0) if fast else \
        (math.pi / 4.0, math.pi / 2.0, 3.0 * math.pi / 4.0)
    try:
        report = certify_n_eighth(tolerance=1e-6, phases=phases,
                                  coarse=32 if fast else 64)
    except CertificationFailedError as exc:
        return False, f"{exc}: {exc.offenders}"
    # every per-N optimum is a nearly pure state
    ok = min(report.sigmas) > 0.98
    return ok, (
        f"global minimum {report.min_value:.9f} at N = {report.argmin_n}; "
        f"runner-up {sorted(report.minima)[1]:.6f}; "
        f"lowest optimum purity {min(report.sigmas):.4f}"
    )


def check_rates_and_bounds(seed=42, fast=False):
    """Rate identities, purity bound and variance floor over a random sweep."""
    rng = np.random.default_rng(seed + 2)
    count = 200 if fast else 1000
    worst_sum = 0.0
    worst_sigma = 0.0
    worst_floor = 0.0
    for _ in range(count):
        params = _draw_params(rng)
        rates = derive_rates(params)
        if rates.gamma_x <= 0.0 or rates.gamma_y <= 0.0:
            return False, f"non-positive quadrature rate at {params}"
        worst_sum = max(
            worst_sum,
            abs(rates.gamma_x + rates.gamma_y - rates.gamma_z) / rates.gamma_z,
        )
        state = steady_state(params)
        worst_sigma = max(worst_sigma, state.sigma - 1.0)
        worst_floor = max(worst_floor, -0.25 - optimal_variance(state))
    corr_ok = all(
        math.sqrt(n * (n + 1.0)) > n for n in np.linspace(1e-4, 10.0, 100)
    )
    ok = (worst_sum < 1e-14 and worst_sigma <= 1e-9 and worst_floor <= 1e-9
          and corr_ok)
    return ok, (
        f"rate-sum deviation {worst_sum:.2e}; sigma excess {worst_sigma:.2e}; "
        f"floor violation {worst_floor:.2e}"
    )


def check_stability_certificate(seed=42, fast=False):
    """The Bloch matrix is Hurwitz across the sweep (positive certificate margins)."""
    rng = np.random.default_rng(seed + 3)
    count = 200 if fast else 1000
    worst = np.inf
    for k in range(count):
        params = _draw_params(rng)
        system = build_system(params)
        margins = routh_hurwitz_margins(system)
        worst = min(worst, *margins)
        if k % 10 == 0:
            if np.linalg.eigvals(system.a_matrix).real.max() >= 0.0:
                return False, f"unstable matrix at {params}"
    return worst > 0.0, f"smallest certificate margin {worst:.3e} (must be > 0)"


def check_scan_determinism(seed=42, fast=False):
    """Repeating a scan reproduces the grid bit for bit."""
    spec = ScanSpec(
        axis1=AxisSpec("omega", 0.0, 3.0, 41),
        axis2=AxisSpec("delta", 0.0, 1.0, 29),
        fixed=AtomFieldParams(n_sq=0.125, phi=math.pi / 2.0),
        metric="s_pi4",
    )
    first = scan(spec)
    second = scan(spec)
    ok = np.array_equal(first.values, second.values)
    return ok, "identical grids" if ok else "grids differ between runs"


def check_csv_roundtrip(seed=42, fast=False):
    """Re-evaluating sampled rows of an emitted dataset reproduces the file."""
    rng = np.random.default_rng(seed + 4)
    with tempfile.TemporaryDirectory() as tmp:
        paths = emit_figure(6, Path(tmp) / "fig6.csv")
        columns = read_csv(paths["csv"])
    n_rows = len(columns["omega"])
    picks = rng.choice(n_rows, size=max(n_rows // 100, 1), replace=False)
    worst = 0.0
    for row in picks:
        report = full_report(AtomFieldParams(
            n_sq=0.125, phi=math.pi / 2.0,
            omega=float(columns["omega"][row]),
            delta=float(columns["delta"][row]),
        ))
        worst = max(worst, abs(report.s_pi4 - columns["s_pi4"][row]))
    return worst <= 1e-12, f"worst row deviation {worst:.2e} (tol 1e-12)"


#: (name, check) pairs in reporting order; the first ten are the
#: acceptance criteria, the rest are structural property sweeps
CHECKS = (
    ("maximal-family-floor", check_maximal_family),
    ("quarter-phase-point", check_quarter_phase_point),
    ("detuned-inphase-minimum", check_detuned_inphase_minimum),
    ("moderate-n-inphase-minimum", check_moderate_n_inphase_minimum),
    ("input-benchmark-degree", check_input_benchmark_degree),
    ("amplification-crossover", check_amplification_crossover),
    ("pure-variance-law", check_pure_variance_law),
    ("relaxation-oracle", check_relaxation_oracle),
    ("phase-optimality", check_phase_optimality),
    ("photon-number-certification", check_photon_number_certification),
    ("rates-and-bounds", check_rates_and_bounds),
    ("stability-certificate", check_stability_certificate),
    ("scan-determinism", check_scan_determinism),
    ("csv-roundtrip", check_csv_roundtrip),
)


def run_verify(seed: int = 42, fast: bool = False, out=None) -> bool:
    """Run every check, print one line each, return overall success."""
    import sys

    stream = out or sys.stdout
    width = max(len(name) for name, _ in CHECKS)
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn(seed=seed, fast=fast)
        except RfsqError as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name:<{width}}  {detail}", file=stream)
    print(("all checks passed" if all_ok else "some checks FAILED"), file=stream)
    return all_ok
