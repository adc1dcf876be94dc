"""Built-in oracle suite run by ``heleshaw validate``."""

from __future__ import annotations

import numpy as np
from scipy import integrate

from .diagnostics import conservation_report
from .evolution import SimState, rhs, step_if_rk2
from .geometry import curvature
from .harmonic import boundary_gradient, solve_dirichlet
from .initial import normalize_area_and_center
from .linear import integrating_factor
from .schedule import InjectionSchedule
from .spectral import PeriodicField, derivative


def parametric_curvature(h: PeriodicField, rho: float, theta):
    """Curvature of (x, y) = (rho + h)(cos, sin) from the parametric formula."""
    r = rho + h(theta)
    r1 = derivative(h, 1)(theta)
    r2 = derivative(h, 2)(theta)
    c, s = np.cos(theta), np.sin(theta)
    x1, y1 = r1 * c - r * s, r1 * s + r * c
    x2 = r2 * c - 2 * r1 * s - r * c
    y2 = r2 * s + 2 * r1 * c - r * s
    return (x1 * y2 - y1 * x2) / (x1**2 + y1**2) ** 1.5


def check_disk_dtn():
    worst = 0.0
    for rho in (1.0, 2.0):
        h = PeriodicField.zeros(64)
        for k in range(1, 9):
            g = PeriodicField.from_modes([(k, 1.0, 0.0)], 64)
            sol = solve_dirichlet(h, rho, g)
            dr, _ = boundary_gradient(sol, h, rho)
            expected = PeriodicField.from_modes([(k, k / rho, 0.0)], 64)
            worst = max(worst, (dr - expected).max_abs())
    return worst < 1e-10, f"max error {worst:.2e} (tol 1e-10)"


def check_curvature():
    h = PeriodicField.from_modes([(3, 0.1, 0.0)], 256)
    theta = np.linspace(0, 2 * np.pi, 1000, endpoint=False)
    err = float(np.max(np.abs(curvature(h, 1.0)(theta) - parametric_curvature(h, 1.0, theta))))
    return err < 1e-9, f"max error {err:.2e} (tol 1e-9)"


def check_equilibrium():
    worst = 0.0
    zero = PeriodicField.zeros(64)
    for sched in (InjectionSchedule.zero(), InjectionSchedule.constant(np.pi), InjectionSchedule.power(0.45)):
        for t in (0.0, 1.0, 3.0):
            worst = max(worst, rhs(zero, t, sched).max_abs())
    return worst < 1e-12, f"max |rhs(0)| {worst:.2e} (tol 1e-12)"


def check_linear_symbol():
    eps = 1e-6
    h = PeriodicField.from_modes([(2, eps, 0.0)], 64)
    f = rhs(h, 0.0, InjectionSchedule.zero())
    rate = -f.coeffs[2].real / h.coeffs[2].real
    return abs(rate - 6.0) < 1e-4, f"mode-2 rate {rate:.8f} (expected 6)"


def check_conservation():
    sched = InjectionSchedule.zero()
    h = normalize_area_and_center(PeriodicField.from_modes([(2, 1e-3, 0.0), (3, 1e-3, 0.3)], 32))
    state = SimState(0.0, h)
    z0 = 0j  # centred data
    for _ in range(100):
        state = step_if_rk2(state, 2e-3, sched)
    err, drift = conservation_report(state, sched, z0)
    ok = abs(err) < 1e-8 and drift < 1e-8
    return ok, f"area rel error {abs(err):.2e}, moment drift {drift:.2e} (tol 1e-8)"


def check_schedule():
    worst = 0.0
    for sched in (InjectionSchedule.zero(), InjectionSchedule.constant(np.pi), InjectionSchedule.power(0.25)):
        for t in (0.5, 10.0, 100.0):
            q, _ = integrate.quad(sched.mu, 0, t, epsabs=1e-13, epsrel=1e-13, limit=200)
            worst = max(worst, abs(sched.rho(t) ** 2 - 1 - q / np.pi))
    return worst < 1e-10, f"max |rho^2 - 1 - int mu/pi| {worst:.2e} (tol 1e-10)"


def check_integrating_factor():
    worst = 0.0
    for sched in (InjectionSchedule.zero(), InjectionSchedule.constant(np.pi), InjectionSchedule.power(0.45)):
        for k in (2, 5, 16):
            t = 50.0
            quad = k * (k * k - 1) * sched.inverse_cube_quadrature(t) + k * np.log(sched.rho(t))
            ref = integrating_factor(k, t, sched)
            worst = max(worst, abs(quad - ref) / max(1.0, abs(ref)))
    return worst < 1e-10, f"max relative error {worst:.2e} (tol 1e-10)"


CHECKS = {
    "disk_dirichlet_to_neumann": check_disk_dtn,
    "curvature_parametric": check_curvature,
    "circle_equilibrium": check_equilibrium,
    "linear_symbol_k2": check_linear_symbol,
    "conservation_short_run": check_conservation,
    "schedule_area_identity": check_schedule,
    "integrating_factor_quadrature": check_integrating_factor,
}


def run_all():
    results = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
