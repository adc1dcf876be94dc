"""
Height evolution h_t = u . calN - rho' and its time integrators.

The boundary velocity is u = u_bar - grad p, where p is the harmonic
correction with Dirichlet data H - p_bar on the free boundary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, GeometryError, HeleShawError
from .geometry import check_star_shaped
from .harmonic import solve_dirichlet
from .linear import exponent_increment
from .schedule import InjectionSchedule
from .spectral import PeriodicField, derivative, from_padded, grid, padded_size

logger = logging.getLogger(__name__)

METHODS = ("if_rk2", "rk4")


@dataclass(frozen=True)
class SimState:
    t: float
    h: PeriodicField
    step_count: int = 0
    last_residual: float = 0.0


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "if_rk2"
    dt: float | None = 1e-3
    adaptive: bool = False
    c_stab: float = 0.5
    t_final: float = 1.0
    n: int = 64
    tol: float = 1e-7
    atol: float = 1e-16
    dt_min: float = 1e-7
    dt_max: float = 0.05
    solver_tol: float | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if not 0 < self.c_stab <= 1:
            raise ConfigError("c_stab must lie in (0, 1]")


def evaluate_rhs(h: PeriodicField, t: float, schedule: InjectionSchedule, solver_tol=None):
    """Right-hand side of the height equation and the collocation residual."""
    rho = schedule.rho(t)
    check_star_shaped(h, rho)
    n = h.n
    m = padded_size(n)
    hv = h.values(m)
    r = rho + hv
    h1 = derivative(h, 1).values(m)
    h2 = derivative(h, 2).values(m)
    # q = mu/2pi = rho rho'
    q = schedule.mu(t) / (2.0 * np.pi)
    g = from_padded(curvature_excess(r, h1, h2) - hv / (r * rho) + q * np.log1p(hv / rho), n)
    sol = solve_dirichlet(h, rho, g, solver_tol)
    dp_dr, dp_dt = sol.gradient(r, grid(m))
    # (q/r - rho') - dp/dr, then the tangential part of u . calN
    velocity = -q * hv / (r * rho) - dp_dr + (h1 / r) * dp_dt
    return from_padded(velocity, n), sol.residual


def curvature_excess(r, h1, h2):
    """H - 1/r evaluated without cancellation, so roundoff scales with h."""
    x = (h1 / r) ** 2
    excess = -(r**2) * h2 + 2.0 * r * h1**2 - r**3 * np.expm1(1.5 * np.log1p(x))
    return excess / (r * (r**2 + h1**2) ** 1.5)


def rhs(h: PeriodicField, t: float, schedule: InjectionSchedule) -> PeriodicField:
    return evaluate_rhs(h, t, schedule)[0]


def rk4_dt_bound(n: int, t: float, schedule: InjectionSchedule, c_stab: float = 0.5) -> float:
    return c_stab * schedule.rho(t) ** 3 / (n // 2) ** 3


def step_rk4(state: SimState, dt: float, schedule: InjectionSchedule, c_stab: float = 0.5, solver_tol=None) -> SimState:
    bound = rk4_dt_bound(state.h.n, state.t, schedule, c_stab)
    if dt > bound * (1 + 1e-12):
        raise ConfigError(f"rk4 step {dt:.3g} exceeds stability bound {bound:.3g}")
    t, h = state.t, state.h
    k1, e1 = evaluate_rhs(h, t, schedule, solver_tol)
    k2, e2 = evaluate_rhs(h + (0.5 * dt) * k1, t + 0.5 * dt, schedule, solver_tol)
    k3, e3 = evaluate_rhs(h + (0.5 * dt) * k2, t + 0.5 * dt, schedule, solver_tol)
    k4, e4 = evaluate_rhs(h + dt * k3, t + dt, schedule, solver_tol)
    h_new = h + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return SimState(t + dt, h_new, state.step_count + 1, max(e1, e2, e3, e4))


def linear_rates(n: int, t: float, schedule: InjectionSchedule) -> np.ndarray:
    """Per-mode decay rates of the linearised right-hand side at time t."""
    k = np.arange(n // 2 + 1, dtype=float)
    rho = schedule.rho(t)
    return k * (k**2 - 1) / rho**3 + (k + 1) * schedule.rho_prime(t) / rho


def _scale(f: PeriodicField, factor: np.ndarray) -> PeriodicField:
    return PeriodicField(f.coeffs * factor, f.n)


def _remainder(h, t, schedule, solver_tol):
    f, res = evaluate_rhs(h, t, schedule, solver_tol)
    return f + _scale(h, linear_rates(h.n, t, schedule)), res


def step_if_rk2(state: SimState, dt: float, schedule: InjectionSchedule, solver_tol=None, with_error=False):
    """Integrating-factor midpoint step.

    The linear part is integrated exactly through exponent increments; the
    remainder (full rhs minus the linear part) is advanced by the explicit
    midpoint rule in the transformed variable. With ``with_error`` the
    difference to the embedded integrating-factor Euler step is returned too.
    """
    t0, h0 = state.t, state.h
    th, t1 = t0 + 0.5 * dt, t0 + dt
    k = np.arange(h0.n // 2 + 1)
    e_0h = np.exp(-exponent_increment(k, t0, th, schedule))
    e_01 = np.exp(-exponent_increment(k, t0, t1, schedule))
    e_h1 = np.exp(-exponent_increment(k, th, t1, schedule))
    n0, r0 = _remainder(h0, t0, schedule, solver_tol)
    h_half = _scale(h0 + (0.5 * dt) * n0, e_0h)
    n1, r1 = _remainder(h_half, th, schedule, solver_tol)
    c_new = e_01 * h0.coeffs + dt * e_h1 * n1.coeffs
    new = SimState(t1, PeriodicField(c_new, h0.n), state.step_count + 1, max(r0, r1))
    if not with_error:
        return new
    c_euler = e_01 * (h0.coeffs + dt * n0.coeffs)
    return new, float(np.max(np.abs(c_new - c_euler)))


@dataclass
class RunResult:
    states: list = field(default_factory=list)
    dts: list = field(default_factory=list)
    status: str = "ok"
    error: HeleShawError | None = None


def run(
    cfg: IntegratorConfig,
    schedule: InjectionSchedule,
    initial: PeriodicField,
    output_times,
    on_output=None,
) -> RunResult:
    """Advance from t = 0 to cfg.t_final, landing exactly on each output time.

    ``on_output(state, dt_used)`` is called at t = 0 and every output time.
    Failures stop the run; states recorded so far are kept in the result.
    """
    output_times = np.asarray(output_times, dtype=float)
    result = RunResult()
    state = SimState(0.0, initial)

    def emit(s, dt_used):
        if not np.all(np.isfinite(s.h.coeffs)):
            raise GeometryError(f"non-finite height at t={s.t}")
        result.states.append(s)
        result.dts.append(dt_used)
        if on_output is not None:
            on_output(s, dt_used)

    try:
        check_star_shaped(initial, schedule.rho(0.0))
        if cfg.method == "rk4":
            dt_nominal = cfg.dt if cfg.dt is not None else rk4_dt_bound(initial.n, 0.0, schedule, cfg.c_stab)
        else:
            dt_nominal = cfg.dt if cfg.dt is not None else 1e-3
        emit(state, 0.0)
        dt_try = dt_nominal
        for t_out in output_times:
            if t_out <= state.t:
                continue
            last_dt = 0.0
            while state.t < t_out - 1e-14 * max(1.0, t_out):
                dt = min(dt_try, t_out - state.t)
                if cfg.method == "rk4":
                    state = step_rk4(state, dt, schedule, cfg.c_stab, cfg.solver_tol)
                elif cfg.adaptive:
                    state, dt, dt_try = _adaptive_step(state, dt, dt_try, schedule, cfg)
                else:
                    state = step_if_rk2(state, dt, schedule, cfg.solver_tol)
                last_dt = dt
            state = replace(state, t=float(t_out))
            emit(state, last_dt)
    except HeleShawError as exc:
        logger.warning("run stopped at t=%.6g: %s", state.t, exc)
        result.status = type(exc).__name__
        result.error = exc
    return result


def _adaptive_step(state, dt, dt_try, schedule, cfg):
    """One accepted adaptive if_rk2 step of at most ``dt``.

    The local error is estimated against the embedded integrating-factor
    Euler step and held below atol + tol * max|c_k|. Returns (state, dt used, next trial dt).
    """
    clipped = dt < dt_try
    # error budget relative to the current field size
    tol = cfg.atol + cfg.tol * float(np.max(np.abs(state.h.coeffs)))
    while True:
        new, err = step_if_rk2(state, dt, schedule, cfg.solver_tol, with_error=True)
        factor = 2.0 if err == 0 else min(2.0, max(0.2, 0.9 * np.sqrt(tol / err)))
        if err <= tol or dt <= cfg.dt_min:
            nxt = max(dt_try, dt * factor) if clipped and factor >= 1 else dt * factor
            return new, dt, min(cfg.dt_max, max(cfg.dt_min, nxt))
        dt = max(cfg.dt_min, dt * factor)
        clipped = False
