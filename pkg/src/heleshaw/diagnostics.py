"""
Per-record measurements along a run and post-hoc analysis of the series.

Conservation is measured, never enforced: the area should track pi rho(t)^2
and the first moment int_Omega (x, y) dA should not move.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import area, first_moment
from .schedule import DEFAULT_BETA, InjectionSchedule
from .spectral import sobolev_norm

CSV_COLUMNS = (
    "t",
    "rho",
    "area_rel_error",
    "moment_x",
    "moment_y",
    "norm_l2",
    "norm_h25",
    "norm_hK",
    "big_d",
    "bound_ratio",
    "residual",
    "dt",
)


@dataclass
class TimeSeriesRecord:
    t: float
    rho: float
    area_rel_error: float
    moment_x: float
    moment_y: float
    norm_l2: float
    norm_h25: float
    norm_hK: float
    big_d: float
    bound_ratio: float
    residual: float
    dt: float
    hhat_abs: dict = field(default_factory=dict)
    # kept in memory only; feed the total-norm report and constraint checks
    norm_hK_plus: float = 0.0
    norm_hK_minus: float = 0.0
    mean_mode_defect: float = 0.0
    first_mode_defect: float = 0.0

    def row(self, k_list) -> list[float]:
        return [getattr(self, c) for c in CSV_COLUMNS] + [self.hhat_abs[k] for k in k_list]


def csv_header(k_list) -> list[str]:
    return list(CSV_COLUMNS) + [f"hhat_{k}" for k in k_list]


def conservation_report(state, schedule: InjectionSchedule, initial_moment: complex = 0j):
    """(relative area error against pi rho^2, absolute drift of the first moment)."""
    rho = schedule.rho(state.t)
    exact = np.pi * rho**2
    err = (area(state.h, rho) - exact) / exact
    drift = abs(first_moment(state.h, rho) - initial_moment)
    return float(err), float(drift)


def constraint_identities(state, schedule: InjectionSchedule, initial_moment: complex = 0j):
    """Defects of the mass and first-moment identities, by quadrature.

    mean: |1/2 int (rho+h)^2 - pi rho^2|
    first: |1/3 int (rho+h)^3 e^{i theta} - (x0 + i y0)|
    """
    rho = schedule.rho(state.t)
    mean = abs(area(state.h, rho) - np.pi * rho**2)
    first = abs(first_moment(state.h, rho) - initial_moment)
    return float(mean), float(first)


def decay_weight(schedule: InjectionSchedule, t: float, beta: float, regime: str) -> float:
    if regime == "neither":
        regime = "fast"
    return float(schedule.big_d(t, beta, regime))


def make_record(
    state,
    schedule: InjectionSchedule,
    *,
    K: int,
    regime: str,
    beta: float = DEFAULT_BETA,
    k_list=(),
    initial_moment: complex = 0j,
    dt: float = 0.0,
) -> TimeSeriesRecord:
    h, t = state.h, state.t
    rho = schedule.rho(t)
    z = first_moment(h, rho)
    err, _ = conservation_report(state, schedule, initial_moment)
    mean_def, first_def = constraint_identities(state, schedule, initial_moment)
    norm_h25 = sobolev_norm(h, 2.5)
    big_d = decay_weight(schedule, t, beta, regime)
    return TimeSeriesRecord(
        t=float(t),
        rho=float(rho),
        area_rel_error=err,
        moment_x=z.real,
        moment_y=z.imag,
        norm_l2=sobolev_norm(h, 0),
        norm_h25=norm_h25,
        norm_hK=sobolev_norm(h, K),
        big_d=big_d,
        bound_ratio=big_d * norm_h25,
        residual=float(state.last_residual),
        dt=float(dt),
        hhat_abs={k: float(abs(h.hhat(k))) for k in k_list},
        norm_hK_plus=sobolev_norm(h, K + 1.5),
        norm_hK_minus=sobolev_norm(h, K - 1),
        mean_mode_defect=mean_def,
        first_mode_defect=first_def,
    )


# decay fitting ---------------------------------------------------------


@dataclass
class DecayFit:
    mode: str
    slope: float
    intercept: float
    residual: float
    n_points: int
    conclusive: bool
    reason: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)


MIN_FIT_POINTS = 20
MIN_DECAY_FACTOR = 2.0


def fit_decay(t, norms, mode: str = "exp_in_d", d=None) -> DecayFit:
    """Least-squares slope of log(norm) against d(t) or log(1 + t).

    ``mode`` is ``exp_in_d`` (needs ``d``, the decay clock at each t) or
    ``algebraic_in_t``. Too few points or too little decay gives an
    inconclusive fit rather than an error.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(norms, dtype=float)
    if mode in ("exp", "exp_in_d"):
        if d is None:
            raise ValueError("exp_in_d fitting needs the decay clock d(t)")
        x = np.asarray(d, dtype=float)
        mode = "exp_in_d"
    elif mode in ("alg", "algebraic_in_t"):
        x = np.log1p(t)
        mode = "algebraic_in_t"
    else:
        raise ValueError(f"unknown fit mode {mode!r}")
    ok = np.isfinite(x) & np.isfinite(y) & (y > 0)
    x, y = x[ok], y[ok]
    if x.size < MIN_FIT_POINTS:
        return DecayFit(mode, np.nan, np.nan, np.nan, int(x.size), False, f"only {x.size} usable records")
    if y.max() < MIN_DECAY_FACTOR * y.min() or np.ptp(x) == 0:
        return DecayFit(mode, np.nan, np.nan, np.nan, int(x.size), False, "norm decayed by less than 2x")
    logy = np.log(y)
    slope, intercept = np.polyfit(x, logy, 1)
    resid = float(np.sqrt(np.mean((logy - (slope * x + intercept)) ** 2)))
    return DecayFit(mode, float(slope), float(intercept), resid, int(x.size), True)


def decay_clock_from_rho(t, rho) -> np.ndarray:
    """Trapezoidal d(t) = int 6/rho^3 from a sampled radius series."""
    t = np.asarray(t, dtype=float)
    f = 6.0 / np.asarray(rho, dtype=float) ** 3
    return np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(t))])


def fit_decay_records(records, schedule: InjectionSchedule, mode: str = "exp_in_d") -> DecayFit:
    t = np.array([r.t for r in records])
    y = np.array([r.norm_h25 for r in records])
    return fit_decay(t, y, mode, d=schedule.d(t))


def total_norm_components(records, schedule: InjectionSchedule, K: int) -> dict:
    """The four pieces of the total norm, from the stored series.

    sup ||h||_{H^K}, [int rho^-3 ||h||^2_{H^{K+1.5}} dt]^{1/2},
    sup rho sqrt(rho') ||h||_{H^{K-1}}, sup D ||h||_{H^2.5}.
    """
    if not records:
        return {}
    t = np.array([r.t for r in records])
    rho = np.array([r.rho for r in records])
    rp = np.asarray(schedule.rho_prime(t))
    integrand = np.array([r.norm_hK_plus**2 for r in records]) / rho**3
    integral = float(np.sum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(t))) if t.size > 1 else 0.0
    return {
        "K": int(K),
        "sup_hK": float(max(r.norm_hK for r in records)),
        "dissipation_hK_plus_1.5": float(np.sqrt(integral)),
        "sup_rho_sqrt_rho_prime_hK_minus_1": float(np.max(rho * np.sqrt(rp) * np.array([r.norm_hK_minus for r in records]))),
        "sup_bound_ratio": float(max(r.bound_ratio for r in records)),
    }


def bound_ratio_check(records, window: float, factor: float) -> dict:
    """Is the bound ratio's global maximum reached within [0, window], and is
    everything after the window at most ``factor`` times the early maximum?"""
    t = np.array([r.t for r in records])
    b = np.array([r.bound_ratio for r in records])
    early = b[t <= window]
    late = b[t > window]
    early_max = float(early.max()) if early.size else 0.0
    late_max = float(late.max()) if late.size else 0.0
    return {
        "early_max": early_max,
        "late_max": late_max,
        "argmax_t": float(t[int(np.argmax(b))]),
        "ratio": late_max / early_max if early_max > 0 else np.inf,
        "ok": bool(np.all(np.isfinite(b)) and late_max <= factor * early_max),
    }
