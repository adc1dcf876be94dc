"""
Injection schedules mu(t) and the scalar functions derived from them.

Three kinds are supported, all with closed-form radius rho(t) where
pi rho^2 = pi + int_0^t mu:

    zero              mu = 0,                      rho = 1
    constant(mu0)     mu = mu0,                    rho = sqrt(1 + mu0 t / pi)
    power(alpha)      mu = 2 pi alpha (1+t)^{2alpha-1}, rho = (1+t)^alpha
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

DEFAULT_BETA = 0.874
SLOW_GROWTH_MAX = 1.0 / 3.0
FAST_GROWTH_MIN = 3.0 / 8.0
# finite-horizon proxy for "log rho' has small total variation"
SMALL_TOTAL_VARIATION = 0.1


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("time must be finite and nonnegative")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class InjectionSchedule:
    kind: str = "zero"
    mu0: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind == "zero":
            pass
        elif self.kind == "constant":
            if not self.mu0 > 0:
                raise ValueError("constant schedule needs mu0 > 0")
        elif self.kind == "power":
            if not 0.0 < self.alpha < 1.0:
                raise ValueError("power schedule needs alpha in (0, 1)")
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, mu0: float):
        return cls("constant", mu0=float(mu0))

    @classmethod
    def power(cls, alpha: float):
        return cls("power", alpha=float(alpha))

    @classmethod
    def from_spec(cls, spec: dict) -> "InjectionSchedule":
        kind = spec.get("kind", "zero")
        if kind == "constant":
            return cls.constant(spec["mu0"])
        if kind == "power":
            return cls.power(spec["alpha"])
        return cls(kind)

    def to_spec(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "mu0": self.mu0}
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}
        return {"kind": "zero"}

    # radius and rate ----------------------------------------------------

    @property
    def _a(self):
        return self.mu0 / np.pi

    def mu(self, t):
        t = _check_time(t)
        if self.kind == "zero":
            v = np.zeros_like(t)
        elif self.kind == "constant":
            v = np.full_like(t, self.mu0)
        else:
            v = 2 * np.pi * self.alpha * (1 + t) ** (2 * self.alpha - 1)
        return _out(v)

    def rho(self, t):
        t = _check_time(t)
        if self.kind == "zero":
            v = np.ones_like(t)
        elif self.kind == "constant":
            v = np.sqrt(1 + self._a * t)
        else:
            v = (1 + t) ** self.alpha
        return _out(v)

    def rho_prime(self, t):
        t = _check_time(t)
        if self.kind == "zero":
            v = np.zeros_like(t)
        elif self.kind == "constant":
            v = 0.5 * self._a / np.sqrt(1 + self._a * t)
        else:
            v = self.alpha * (1 + t) ** (self.alpha - 1)
        return _out(v)

    def rho_second(self, t):
        t = _check_time(t)
        if self.kind == "zero":
            v = np.zeros_like(t)
        elif self.kind == "constant":
            v = -0.25 * self._a**2 * (1 + self._a * t) ** -1.5
        else:
            v = self.alpha * (self.alpha - 1) * (1 + t) ** (self.alpha - 2)
        return _out(v)

    # decay clocks -------------------------------------------------------

    def inverse_cube_integral(self, t):
        """int_0^t rho(s)^{-3} ds in closed form."""
        t = _check_time(t)
        if self.kind == "zero":
            v = t.copy()
        elif self.kind == "constant":
            a = self._a
            v = (2.0 / a) * (1 - 1 / np.sqrt(1 + a * t))
        else:
            p = 1 - 3 * self.alpha
            if abs(p) < 1e-12:
                v = np.log1p(t)
            else:
                v = np.expm1(p * np.log1p(t)) / p
        return _out(v)

    def inverse_cube_quadrature(self, t: float) -> float:
        """Adaptive-quadrature fallback for the same integral."""
        t = float(_check_time(t))
        val, _ = integrate.quad(lambda s: self.rho(s) ** -3, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=200)
        return val

    def d(self, t):
        """Decay clock d(t) = int_0^t 6 rho^{-3} ds."""
        return _out(6.0 * np.asarray(self.inverse_cube_integral(t)))

    def growth_exponent(self) -> float:
        """nu: the algebraic growth exponent of rho in (1 + t)."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return 0.5
        return self.alpha

    def regime(self) -> str:
        nu = self.growth_exponent()
        if nu <= SLOW_GROWTH_MAX:
            return "slow"
        if nu > FAST_GROWTH_MIN:
            return "fast"
        return "neither"

    def big_d(self, t, beta: float = DEFAULT_BETA, regime: str | None = None):
        """Decay weight: rho^2 e^{beta d} (slow) or rho^2/sqrt(1+t) (fast)."""
        regime = regime or self.regime()
        if regime == "slow":
            if not 0 < beta < 7 / 8:
                raise ValueError("beta must lie in (0, 7/8)")
            return _out(np.asarray(self.rho(t)) ** 2 * np.exp(beta * np.asarray(self.d(t))))
        if regime == "fast":
            t = _check_time(t)
            return _out(np.asarray(self.rho(t)) ** 2 / np.sqrt(1 + t))
        raise RegimeError(f"schedule {self.to_spec()} satisfies neither growth assumption")

    def classify(self, t_max: float = 100.0, n_points: int = 10_000) -> "RegimeReport":
        return classify(self, t_max, n_points)


class RegimeError(ValueError):
    pass


def decay_order(nu: float) -> int:
    """Sobolev order K = max{6, floor((64 nu - 21)/(16 nu - 6)) + 1} for nu > 3/8."""
    if nu <= FAST_GROWTH_MIN:
        return 6
    return max(6, math.floor((64 * nu - 21) / (16 * nu - 6)) + 1)


@dataclass
class RegimeReport:
    regime: str
    nu: float
    K: int
    t_max: float
    sup_rho1: float
    sup_rho2: float
    sup_rho_over_growth: float
    sup_fast_rate: float
    concave: bool
    log_rate_total_variation: float | None
    small_total_variation: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "nu": self.nu,
            "K": self.K,
            "t_max": self.t_max,
            "sup_checks": {
                "rho_prime_(1+t)/rho": self.sup_rho1,
                "rho_second_(1+t)^2/rho": self.sup_rho2,
                "rho/(1+t)^(1/3)": self.sup_rho_over_growth,
                "rho_prime_(1+t)/rho_fast": self.sup_fast_rate,
            },
            "rho_second_nonpositive": self.concave,
            "log_rho_prime_total_variation": self.log_rate_total_variation,
            "small_total_variation": self.small_total_variation,
            "notes": list(self.notes),
        }


def classify(schedule: InjectionSchedule, t_max: float = 100.0, n_points: int = 10_000) -> RegimeReport:
    """Evaluate both growth assumptions on a log-spaced grid over [0, t_max]."""
    t = np.geomspace(1.0, 1.0 + t_max, n_points) - 1.0
    t[0] = 0.0
    rho = np.asarray(schedule.rho(t))
    r1 = np.asarray(schedule.rho_prime(t))
    r2 = np.asarray(schedule.rho_second(t))
    sup1 = float(np.max(np.abs(r1) * (1 + t) / rho))
    sup2 = float(np.max(np.abs(r2) * (1 + t) ** 2 / rho))
    sup_growth = float(np.max(rho / (1 + t) ** SLOW_GROWTH_MAX))
    concave = bool(np.all(r2 <= 0))
    if np.all(r1 > 0):
        tv = float(np.sum(np.abs(np.diff(np.log(r1)))))
    else:
        tv = None
    small_tv = tv is not None and tv <= SMALL_TOTAL_VARIATION
    nu = schedule.growth_exponent()
    regime = schedule.regime()
    notes = [
        "sup checks are finite-horizon proxies evaluated on [0, t_max]",
        "K uses the growth exponent nu, not the injection rate mu",
    ]
    if regime == "fast" and not (concave or small_tv):
        regime = "neither"
        notes.append("fast growth but neither rho'' <= 0 nor small variation of log rho'")
    if regime == "neither":
        notes.append("decay checks disabled; big_d falls back to the fast-regime weight")
    return RegimeReport(
        regime=regime,
        nu=nu,
        K=decay_order(nu) if regime == "fast" else 6,
        t_max=float(t_max),
        sup_rho1=sup1,
        sup_rho2=sup2,
        sup_rho_over_growth=sup_growth,
        sup_fast_rate=sup1,
        concave=concave,
        log_rate_total_variation=tv,
        small_total_variation=small_tv,
        notes=notes,
    )
