"""
Closed-form linear theory for the height modes.

For |k| >= 2 the linearised mode equation is

    d hhat_k/dt + [|k|(|k|^2-1)/rho^3 + |k| rho'/rho] hhat_k = R_k

with integrating factor I_k(t) = |k|(|k|^2-1) int_0^t rho^{-3} + |k| log rho(t).
The source flow u_bar = (mu/2pi) x/|x|^2 also weakens as the boundary moves
outwards, which contributes a further rho'/rho to every mode of the full
right-hand side; ``linearized_exponent`` includes it and is what the
integrating-factor integrator and the exact linear checks use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schedule import DEFAULT_BETA, InjectionSchedule
from .spectral import PeriodicField


def _k_factor(k):
    k = np.abs(np.asarray(k, dtype=float))
    return k, k * (k**2 - 1.0)


def integrating_factor(k, t, schedule: InjectionSchedule):
    """I_k(t) = |k|(|k|^2 - 1) int_0^t rho^{-3} ds + |k| log rho(t)."""
    ka, cubic = _k_factor(k)
    val = cubic * schedule.inverse_cube_integral(t) + ka * np.log(schedule.rho(t))
    return float(val) if np.ndim(val) == 0 else val


def linearized_exponent(k, t, schedule: InjectionSchedule):
    """Exponent of the exact linearisation of the full right-hand side: I_k + log rho."""
    return integrating_factor(k, t, schedule) + np.log(schedule.rho(t))


def exponent_increment(k, t0: float, t1: float, schedule: InjectionSchedule, source_drift: bool = True):
    """Difference of the mode exponents between t0 and t1, computed without cancellation
    in the logarithmic part."""
    ka, cubic = _k_factor(k)
    dint = schedule.inverse_cube_integral(t1) - schedule.inverse_cube_integral(t0)
    dlog = np.log(schedule.rho(t1) / schedule.rho(t0))
    return cubic * dint + (ka + (1.0 if source_drift else 0.0)) * dlog


def linear_evolution(initial: PeriodicField, t: float, schedule: InjectionSchedule) -> PeriodicField:
    """Multiply every mode k != 0 by exp(-I_k(t)); the mean mode is left unchanged."""
    k = np.arange(initial.n // 2 + 1)
    factor = np.exp(-np.asarray(integrating_factor(k, t, schedule)))
    factor[0] = 1.0
    return PeriodicField(initial.coeffs * factor, initial.n)


@dataclass
class ModeEnvelope:
    k: int
    times: np.ndarray
    values: np.ndarray
    schedule: InjectionSchedule


def mode_envelope(k: int, times, schedule: InjectionSchedule) -> ModeEnvelope:
    times = np.asarray(times, dtype=float)
    return ModeEnvelope(k, times, np.exp(-np.asarray(integrating_factor(k, times, schedule))), schedule)


def predicted_envelope(schedule: InjectionSchedule, beta: float = DEFAULT_BETA, s: float = 2.5):
    """t -> 1/D(t): rho^-2 e^{-beta d} (slow) or sqrt(1+t)/rho^2 (fast).

    Only the H^2.5 shape is predicted; ``s`` is accepted for symmetry with
    the norm series and must be 2.5.
    """
    if s != 2.5:
        raise ValueError("decay envelopes are stated for the H^2.5 norm only")
    regime = schedule.regime()
    if regime == "neither":
        raise ValueError("no decay envelope for a schedule satisfying neither assumption")

    def envelope(t):
        return 1.0 / np.asarray(schedule.big_d(t, beta, regime))

    return envelope
