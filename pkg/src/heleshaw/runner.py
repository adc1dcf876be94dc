"""Orchestration of full and linear runs from a ``RunConfig``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .diagnostics import make_record, total_norm_components
from .errors import HeleShawError
from .evolution import SimState, run
from .geometry import first_moment
from .initial import build_initial
from .linear import linear_evolution
from .schedule import RegimeReport, classify


@dataclass
class Outcome:
    config: RunConfig
    report: RegimeReport
    records: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)  # (index, SimState, rho)
    status: str = "ok"
    error: HeleShawError | None = None
    mode: str = "simulate"

    @property
    def exit_status(self) -> int:
        return 0 if self.error is None else self.error.exit_status

    def total_norm(self) -> dict:
        return total_norm_components(self.records, self.config.injection(), self.report.K)


def snapshot_indices(n_outputs: int, count: int) -> set[int]:
    """Record indices (0 = initial state) at which the boundary is dumped."""
    if count <= 0:
        return set()
    if count == 1:
        return {0}
    return {int(round(i)) for i in np.linspace(0, n_outputs, count)}


def _prepare(cfg: RunConfig):
    schedule = cfg.injection()
    report = classify(schedule, cfg.horizon())
    initial = build_initial(cfg.n, cfg.modes, cfg.load_samples(), cfg.normalize, schedule.rho(0.0))
    return schedule, report, initial


def simulate(cfg: RunConfig) -> Outcome:
    schedule, report, initial = _prepare(cfg)
    outcome = Outcome(cfg, report)
    z0 = first_moment(initial, schedule.rho(0.0))
    times = cfg.output_times()
    snaps = snapshot_indices(len(times), cfg.snapshots)

    def on_output(state, dt_used):
        idx = len(outcome.records)
        outcome.records.append(
            make_record(
                state,
                schedule,
                K=report.K,
                regime=report.regime,
                beta=cfg.beta,
                k_list=cfg.k_list,
                initial_moment=z0,
                dt=dt_used,
            )
        )
        if idx in snaps:
            outcome.snapshots.append((idx, state, schedule.rho(state.t)))

    result = run(cfg.integrator(), schedule, initial, times, on_output)
    outcome.status = result.status
    outcome.error = result.error
    return outcome


def linear(cfg: RunConfig) -> Outcome:
    """Oracle trajectories: every mode evolved by its closed-form factor."""
    schedule, report, initial = _prepare(cfg)
    outcome = Outcome(cfg, report, mode="linear")
    z0 = first_moment(initial, schedule.rho(0.0))
    times = np.concatenate([[0.0], cfg.output_times()])
    snaps = snapshot_indices(len(times) - 1, cfg.snapshots)
    prev = 0.0
    try:
        for idx, t in enumerate(times):
            state = SimState(float(t), linear_evolution(initial, float(t), schedule), idx)
            outcome.records.append(
                make_record(
                    state,
                    schedule,
                    K=report.K,
                    regime=report.regime,
                    beta=cfg.beta,
                    k_list=cfg.k_list,
                    initial_moment=z0,
                    dt=float(t - prev),
                )
            )
            prev = t
            if idx in snaps:
                outcome.snapshots.append((idx, state, schedule.rho(state.t)))
    except HeleShawError as exc:
        outcome.status = type(exc).__name__
        outcome.error = exc
    return outcome
