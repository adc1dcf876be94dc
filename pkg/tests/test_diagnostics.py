import numpy as np
import pytest

from heleshaw.config import RunConfig
from heleshaw.diagnostics import (
    bound_ratio_check,
    conservation_report,
    constraint_identities,
    csv_header,
    decay_clock_from_rho,
    fit_decay,
    make_record,
    total_norm_components,
)
from heleshaw.evolution import SimState
from heleshaw.runner import simulate
from heleshaw.schedule import InjectionSchedule
from heleshaw.spectral import PeriodicField

ZERO = InjectionSchedule.zero()
PI = InjectionSchedule.constant(np.pi)


def test_conservation_of_circle():
    for sched, t in ((ZERO, 0.0), (PI, 3.0)):
        err, drift = conservation_report(SimState(t, PeriodicField.zeros(32)), sched)
        assert abs(err) < 1e-15 and drift < 1e-15


def test_constraint_identities_planted_mean():
    c0 = 0.01 / np.sqrt(2 * np.pi)
    state = SimState(0.0, PeriodicField.constant(c0, 32))
    mean, first = constraint_identities(state, ZERO)
    # 1/2 int (1 + c0)^2 - pi = 2 pi c0 + pi c0^2
    assert mean == pytest.approx(2 * np.pi * c0 + np.pi * c0**2, rel=1e-12)
    assert first < 1e-15


def test_make_record_fields():
    h = PeriodicField.from_modes([(2, 1e-3, 0.0)], 32)
    rec = make_record(SimState(1.0, h), ZERO, K=6, regime="slow", k_list=[2, 3])
    assert rec.big_d == pytest.approx(np.exp(5.244))
    assert rec.bound_ratio == pytest.approx(rec.big_d * rec.norm_h25)
    assert rec.hhat_abs[2] == pytest.approx(np.sqrt(2 * np.pi) * 5e-4)
    assert rec.hhat_abs[3] < 1e-18
    assert len(rec.row([2, 3])) == len(csv_header([2, 3]))


def test_make_record_neither_regime_uses_fast_weight():
    s = InjectionSchedule.power(0.36)
    rec = make_record(SimState(2.0, PeriodicField.zeros(16)), s, K=6, regime="neither")
    assert rec.big_d == pytest.approx(s.rho(2.0) ** 2 / np.sqrt(3.0))


def test_fit_exponential():
    t = np.linspace(0, 2, 101)
    fit = fit_decay(t, 3.0 * np.exp(-6 * t), "exp_in_d", d=6 * t)
    assert fit.conclusive and fit.slope == pytest.approx(-1.0, abs=1e-6)


def test_fit_algebraic():
    t = np.linspace(0, 50, 101)
    fit = fit_decay(t, (1 + t) ** -0.5, "algebraic_in_t")
    assert fit.conclusive and fit.slope == pytest.approx(-0.5, abs=1e-6)


def test_fit_inconclusive():
    t = np.linspace(0, 1, 10)
    assert not fit_decay(t, np.exp(-t), "alg").conclusive
    t = np.linspace(0, 1, 50)
    fit = fit_decay(t, np.exp(-0.1 * t), "exp", d=t)
    assert not fit.conclusive and "2x" in fit.reason
    with pytest.raises(ValueError):
        fit_decay(t, np.exp(-t), "exp")
    with pytest.raises(ValueError):
        fit_decay(t, np.exp(-t), "other")


def test_decay_clock_from_rho():
    t = np.linspace(0, 1, 2001)
    d = decay_clock_from_rho(t, PI.rho(t))
    assert d[-1] == pytest.approx(PI.d(1.0), rel=1e-6)


def test_bound_ratio_check():
    class R:
        def __init__(self, t, b):
            self.t, self.bound_ratio = t, b

    recs = [R(0.0, 1.0), R(0.5, 2.0), R(1.0, 3.5)]
    out = bound_ratio_check(recs, 0.5, 2.0)
    assert out["early_max"] == 2.0 and out["ratio"] == 1.75 and out["ok"] and out["argmax_t"] == 1.0
    assert not bound_ratio_check(recs, 0.5, 1.5)["ok"]


def _run(eps, t_final=1.0, modes=(2, 3)):
    cfg = RunConfig(
        n=32, t_final=t_final, records=40, adaptive=True, snapshots=0,
        modes=[[k, eps, 0.0] for k in modes], normalize="area+center",
    )
    return simulate(cfg)


def test_total_norm_zero_run():
    out = _run(0.0)
    comps = out.total_norm()
    assert comps["K"] == 6
    assert all(v == 0.0 for k, v in comps.items() if k != "K")


def test_total_norm_scales_linearly():
    a, b = _run(1e-4).total_norm(), _run(2e-4).total_norm()
    for key in a:
        if key != "K" and a[key] > 0:
            assert b[key] / a[key] == pytest.approx(2.0, rel=0.1)


def test_short_run_conserves_area_and_decays():
    out = _run(1e-3, t_final=2.0)
    assert out.status == "ok"
    assert max(abs(r.area_rel_error) for r in out.records) < 1e-8
    b = np.array([r.bound_ratio for r in out.records])
    t = np.array([r.t for r in out.records])
    assert t[np.argmax(b)] <= 0.5


def test_off_center_moment_constant():
    cfg = RunConfig(n=32, t_final=10.0, records=20, adaptive=True, snapshots=0,
                    modes=[[1, 0.05, 0.0], [2, 0.01, 0.0]], normalize="area")
    out = simulate(cfg)
    mx = np.array([r.moment_x for r in out.records])
    assert np.ptp(mx) < 1e-7
    assert mx[0] == pytest.approx(0.05 * np.pi, rel=1e-2)
