import numpy as np
import pytest

from heleshaw.errors import SolverError
from heleshaw.harmonic import background_fields, boundary_gradient, solve_dirichlet
from heleshaw.spectral import PeriodicField, grid

from conftest import random_field


def test_background_fields():
    h = PeriodicField.zeros(16)
    p, ur, ut = background_fields(1.0, 0.0, h)
    assert np.allclose(p.values(), 1.0) and ur.max_abs() == 0 and ut.max_abs() == 0
    p, ur, _ = background_fields(np.sqrt(2), np.pi, h)
    assert np.allclose(p.values(), 2**-0.5, atol=1e-15)
    assert np.allclose(ur.values(), 0.5 / np.sqrt(2), atol=1e-15)


def test_disk_single_mode():
    h = PeriodicField.zeros(32)
    g = PeriodicField.from_modes([(3, 1.0, 0.0)], 32)
    sol = solve_dirichlet(h, 1.0, g)
    assert sol.mode(3) == pytest.approx(0.5) and sol.mode(-3) == pytest.approx(0.5)
    r, th = np.array([0.3, 0.7]), np.array([0.2, 1.9])
    assert np.allclose(sol.evaluate(r, th), r**3 * np.cos(3 * th), atol=1e-14)


@pytest.mark.parametrize("rho", [1.0, 2.0])
@pytest.mark.parametrize("k", range(1, 17))
def test_disk_dtn(rho, k):
    n = 64
    h = PeriodicField.zeros(n)
    g = PeriodicField.from_modes([(k, 1.0, 0.3)], n)
    dr, dt = boundary_gradient(solve_dirichlet(h, rho, g), h, rho)
    assert (dr - PeriodicField.from_modes([(k, k / rho, 0.3)], n)).max_abs() <= 1e-12
    # tangential derivative (1/rho) d/dtheta cos(k theta - 0.3)
    assert (dt - PeriodicField.from_modes([(k, k / rho, 0.3 - np.pi / 2)], n)).max_abs() <= 1e-12


def test_constant_data():
    h = PeriodicField.from_modes([(2, 0.1, 0.0)], 32)
    sol = solve_dirichlet(h, 1.0, PeriodicField.constant(1.0, 32))
    dr, dt = boundary_gradient(sol, h, 1.0)
    assert dr.max_abs() < 1e-12 and dt.max_abs() < 1e-12


def test_perturbed_residual_and_refinement():
    fn = lambda th: np.cos(3 * th) + 0.2 * np.sin(th)
    pts_r, pts_t = np.array([0.2, 0.5, 0.8]), np.array([0.1, 2.0, 4.0])
    vals = []
    for n in (128, 256):
        h = PeriodicField.from_modes([(2, 0.05, 0.0)], n)
        sol = solve_dirichlet(h, 1.0, PeriodicField.from_function(fn, n))
        assert sol.residual < 1e-10
        vals.append(sol.evaluate(pts_r, pts_t))
    assert np.max(np.abs(vals[0] - vals[1])) <= 1e-8


def test_gradient_matches_finite_differences():
    n = 64
    h = PeriodicField.from_modes([(2, 0.05, 0.0)], n)
    sol = solve_dirichlet(h, 1.0, PeriodicField.from_modes([(3, 1.0, 0.0), (1, 0.2, 1.0)], n))
    th = grid(n)
    r = 1.0 + h.values()
    e = 1e-6
    dr, dt = sol.gradient(r, th)
    fd_r = (sol.evaluate(r + e, th) - sol.evaluate(r - e, th)) / (2 * e)
    fd_t = (sol.evaluate(r, th + e) - sol.evaluate(r, th - e)) / (2 * e * r)
    assert np.max(np.abs(dr - fd_r)) < 1e-7
    assert np.max(np.abs(dt - fd_t)) < 1e-7


@pytest.mark.parametrize("seed", range(5))
def test_maximum_principle_and_mean_value(seed):
    rng = np.random.default_rng(seed)
    n = 64
    h = random_field(rng, n, 4, 0.08)
    g = random_field(rng, n, 6, 1.0) + 0.3
    sol = solve_dirichlet(h, 1.0, g)
    # interior points strictly inside the boundary
    th = rng.uniform(0, 2 * np.pi, 400)
    r = rng.uniform(0, 0.95, 400) * (1.0 + h(th))
    inside = sol.evaluate(r, th)
    gv = g.values(1024)
    assert inside.max() <= gv.max() + 1e-10 and inside.min() >= gv.min() - 1e-10
    circle = sol.evaluate(np.full(256, 0.5), grid(256))
    assert np.mean(circle) == pytest.approx(sol.evaluate(0.0, 0.0), abs=1e-13)


def test_ill_conditioned_raises():
    h = PeriodicField.from_modes([(1, 0.45, 0.0), (2, 0.2, 0.0)], 256)
    with pytest.raises(SolverError):
        solve_dirichlet(h, 1.0, PeriodicField.constant(1.0, 256))


def test_unattainable_tolerance_raises():
    h = PeriodicField.from_modes([(2, 0.05, 0.0)], 32)
    with pytest.raises(SolverError):
        solve_dirichlet(h, 1.0, PeriodicField.from_modes([(3, 1.0, 0.0)], 32), tol=1e-30)


def test_resolution_mismatch():
    with pytest.raises(ValueError):
        solve_dirichlet(PeriodicField.zeros(16), 1.0, PeriodicField.zeros(32))
