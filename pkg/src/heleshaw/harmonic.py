"""
Harmonic pressure correction on the star-shaped fluid domain.

The correction is expanded as p(r, theta) = sum_k a_k (r/R)^{|k|} e^{ik theta}
with R = rho + max h, so every basis function is bounded by one on the
boundary. Coefficients come from collocating the Dirichlet data at the N
boundary nodes (rho + h(theta_j), theta_j) and solving the dense real system
with LU.

The point source is carried analytically by the background fields
p_bar = 1/rho - (mu/2pi) log(|x|/rho), u_bar = (mu/2pi) x/|x|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import SolverError
from .geometry import check_star_shaped
from .spectral import PeriodicField, from_padded, grid, padded_size

RCOND_MIN = 1e-14


def background_fields(rho: float, mu_t: float, h: PeriodicField):
    """Boundary trace of p_bar and the polar components of u_bar on Gamma.

    Returns (p_bar on Gamma, u_bar radial, u_bar tangential); the tangential
    part is identically zero because the source flow is radial.
    """
    check_star_shaped(h, rho)
    m = padded_size(h.n)
    r = rho + h.values(m)
    q = mu_t / (2.0 * np.pi)
    p_bar = from_padded(1.0 / rho - q * np.log(r / rho), h.n)
    u_r = from_padded(q / r, h.n)
    return p_bar, u_r, PeriodicField.zeros(h.n)


def _basis(n: int, rr: np.ndarray, theta: np.ndarray, with_derivatives=False):
    """Real basis [1, s^k cos k, s^k sin k] at scaled radii rr = r/R.

    Column layout: 0 -> constant, 1..n/2 -> cosines k=1..n/2,
    n/2+1..n-1 -> sines k=1..n/2-1.
    """
    half = n // 2
    kc = np.arange(1, half + 1)
    ks = np.arange(1, half)
    pc = rr[:, None] ** kc
    ps = rr[:, None] ** ks
    cos = np.cos(theta[:, None] * kc)
    sin = np.sin(theta[:, None] * ks)
    b = np.hstack([np.ones((rr.size, 1)), pc * cos, ps * sin])
    if not with_derivatives:
        return b
    # d/ds of s^k is k s^{k-1}; divide by s where s > 0
    dpc = kc * rr[:, None] ** (kc - 1)
    dps = ks * rr[:, None] ** (ks - 1)
    b_s = np.hstack([np.zeros((rr.size, 1)), dpc * cos, dps * sin])
    b_t = np.hstack([np.zeros((rr.size, 1)), -kc * pc * np.sin(theta[:, None] * kc), ks * ps * np.cos(theta[:, None] * ks)])
    return b, b_s, b_t


def _real_to_complex(x: np.ndarray, n: int) -> np.ndarray:
    half = n // 2
    a = np.zeros(half + 1, dtype=complex)
    a[0] = x[0]
    a[1:half] = 0.5 * (x[1:half] - 1j * x[half + 1 :])
    a[half] = x[half]
    return a


def _complex_to_real(a: np.ndarray, n: int) -> np.ndarray:
    half = n // 2
    x = np.zeros(n)
    x[0] = a[0].real
    x[1:half] = 2.0 * a[1:half].real
    x[half] = a[half].real
    x[half + 1 :] = -2.0 * a[1:half].imag
    return x


@dataclass(frozen=True, eq=False)
class HarmonicSolution:
    """Coefficients a_k (one-sided, rfft layout) of sum a_k (r/R)^|k| e^{ik theta}."""

    coeffs: np.ndarray
    scale_radius: float
    residual: float
    n: int

    @property
    def _real(self):
        return _complex_to_real(self.coeffs, self.n)

    def mode(self, k: int) -> complex:
        ka = abs(k)
        if ka > self.n // 2:
            return 0.0j
        a = self.coeffs[ka]
        if ka == self.n // 2:
            return a / 2.0
        return a if k >= 0 else np.conj(a)

    def evaluate(self, r, theta) -> np.ndarray:
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        b = _basis(self.n, (r / self.scale_radius).ravel(), theta.ravel())
        return (b @ self._real).reshape(r.shape)

    def gradient(self, r, theta):
        """(dp/dr, (1/r) dp/dtheta) at the given points."""
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        _, b_s, b_t = _basis(self.n, (r / self.scale_radius).ravel(), theta.ravel(), True)
        x = self._real
        dr = (b_s @ x) / self.scale_radius
        dt = (b_t @ x) / r.ravel()
        return dr.reshape(r.shape), dt.reshape(r.shape)


def solve_dirichlet(h: PeriodicField, rho: float, g: PeriodicField, tol: float | None = None) -> HarmonicSolution:
    """Harmonic function in {r < rho + h} equal to g on the boundary nodes."""
    if g.n != h.n:
        raise ValueError("boundary data and height must share a resolution")
    check_star_shaped(h, rho)
    n = h.n
    theta = grid(n)
    r = rho + h.values()
    big_r = float(np.max(r))
    rhs = g.values()
    b = _basis(n, r / big_r, theta)
    lu, piv = linalg.lu_factor(b, check_finite=False)
    rcond, info = linalg.lapack.dgecon(lu, np.linalg.norm(b, 1), norm="1")
    if info != 0 or not rcond > RCOND_MIN:
        raise SolverError(f"collocation matrix ill-conditioned (rcond={rcond:.3g})")
    x = linalg.lu_solve((lu, piv), rhs, check_finite=False)
    residual = float(np.max(np.abs(b @ x - rhs)))
    if tol is None:
        tol = 1e-10 * max(1.0, float(np.max(np.abs(rhs))))
    if not np.isfinite(residual) or residual > tol:
        raise SolverError(f"collocation residual {residual:.3g} exceeds tolerance {tol:.3g}")
    return HarmonicSolution(_real_to_complex(x, n), big_r, residual, n)


def boundary_gradient(sol: HarmonicSolution, h: PeriodicField, rho: float):
    """Dealiased boundary traces of dp/dr and (1/r) dp/dtheta at r = rho + h."""
    m = padded_size(h.n)
    dr, dt = sol.gradient(rho + h.values(m), grid(m))
    return from_padded(dr, h.n), from_padded(dt, h.n)


def boundary_gradient_values(sol: HarmonicSolution, h: PeriodicField, rho: float):
    """Same as boundary_gradient but returned as padded-grid samples."""
    m = padded_size(h.n)
    return sol.gradient(rho + h.values(m), grid(m))
