"""
Geometry of the star-shaped boundary r = rho + h(theta).

All rational quantities are evaluated pointwise on the padded grid and
truncated back to the field's resolution. Area and first moments are exact
trapezoidal quadratures on a 2N grid (the integrands are trigonometric
polynomials of degree < 2N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .spectral import PeriodicField, derivative, from_padded, grid, padded_size

# boundary must stay at least this fraction of rho away from the origin
STAR_SHAPE_MARGIN = 0.05


def check_star_shaped(h: PeriodicField, rho: float) -> None:
    if not rho > 0:
        raise GeometryError(f"reference radius must be positive, got {rho}")
    hmin = float(np.min(h.values(padded_size(h.n))))
    if not np.isfinite(hmin) or rho + hmin < STAR_SHAPE_MARGIN * rho:
        raise GeometryError(
            f"boundary not star-shaped: rho + min h = {rho + hmin:.3g} < {STAR_SHAPE_MARGIN} rho"
        )


def _padded_parts(h: PeriodicField, rho: float, second=False):
    m = padded_size(h.n)
    r = rho + h.values(m)
    h1 = derivative(h, 1).values(m)
    if not second:
        return m, r, h1
    return m, r, h1, derivative(h, 2).values(m)


def metric_factor(h: PeriodicField, rho: float) -> PeriodicField:
    """J_h = sqrt((rho + h)^2 + h_theta^2)."""
    check_star_shaped(h, rho)
    _, r, h1 = _padded_parts(h, rho)
    return from_padded(np.sqrt(r**2 + h1**2), h.n)


def curvature_values(r, h1, h2):
    return (-r * h2 + r**2 + 2.0 * h1**2) / (r**2 + h1**2) ** 1.5


def curvature(h: PeriodicField, rho: float) -> PeriodicField:
    """Curvature of r = rho + h(theta); the circle of radius rho has +1/rho."""
    check_star_shaped(h, rho)
    _, r, h1, h2 = _padded_parts(h, rho, second=True)
    return from_padded(curvature_values(r, h1, h2), h.n)


def normal_direction(h: PeriodicField, rho: float) -> PeriodicField:
    """Tangential coefficient -h_theta/(rho + h) of the direction N + c T."""
    check_star_shaped(h, rho)
    _, r, h1 = _padded_parts(h, rho)
    return from_padded(-h1 / r, h.n)


def _radius_on_quadrature_grid(h: PeriodicField, rho: float):
    m = 2 * h.n
    return rho + h.values(m), grid(m)


def area(h: PeriodicField, rho: float) -> float:
    """(1/2) int (rho + h)^2 dtheta."""
    check_star_shaped(h, rho)
    r, _ = _radius_on_quadrature_grid(h, rho)
    return float(np.pi * np.mean(r**2))


def first_moment(h: PeriodicField, rho: float) -> complex:
    """(1/3) int (rho + h)^3 e^{i theta} dtheta = int_Omega (x + iy) dA."""
    r, theta = _radius_on_quadrature_grid(h, rho)
    return complex(2.0 * np.pi / 3.0 * np.mean(r**3 * np.exp(1j * theta)))


def moments(h: PeriodicField, rho: float) -> tuple[float, float]:
    """(int_Omega x dA, int_Omega y dA)."""
    check_star_shaped(h, rho)
    z = first_moment(h, rho)
    return z.real, z.imag


@dataclass(frozen=True, eq=False)
class BoundaryGeometry:
    h: PeriodicField
    rho: float
    j_h: PeriodicField
    curvature: PeriodicField
    calN_t_coeff: PeriodicField
    area: float
    moment_x: float
    moment_y: float

    @classmethod
    def of(cls, h: PeriodicField, rho: float) -> "BoundaryGeometry":
        mx, my = moments(h, rho)
        return cls(
            h=h,
            rho=rho,
            j_h=metric_factor(h, rho),
            curvature=curvature(h, rho),
            calN_t_coeff=normal_direction(h, rho),
            area=area(h, rho),
            moment_x=mx,
            moment_y=my,
        )
