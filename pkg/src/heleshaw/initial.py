"""Initial height fields and their normalisation to the reference circle."""

from __future__ import annotations

import numpy as np
from scipy import optimize

from .geometry import area, first_moment
from .spectral import PeriodicField, sobolev_norm, transform_forward

NORMALIZE_MODES = ("none", "area", "area+center")


def normalize_area(h: PeriodicField, rho: float = 1.0) -> PeriodicField:
    """Shift the mean so the enclosed area is exactly pi rho^2."""
    c = h.coeffs.copy()
    c[0] = 0.0
    fluct = PeriodicField(c, h.n)
    # area = pi [(rho + mean)^2 + mean(h'^2)]
    var = sobolev_norm(fluct, 0) ** 2 / (2 * np.pi)
    if var >= rho**2:
        raise ValueError("perturbation too large to normalise the area")
    c[0] = np.sqrt(rho**2 - var) - rho
    return PeriodicField(c, h.n)


def normalize_area_and_center(h: PeriodicField, rho: float = 1.0) -> PeriodicField:
    """Adjust the mean and mode 1 so that area = pi rho^2 and the first moment vanishes."""
    h = normalize_area(h, rho)

    def shifted(x):
        c = h.coeffs.copy()
        c[0] += x[0]
        c[1] += 0.5 * (x[1] - 1j * x[2])
        return PeriodicField(c, h.n)

    def residual(x):
        f = shifted(x)
        z = first_moment(f, rho)
        return [area(f, rho) / np.pi - rho**2, z.real / np.pi, z.imag / np.pi]

    x, info, ier, msg = optimize.fsolve(residual, np.zeros(3), xtol=1e-15, full_output=True)
    if ier != 1 and np.max(np.abs(residual(x))) > 1e-13:
        raise ValueError(f"could not centre the initial data: {msg}")
    return shifted(x)


def build_initial(n: int, modes=None, samples=None, normalize: str = "area", rho: float = 1.0) -> PeriodicField:
    if samples is not None:
        samples = np.asarray(samples, dtype=float)
        h = transform_forward(samples)
        if h.n != n:
            h = h.resample(n)
    else:
        h = PeriodicField.from_modes(modes or [], n)
    if normalize == "area":
        return normalize_area(h, rho)
    if normalize == "area+center":
        return normalize_area_and_center(h, rho)
    if normalize == "none":
        return h
    raise ValueError(f"unknown normalisation {normalize!r}")
