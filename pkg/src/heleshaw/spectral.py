"""
Periodic fields on the unit circle and the spectral calculus built on them.

A field of resolution N is stored by its one-sided Fourier coefficients
``coeffs[k] = c_k`` for ``k = 0..N/2`` (the numpy ``rfft`` layout divided by
N), so that

    f(theta) = c_0 + 2 Re sum_{0<k<N/2} c_k e^{ik theta} + c_{N/2} cos(N theta / 2).

In two-sided form the Nyquist coefficient is split evenly, c_{+-N/2} = c_{N/2}/2.
The symmetric-normalised coefficients used for Sobolev norms are
hhat_k = sqrt(2 pi) c_k.

Nonlinear operations are evaluated on a zero-padded grid of at least 3N/2
points and truncated back to N modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

SQRT_2PI = np.sqrt(2.0 * np.pi)


def padded_size(n: int) -> int:
    """Smallest even grid size >= 3n/2."""
    m = -(-3 * n // 2)
    return m + (m % 2)


def grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def _resize(coeffs: np.ndarray, n_from: int, n_to: int) -> np.ndarray:
    """Map one-sided coefficients between resolutions (zero-pad or truncate)."""
    out = np.zeros(n_to // 2 + 1, dtype=complex)
    if n_to >= n_from:
        out[: n_from // 2 + 1] = coeffs
        if n_to > n_from:
            # Nyquist cosine becomes an ordinary +-k pair
            out[n_from // 2] *= 0.5
    else:
        out[:] = coeffs[: n_to // 2 + 1]
        # the new Nyquist carries both +-k/2 contributions as seen on the grid
        out[n_to // 2] = 2.0 * out[n_to // 2].real
    return out


@dataclass(frozen=True, eq=False)
class PeriodicField:
    """Real function on the circle, band-limited to |k| <= N/2."""

    coeffs: np.ndarray
    n: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if self.n < 2 or self.n % 2:
            raise ValueError(f"resolution must be even, got {self.n}")
        if c.shape != (self.n // 2 + 1,):
            raise ValueError(f"expected {self.n // 2 + 1} coefficients, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite Fourier coefficients")
        c = c.copy()
        # real-valuedness: mean and Nyquist are real
        c[0] = c[0].real
        c[-1] = c[-1].real
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "PeriodicField":
        return cls(np.zeros(n // 2 + 1, dtype=complex), n)

    @classmethod
    def constant(cls, value: float, n: int) -> "PeriodicField":
        c = np.zeros(n // 2 + 1, dtype=complex)
        c[0] = value
        return cls(c, n)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], n: int) -> "PeriodicField":
        return transform_forward(fn(grid(n)))

    @classmethod
    def from_modes(cls, modes, n: int) -> "PeriodicField":
        """Sum of ``amplitude * cos(k theta - phase)`` over (k, amplitude, phase) triples."""
        c = np.zeros(n // 2 + 1, dtype=complex)
        for k, amp, phase in modes:
            k = abs(int(k))
            if k > n // 2:
                raise ValueError(f"mode {k} exceeds resolution {n}")
            if k == 0:
                c[0] += amp * np.cos(phase)
            elif k == n // 2:
                c[k] += amp * np.cos(phase)
            else:
                c[k] += 0.5 * amp * np.exp(-1j * phase)
        return cls(c, n)

    # evaluation ---------------------------------------------------------

    def values(self, m: int | None = None) -> np.ndarray:
        """Samples on the m-point uniform grid (default: the native grid)."""
        m = self.n if m is None else m
        if m == self.n:
            return np.fft.irfft(self.coeffs * self.n, n=self.n)
        return np.fft.irfft(_resize(self.coeffs, self.n, m) * m, n=m)

    def __call__(self, theta) -> np.ndarray:
        """Evaluate the trigonometric interpolant at arbitrary angles."""
        theta = np.asarray(theta, dtype=float)
        k = np.arange(self.n // 2 + 1)
        w = np.full(k.shape, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        phase = np.exp(1j * np.multiply.outer(theta, k))
        return (phase * (w * self.coeffs)).real.sum(axis=-1)

    def mode(self, k: int) -> complex:
        """Two-sided coefficient c_k."""
        half = self.n // 2
        ka = abs(k)
        if ka > half:
            return 0.0j
        c = self.coeffs[ka]
        if ka == half:
            return c / 2.0
        return c if k >= 0 else np.conj(c)

    def hhat(self, k: int) -> complex:
        return SQRT_2PI * self.mode(k)

    def resample(self, n: int) -> "PeriodicField":
        return PeriodicField(_resize(self.coeffs, self.n, n), n)

    # linear algebra -----------------------------------------------------

    def _check(self, other: "PeriodicField"):
        if not isinstance(other, PeriodicField):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"resolution mismatch: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        if np.isscalar(other):
            c = self.coeffs.copy()
            c[0] += other
            return PeriodicField(c, self.n)
        other = self._check(other)
        return PeriodicField(self.coeffs + other.coeffs, self.n)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rsub__(self, other):
        return (-1.0) * self + other

    def __neg__(self):
        return PeriodicField(-self.coeffs, self.n)

    def __mul__(self, other):
        if np.isscalar(other):
            return PeriodicField(self.coeffs * other, self.n)
        return product(self, other)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values(padded_size(self.n)))))

    def __repr__(self):
        return f"PeriodicField(n={self.n}, c_0={self.coeffs[0].real:.6g})"


def transform_forward(samples) -> PeriodicField:
    """Coefficients of the trigonometric interpolant of grid samples."""
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[-1]
    if samples.ndim != 1:
        raise ValueError("samples must be one-dimensional")
    if n < 8 or n % 2:
        raise ValueError(f"resolution must be even and >= 8, got {n}")
    if not np.all(np.isfinite(samples)):
        raise ValueError("non-finite samples")
    return PeriodicField(np.fft.rfft(samples) / n, n)


def derivative(f: PeriodicField, order: int = 1) -> PeriodicField:
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    k = np.arange(f.n // 2 + 1)
    c = f.coeffs * (1j * k) ** order
    if order % 2:
        c[-1] = 0.0
    return PeriodicField(c, f.n)


def from_padded(values: np.ndarray, n: int) -> PeriodicField:
    """Transform padded-grid samples and truncate back to resolution n."""
    m = values.shape[-1]
    return PeriodicField(_resize(np.fft.rfft(values) / m, m, n), n)


def pointwise(fn: Callable[..., np.ndarray], *fields: PeriodicField) -> PeriodicField:
    """Apply ``fn`` to the fields' values on the padded grid; dealiased result."""
    n = fields[0].n
    if any(f.n != n for f in fields):
        raise ValueError("resolution mismatch")
    m = padded_size(n)
    return from_padded(fn(*(f.values(m) for f in fields)), n)


def product(f: PeriodicField, g: PeriodicField) -> PeriodicField:
    if f.n != g.n:
        raise ValueError(f"resolution mismatch: {f.n} vs {g.n}")
    return pointwise(np.multiply, f, g)


def _sobolev_weights(n: int, s: float) -> np.ndarray:
    # weight of each one-sided slot, including the factor 2 for the -k twin
    k = np.arange(n // 2 + 1, dtype=float)
    w = np.ones_like(k) if s == 0 else 1.0 + k ** (2.0 * s)
    w[0] = 1.0
    w[1:] *= 2.0
    # Nyquist slot holds c_{+-N/2} = c/2 each
    w[-1] *= 0.25
    return w


def sobolev_norm(f: PeriodicField, s: float) -> float:
    """sqrt(sum_k w_s(k) |hhat_k|^2), w_s(k) = 1 + |k|^{2s} (k != 0), w_s(0) = 1; s = 0 is L2."""
    if s < 0:
        raise ValueError("Sobolev index must be nonnegative")
    w = _sobolev_weights(f.n, s)
    return float(np.sqrt(2.0 * np.pi * np.sum(w * np.abs(f.coeffs) ** 2)))


def integrate(f: PeriodicField) -> float:
    """Integral over [0, 2pi)."""
    return float(2.0 * np.pi * f.coeffs[0].real)
