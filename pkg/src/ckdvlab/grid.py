"""Periodic spectral grid and Fourier-multiplier operators.

All evolution modules discretize the time-like coordinate on a uniform
periodic grid.  Derivatives, the zero-mean antiderivative and the bounded
multiplier k^2/(1+k^2) are exact on the resolved modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MeanValueError, SingularDispersion

#: default relative tolerance on |mean| before the antiderivative is refused
MEAN_TOL_FACTOR = 1e-10


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform periodic grid with the standard symmetric wavenumber layout.

    Attributes:
        n: number of nodes (even, >= 8)
        length: domain length L
        center: coordinate of the domain midpoint
        nodes: sample points center - L/2 + j*L/n
        wavenumbers: 2*pi*m/L in FFT order; max |k| = pi*n/L
    """

    n: int
    length: float
    center: float
    nodes: np.ndarray = field(repr=False)
    wavenumbers: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return self.length / self.n

    def __eq__(self, other):
        if not isinstance(other, SpectralGrid):
            return NotImplemented
        return (self.n == other.n and self.length == other.length
                and self.center == other.center)


@dataclass(frozen=True)
class RealField:
    """Real-valued function sampled on a :class:`SpectralGrid`."""

    grid: SpectralGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"field shape {v.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def mean(self) -> float:
        return float(self.values.mean())

    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def l2(self) -> float:
        """L2 norm with the physical measure, sqrt(dx * sum v^2)."""
        return float(np.sqrt(self.grid.dx * np.sum(self.values ** 2)))

    def l2_spectral(self) -> float:
        """Same norm evaluated from Fourier coefficients (Parseval)."""
        vhat = np.fft.fft(self.values)
        return float(np.sqrt(self.grid.length * np.sum(np.abs(vhat) ** 2)) / self.grid.n)


def make_grid(n: int, length: float, center: float = 0.0) -> SpectralGrid:
    """Build a periodic grid with n nodes over [center - L/2, center + L/2)."""
    if n % 2 != 0 or n < 8:
        raise ValueError(f"grid size must be even and >= 8, got {n}")
    if not length > 0:
        raise ValueError(f"domain length must be positive, got {length}")
    nodes = center - length / 2 + (length / n) * np.arange(n)
    wavenumbers = 2 * np.pi * np.fft.fftfreq(n, d=length / n)
    nodes.setflags(write=False)
    wavenumbers.setflags(write=False)
    return SpectralGrid(n=n, length=float(length), center=float(center),
                        nodes=nodes, wavenumbers=wavenumbers)


def field_on(grid: SpectralGrid, values) -> RealField:
    """Wrap sample values (or a callable of the nodes) as a RealField."""
    if callable(values):
        values = values(grid.nodes)
    return RealField(grid=grid, values=np.broadcast_to(values, (grid.n,)))


def _nyquist_index(n: int) -> int:
    return n // 2


def spectral_derivative(f: RealField, order: int = 1) -> RealField:
    """Exact spectral derivative of the given order (1..4).

    Odd orders zero the Nyquist mode so the symbol stays odd and the
    output stays real.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    k = f.grid.wavenumbers
    sym = (1j * k) ** order
    if order % 2 == 1:
        sym = sym.copy()
        sym[_nyquist_index(f.grid.n)] = 0.0
    out = np.fft.ifft(sym * np.fft.fft(f.values)).real
    return RealField(grid=f.grid, values=out)


def mean_tolerance(f: RealField, mean_tol: float | None = None) -> float:
    if mean_tol is not None:
        return mean_tol
    return MEAN_TOL_FACTOR * max(f.sup(), 1e-300)


def spectral_antiderivative(f: RealField, mean_tol: float | None = None) -> RealField:
    """Unique zero-mean g with dg/dx = f; requires f to have zero mean.

    Raises:
        MeanValueError: |mean(f)| exceeds the tolerance (default
            1e-10 * sup|f|), i.e. the zero-mean constraint is violated.
    """
    tol = mean_tolerance(f, mean_tol)
    if abs(f.mean()) > tol:
        raise MeanValueError(
            f"antiderivative needs zero mean: |mean|={abs(f.mean()):.3e} > tol={tol:.3e}")
    k = f.grid.wavenumbers
    sym = np.zeros(f.grid.n, dtype=complex)
    nz = k != 0
    sym[nz] = 1.0 / (1j * k[nz])
    sym[0] = 0.0
    sym[_nyquist_index(f.grid.n)] = 0.0
    fhat = np.fft.fft(f.values)
    fhat[0] = 0.0  # drop round-off mean
    out = np.fft.ifft(sym * fhat).real
    return RealField(grid=f.grid, values=out)


def b2_multiplier(k: np.ndarray) -> np.ndarray:
    """Fourier symbol of dt^2 (1 - dt^2)^{-1}, i.e. -k^2/(1+k^2)."""
    return -k ** 2 / (1.0 + k ** 2)


def apply_b2(f: RealField) -> RealField:
    """Apply the bounded multiplier -k^2/(1+k^2) mode-wise; output has zero mean."""
    sym = b2_multiplier(f.grid.wavenumbers)
    out = np.fft.ifft(sym * np.fft.fft(f.values)).real
    return RealField(grid=f.grid, values=out)


def dispersion_omega_squared(k: float, sigma: int) -> float:
    """Plane-wave dispersion omega^2 = k^2 / (1 - sigma k^2).

    sigma = -1 keeps the denominator positive for all k (temporal dynamics
    well posed); sigma = +1 is singular at |k| = 1, the footprint of the
    spatial-dynamics dichotomy.

    Raises:
        SingularDispersion: 1 - sigma*k^2 == 0.
    """
    if sigma not in (-1, 1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma}")
    den = 1.0 - sigma * k * k
    if den == 0.0:
        raise SingularDispersion(f"dispersion singular at |k|={abs(k)}, sigma={sigma:+d}")
    return k * k / den
