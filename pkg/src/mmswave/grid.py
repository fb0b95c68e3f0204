"""Periodic grid and the dual physical/spectral field container.

Spectral coefficients are normalised so that ``physical[j] = sum_k
spectral[k] exp(i k z_j)``, i.e. ``spectral = fft(physical) / n``.  With this
choice a grid value of the spectrum is directly the amplitude of the
corresponding plane wave, which is how the mode amplitudes A1(k) are used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridError, OffGridCarrier

ON_GRID_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    n: int
    length: float

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise GridError(f"n must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise GridError("length must be positive")

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.length

    @property
    def dz(self) -> float:
        return self.length / self.n

    @cached_property
    def z(self) -> np.ndarray:
        return np.arange(self.n) * self.dz

    @cached_property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dz)

    @property
    def k_nyquist(self) -> float:
        return np.pi / self.dz

    def mode_index(self, k0: float) -> int:
        """Index of wavenumber ``k0`` on the grid; raises if not a grid mode."""
        m = k0 / self.dk
        if abs(m - round(m)) * self.dk > ON_GRID_TOL * max(abs(k0), 1.0):
            raise OffGridCarrier(f"k0={k0} is not a multiple of dk={self.dk}")
        m = int(round(m))
        if abs(m) >= self.n // 2:
            raise OffGridCarrier(f"k0={k0} beyond Nyquist")
        return m % self.n

    def check_carrier(self, k0: float) -> None:
        """Carrier on-grid with room for the third harmonic below Nyquist."""
        self.mode_index(k0)
        needed = 8 * 3 * abs(k0) / self.dk
        if self.n < needed:
            raise GridError(
                f"n={self.n} leaves too little headroom for 3k0 (need n >= {needed:.0f})"
            )


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Field values on a :class:`Grid` in both representations."""

    grid: Grid
    spectral: np.ndarray
    physical: np.ndarray = field(repr=False)

    @classmethod
    def from_spectral(cls, grid: Grid, spectral) -> "SpectralField":
        spectral = np.asarray(spectral, dtype=complex)
        return cls(grid, spectral, np.fft.ifft(spectral) * grid.n)

    @classmethod
    def from_physical(cls, grid: Grid, physical) -> "SpectralField":
        physical = np.asarray(physical, dtype=complex)
        return cls(grid, np.fft.fft(physical) / grid.n, physical)

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.n, complex), np.zeros(grid.n, complex))

    def conjugate_asymmetry(self) -> float:
        """max |F(-k) - F(k)*| relative to max |F|; zero for a real field."""
        s = self.spectral
        mirrored = np.conj(s[(-np.arange(s.size)) % s.size])
        scale = np.max(np.abs(s))
        return 0.0 if scale == 0 else float(np.max(np.abs(s - mirrored)) / scale)

    def is_real(self, tol: float = 1e-12) -> bool:
        return self.conjugate_asymmetry() <= tol

    def imag_fraction(self) -> float:
        """max |Im f(z)| / max |f(z)| in physical space."""
        scale = np.max(np.abs(self.physical))
        return 0.0 if scale == 0 else float(np.max(np.abs(self.physical.imag)) / scale)

    def l2(self) -> float:
        return float(np.linalg.norm(self.physical))
