"""Gaussian wave packets, reference initial data and the t=0 amplitude inversion."""
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from .errors import NewtonDiverged, OffGridCarrier
from .grid import Grid, SpectralField
from .mms import MmsCoefficients
from .modes import DispersionBranch, track_branch
from .susceptibility import SusceptibilityModel

SUPPORT_CUTOFF = 1e-20
TRACK_STEPS_PER_MODE = 4


def gaussian_spectrum(D: float, delta: float, k0: float, grid: Grid) -> np.ndarray:
    """One-sided Gaussian D exp(-delta (k-k0)^2) on k > 0."""
    if D <= 0 or delta <= 0:
        raise ValueError("D and delta must be positive")
    grid.mode_index(k0)  # raises OffGridCarrier
    k = grid.k
    return np.where(k > 0, D * np.exp(-delta * (k - k0) ** 2), 0.0).astype(complex)


def _mirror(pos: np.ndarray) -> np.ndarray:
    """Add the conjugate image of a one-sided spectrum at -k."""
    n = pos.size
    neg = np.conj(pos[(-np.arange(n)) % n])
    return pos + neg


def branch_frequencies(model: SusceptibilityModel, branch: DispersionBranch, grid: Grid,
                       A1: np.ndarray, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """omega(k) of the selected branch on every mode where |A1| > cutoff*max|A1|.

    The branch is continued outward from k0 one grid step at a time; modes
    below the cutoff get omega = 0 and must be dropped by the caller.
    """
    k = grid.k
    i0 = grid.mode_index(branch.k0)
    live = np.abs(A1) > cutoff * np.max(np.abs(A1))
    omega = np.zeros(grid.n, dtype=complex)
    omega[i0] = branch.omega0
    for step in (1, -1):
        i, w = i0, branch.omega0
        while True:
            j = i + step
            if j <= 0 or j >= grid.n // 2 or not live[j]:
                break
            w = track_branch(model, k[i], w, k[j], steps=TRACK_STEPS_PER_MODE)
            omega[j] = w
            i = j
    # keep exactly the contiguous tracked support
    tracked = np.zeros(grid.n, dtype=bool)
    tracked[i0] = True
    tracked |= omega != 0
    return np.where(tracked & live, omega, 0.0)


def _support(A1, omega):
    return np.where(omega != 0, A1, 0.0)


def linear_field(A1: np.ndarray, model: SusceptibilityModel, branch: DispersionBranch,
                 t: float, grid: Grid, omega: Optional[np.ndarray] = None) -> SpectralField:
    """Exact linear packet A1(k) e^{-i omega(k) t} plus its conjugate image."""
    if omega is None:
        omega = branch_frequencies(model, branch, grid, A1)
    pos = _support(A1, omega) * np.exp(-1j * omega * t)
    return SpectralField.from_spectral(grid, _mirror(pos))


def reference_ics(A1: np.ndarray, model: SusceptibilityModel, branch: DispersionBranch,
                  order: int, grid: Grid, omega: Optional[np.ndarray] = None) -> List[np.ndarray]:
    """Spectra of E, E_t, ..., d^{order-1}E/dt^{order-1} at t=0."""
    if order not in (3, 4):
        raise ValueError("order must be 3 or 4")
    if omega is None:
        omega = branch_frequencies(model, branch, grid, A1)
    base = _support(A1, omega)
    return [_mirror((-1j * omega) ** j * base) for j in range(order)]


def normalized_spectrum(model: SusceptibilityModel, branch: DispersionBranch, grid: Grid,
                        delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gaussian A1 scaled so that max|E(z,0)| = 1, with its branch frequencies."""
    A1 = gaussian_spectrum(1.0, delta, branch.k0, grid)
    omega = branch_frequencies(model, branch, grid, A1)
    peak = np.max(np.abs(linear_field(A1, model, branch, 0.0, grid, omega).physical))
    return A1 / peak, omega


def analytic_envelope(E0: SpectralField, k0: float) -> np.ndarray:
    """e^{-i k0 z} times the positive-wavenumber half of E0, in physical space."""
    grid = E0.grid
    half = np.where(grid.k > 0, E0.spectral, 0.0)
    return np.fft.ifft(half) * grid.n * np.exp(-1j * k0 * grid.z)


def solve_cubic(w: np.ndarray, kappa: complex, max_iter: int = 20,
                tol: float = 1e-12) -> Tuple[np.ndarray, int]:
    """Solve A + kappa |A|^2 A = w pointwise by Newton in (A, conj A).

    Returns the solution and the number of iterations taken.
    """
    w = np.asarray(w, dtype=complex)
    A = w.copy()
    scale = max(1.0, float(np.max(np.abs(w))))
    for it in range(1, max_iter + 1):
        F = A + kappa * np.abs(A) ** 2 * A - w
        # dF = p dA + q conj(dA)
        p = 1 + 2 * kappa * np.abs(A) ** 2
        q = kappa * A**2
        dA = (-F * np.conj(p) + q * np.conj(F)) / (np.abs(p) ** 2 - np.abs(q) ** 2)
        A = A + dA
        res = np.max(np.abs(A + kappa * np.abs(A) ** 2 * A - w))
        if res < tol * scale:
            return A, it
    raise NewtonDiverged(f"residual {res:.3g} after {max_iter} iterations")


def invert_for_A(E0: SpectralField, coeffs: MmsCoefficients, epsilon: float,
                 max_iter: int = 20, tol: float = 1e-12) -> SpectralField:
    """A(z,0) such that A + eps^2 c2 |A|^2 A matches the analytic part of E0."""
    w = analytic_envelope(E0, coeffs.branch.k0)
    A, _ = solve_cubic(w, epsilon**2 * coeffs.c2, max_iter, tol)
    return SpectralField.from_physical(E0.grid, A)


def initial_B(A0: SpectralField, c1: complex) -> SpectralField:
    """B(z,0) = -c1 A^3, cancelling the third-harmonic term at t=0."""
    return SpectralField.from_physical(A0.grid, -c1 * A0.physical**3)
