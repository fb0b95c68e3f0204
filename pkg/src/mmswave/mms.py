"""Multiple-scales coefficients, exact amplitude propagation, field reconstruction.

The amplitude equation for the envelope A is linear with constant
coefficients,

    A_t + vg A_z - i d2 A_zz = 0,    d2 = beta - alpha vg^2,

so every envelope mode exp(i q z) evolves by exp(lambda(q) t) with
lambda(q) = -i q vg - i q^2 d2.  The third-harmonic amplitude B is advected
at the (complex) group velocity of the 3k0 mode.  Both are propagated by
exact spectral exponentiation.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DegenerateC1, DegenerateC2, MissingB
from .grid import SpectralField
from .modes import DispersionBranch
from .susceptibility import SQRT_2PI, SusceptibilityModel, chi_derivs, n_squared

DEGENERACY_TOL = 1e-12
MARGINAL_TOL = 1e-14

WELL_POSED = "WellPosed"
ILL_POSED = "IllPosed"
MARGINAL = "Marginal"


@dataclass(frozen=True)
class MmsCoefficients:
    alpha: complex
    beta: complex
    c1: complex
    c2: complex
    d2: complex
    a1: float
    a2: float
    branch: DispersionBranch

    def as_dict(self) -> dict:
        b = self.branch
        out = {}
        for name, v in [("omega0", b.omega0), ("vg", b.vg), ("omega_3k", b.omega_3k),
                        ("vg_3k", b.vg_3k), ("alpha", self.alpha), ("beta", self.beta),
                        ("c1", self.c1), ("c2", self.c2), ("d2", self.d2)]:
            out[name] = [float(np.real(v)), float(np.imag(v))]
        out["k0"] = b.k0
        out["a1"] = self.a1
        out["a2"] = self.a2
        out["posedness"] = classify(self)
        return out


def compute_coefficients(model: SusceptibilityModel, branch: DispersionBranch) -> MmsCoefficients:
    k0, w, vg = branch.k0, branch.omega0, branch.vg
    d1, d2chi = chi_derivs(model, w)
    n2 = n_squared(model, w)
    alpha = vg * (n2 + 2 * w * SQRT_2PI * d1 + 0.5 * w**2 * SQRT_2PI * d2chi) / (2 * k0)
    beta = vg / (2 * k0)

    mismatch = n2 - n_squared(model, 3 * w)
    if abs(mismatch) < DEGENERACY_TOL:
        raise DegenerateC1(f"n^2(w0) - n^2(3 w0) = {mismatch}")
    c1 = 1.0 / mismatch

    # e^{i theta} e^{2 t w_i} oscillates at the shifted frequency w0 + 2 i w_i
    shifted = w + 2j * branch.omega_i
    denom = k0**2 - n_squared(model, shifted) * shifted**2
    if abs(denom) < DEGENERACY_TOL:
        raise DegenerateC2(f"c2 denominator {denom}")
    c2 = 3 * shifted**2 / denom

    d2 = beta - alpha * vg**2
    # Re lambda(q) = Re(-i q vg - i q^2 d2) = Im(d2) q^2 + Im(vg) q
    return MmsCoefficients(alpha=complex(alpha), beta=complex(beta), c1=complex(c1),
                           c2=complex(c2), d2=complex(d2), a1=float(np.imag(d2)),
                           a2=float(np.imag(vg)), branch=branch)


def growth_rate(coeffs: MmsCoefficients, q):
    """Complex rate lambda(q) of envelope mode exp(i q z)."""
    q = np.asarray(q, dtype=float)
    return -1j * q * coeffs.branch.vg - 1j * q**2 * coeffs.d2


def growth_curve(coeffs: MmsCoefficients, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return coeffs.a1 * q**2 + coeffs.a2 * q


def classify(coeffs: MmsCoefficients) -> str:
    if abs(coeffs.a1) < MARGINAL_TOL:
        return MARGINAL
    return ILL_POSED if coeffs.a1 > 0 else WELL_POSED


@dataclass(frozen=True)
class MmsSolution:
    """Envelope amplitudes in the frame of the carrier.

    ``t_A`` and ``t_B`` are the times the two amplitudes have been advanced
    to; :func:`reconstruct_E` requires them to agree.
    """

    A: SpectralField
    coeffs: MmsCoefficients
    epsilon: float
    B: Optional[SpectralField] = None
    t_A: float = 0.0
    t_B: float = 0.0

    @property
    def t(self) -> float:
        if self.B is not None and self.t_A != self.t_B:
            raise ValueError(f"A at t={self.t_A} but B at t={self.t_B}")
        return self.t_A

    @property
    def grid(self):
        return self.A.grid


def band_limit(f: SpectralField, qmax: float) -> SpectralField:
    """Zero every envelope mode with |q| > qmax."""
    spec = np.where(np.abs(f.grid.k) <= qmax, f.spectral, 0.0)
    return SpectralField.from_spectral(f.grid, spec)


def initial_solution(A0: SpectralField, coeffs: MmsCoefficients, epsilon: float,
                     B0: Optional[SpectralField] = None) -> MmsSolution:
    """Start a solution at t=0 with both envelopes limited to |q| <= k0.

    An envelope mode with |q| > k0 would put field content at negative
    wavenumber, outside what A exp(i k0 z) can represent; dropping those
    round-off-level modes keeps the ill-posed growth bounded on the grid.
    """
    k0 = coeffs.branch.k0
    A0 = band_limit(A0, k0)
    if B0 is not None:
        B0 = band_limit(B0, k0)
    return MmsSolution(A=A0, B=B0, coeffs=coeffs, epsilon=epsilon)


def propagate_A(sol: MmsSolution, dt: float) -> MmsSolution:
    """Advance A exactly by ``dt``."""
    q = sol.grid.k
    spec = sol.A.spectral * np.exp(growth_rate(sol.coeffs, q) * dt)
    return replace(sol, A=SpectralField.from_spectral(sol.grid, spec), t_A=sol.t_A + dt)


def propagate_B(sol: MmsSolution, dt: float) -> MmsSolution:
    """Advect B exactly by ``dt`` at the complex speed w'(3k0)."""
    if sol.B is None:
        raise MissingB("solution has no B amplitude")
    q = sol.grid.k
    spec = sol.B.spectral * np.exp(-1j * q * sol.coeffs.branch.vg_3k * dt)
    return replace(sol, B=SpectralField.from_spectral(sol.grid, spec), t_B=sol.t_B + dt)


def propagate(sol: MmsSolution, dt: float) -> MmsSolution:
    sol = propagate_A(sol, dt)
    return propagate_B(sol, dt) if sol.B is not None else replace(sol, t_B=sol.t_A)


def reconstruct_E(sol: MmsSolution) -> SpectralField:
    """Real electric field at time ``sol.t`` from the envelopes."""
    t = sol.t
    c, br = sol.coeffs, sol.coeffs.branch
    z = sol.grid.z
    A = sol.A.physical
    phase = np.exp(1j * (br.k0 * z - br.omega0 * t))
    eps2 = sol.epsilon**2

    analytic = A * phase
    correction = c.c1 * A**3 * phase**3 + c.c2 * np.abs(A) ** 2 * A * phase * np.exp(2 * t * br.omega_i)
    if sol.B is not None:
        correction = correction + sol.B.physical * np.exp(1j * (3 * br.k0 * z - br.omega_3k * t))
    analytic = analytic + eps2 * correction
    return SpectralField.from_physical(sol.grid, analytic + np.conj(analytic))
