"""Pseudospectral reference solver for the explicit Sellmeier-form equations.

The toy model is third order in time and the Lorentz model fourth order.
The state (E, E_t, ...) is stepped with classical RK4 on the first-order
system; z-derivatives are spectral, cubic products are formed in physical
space and dealiased with the 2/3 rule (optionally on a zero-padded grid).

Internally the real fields are held as one-sided rfft spectra for speed;
:class:`SolverState` exposes full two-sided spectra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence

import numpy as np

from .errors import BlowUp, ZeroACoefficient
from .grid import Grid, SpectralField
from .modes import dispersion_poly
from .susceptibility import Lorentz, SusceptibilityModel, Toy

BLOWUP_FACTOR = 1e6
DEALIAS_FRACTION = 2.0 / 3.0


def model_order(model: SusceptibilityModel) -> int:
    return 3 if isinstance(model, Toy) else 4


@dataclass(frozen=True)
class SolverState:
    derivs: List[SpectralField]
    t: float
    epsilon: float
    model: SusceptibilityModel
    grid: Grid

    @property
    def order(self) -> int:
        return len(self.derivs)

    @property
    def E(self) -> SpectralField:
        return self.derivs[0]

    def max_asymmetry(self) -> float:
        return max(f.conjugate_asymmetry() for f in self.derivs)

    def dead_zone_fraction(self) -> float:
        """Largest |E_j| in the dealiasing dead zone relative to its peak."""
        mask = dead_zone(self.grid)
        out = 0.0
        for f in self.derivs:
            peak = np.max(np.abs(f.spectral))
            if peak > 0:
                out = max(out, float(np.max(np.abs(f.spectral[mask]), initial=0.0) / peak))
        return out


def dead_zone(grid: Grid) -> np.ndarray:
    return np.abs(grid.k) > DEALIAS_FRACTION * grid.k_nyquist


def dealias(field: SpectralField) -> SpectralField:
    spec = np.where(dead_zone(field.grid), 0.0, field.spectral)
    return SpectralField.from_spectral(field.grid, spec)


def initial_state(spectra: Sequence[np.ndarray], model: SusceptibilityModel, epsilon: float,
                  grid: Grid, t: float = 0.0) -> SolverState:
    if len(spectra) != model_order(model):
        raise ValueError(f"{type(model).__name__} needs {model_order(model)} initial fields")
    return SolverState([SpectralField.from_spectral(grid, s) for s in spectra], t, epsilon, model, grid)


class _Operator:
    """Right-hand side on one-sided spectra (rfft / n convention)."""

    def __init__(self, model: SusceptibilityModel, epsilon: float, grid: Grid, pad: int = 1):
        if isinstance(model, Lorentz) and abs(model.a) < 1e-14:
            raise ZeroACoefficient("Lorentz a must be nonzero")
        self.model, self.eps2, self.n = model, epsilon**2, grid.n
        self.m = pad * grid.n
        k = np.arange(grid.n // 2 + 1) * grid.dk
        self.k2 = k**2
        self.keep = k <= DEALIAS_FRACTION * grid.k_nyquist
        self.order = model_order(model)

    def phys(self, half):
        h = np.zeros(self.m // 2 + 1, dtype=complex)
        h[: half.size] = half * self.keep
        return np.fft.irfft(h, self.m) * self.m

    def spec(self, x):
        return np.fft.rfft(x)[: self.n // 2 + 1] / self.m * self.keep

    def __call__(self, u):
        m, k2 = self.model, self.k2
        if isinstance(m, Toy):
            E, Et, Ett = u
            lin = (-(m.gamma + 1) * Ett - m.gamma * k2 * E - m.a * k2 * Et) / m.a
            if self.eps2 == 0:
                return lin
            e, et, ett, ln = (self.phys(v) for v in (E, Et, Ett, lin))
            N = m.gamma * (6 * e * et**2 + 3 * e**2 * ett) \
                + m.a * (6 * et**3 + 18 * e * et * ett + 3 * e**2 * ln)
            return lin - self.eps2 / m.a * self.spec(N)
        E, Et, Ett, Ettt = u
        a, b, c = m.a, m.b, m.c
        lin = ((1 + c) * Ett - b * Ettt - b * k2 * Et + c * k2 * E - a * k2 * Ett) / a
        if self.eps2 == 0:
            return lin
        e, et, ett, ettt, ln = (self.phys(v) for v in (E, Et, Ett, Ettt, lin))
        N = -c * (6 * e * et**2 + 3 * e**2 * ett) \
            + b * (6 * et**3 + 18 * e * et * ett + 3 * e**2 * ettt) \
            + a * (3 * ln * e**2 + 18 * e * ett**2 + 24 * ettt * e * et + 36 * et**2 * ett)
        return lin - self.eps2 / a * self.spec(N)


def _to_half(f: SpectralField) -> np.ndarray:
    return f.spectral[: f.grid.n // 2 + 1].copy()


def _to_field(grid: Grid, half: np.ndarray) -> SpectralField:
    return SpectralField.from_physical(grid, np.fft.irfft(half, grid.n) * grid.n)


def _rhs_state(state: SolverState, model_type) -> SpectralField:
    if not isinstance(state.model, model_type):
        raise TypeError(f"expected a {model_type.__name__} model")
    op = _Operator(state.model, state.epsilon, state.grid)
    return _to_field(state.grid, op([_to_half(f) for f in state.derivs]))


def toy_rhs(state: SolverState) -> SpectralField:
    """Highest time derivative E_ttt for the toy model."""
    return _rhs_state(state, Toy)


def lorentz_rhs(state: SolverState) -> SpectralField:
    """Highest time derivative E_tttt for the Lorentz model."""
    if isinstance(state.model, Lorentz) and abs(state.model.a) < 1e-14:
        raise ZeroACoefficient("Lorentz a must be nonzero")
    return _rhs_state(state, Lorentz)


def default_dt(model: SusceptibilityModel, grid: Grid, safety: float = 0.25) -> float:
    """safety / max|omega| over every root at every kept wavenumber."""
    k = np.arange(grid.n // 2 + 1) * grid.dk
    k = k[k <= DEALIAS_FRACTION * grid.k_nyquist]
    wmax = max(np.max(np.abs(np.roots(dispersion_poly(model, kk)))) for kk in k)
    return safety / wmax


def _rk4(op, u, h):
    def f(v):
        return v[1:] + [op(v)]

    k1 = f(u)
    k2 = f([x + 0.5 * h * d for x, d in zip(u, k1)])
    k3 = f([x + 0.5 * h * d for x, d in zip(u, k2)])
    k4 = f([x + h * d for x, d in zip(u, k3)])
    return [x + h / 6 * (a + 2 * b + 2 * c + d) for x, a, b, c, d in zip(u, k1, k2, k3, k4)]


def integrate(state: SolverState, t_end: float, dt: float, outputs: Sequence[float],
              pad: int = 1) -> List[SolverState]:
    """RK4 from ``state.t`` to ``t_end``; snapshots at each time in ``outputs``.

    The step is shortened per segment so every output time is hit exactly.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    outputs = list(outputs)
    if outputs != sorted(outputs) or (outputs and (outputs[0] < state.t or outputs[-1] > t_end)):
        raise ValueError("outputs must be sorted within [t, t_end]")
    op = _Operator(state.model, state.epsilon, state.grid, pad)
    u = [_to_half(f) for f in state.derivs]
    norms0 = [np.linalg.norm(x) for x in u]
    t = state.t
    snaps = []

    def snapshot(tt):
        return replace(state, derivs=[_to_field(state.grid, x) for x in u], t=tt)

    for target in outputs:
        span = target - t
        steps = math.ceil(span / dt - 1e-9) if span > 0 else 0
        h = span / steps if steps else 0.0
        with np.errstate(over="ignore", invalid="ignore"):
            for s in range(steps):
                u = _rk4(op, u, h)
                if s % 64 == 63 or s == steps - 1:
                    _check_growth(u, norms0, t + (s + 1) * h)
        t = target
        snaps.append(snapshot(t))
    return snaps


def _check_growth(u, norms0, t):
    for x, n0 in zip(u, norms0):
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or (n0 > 0 and nx > BLOWUP_FACTOR * n0):
            raise BlowUp(f"field norm grew to {nx:.3g} (initial {n0:.3g}) by t={t:.6g}")
