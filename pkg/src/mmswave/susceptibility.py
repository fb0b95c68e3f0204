"""Single-pole rational susceptibilities and the complex refractive index.

Two models are supported, both written with the sqrt(2 pi) factor of the
unitary Fourier convention kept inside ``chi_hat``:

* ``Toy(gamma, a)``:    chi(w) = 1 / (sqrt(2 pi) (gamma - i a w))
* ``Lorentz(a, b, c)``: chi(w) = 1 / (sqrt(2 pi) (a w^2 + i b w + c))

so that n^2(w) = 1 + sqrt(2 pi) chi(w).  The Lorentz parameters absorb the
oscillator constants via a = -1/wp^2, b = -gamma/wp^2, c = wr^2/wp^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidModel, NearPole

SQRT_2PI = np.sqrt(2.0 * np.pi)
POLE_TOL = 1e-14


@dataclass(frozen=True)
class Toy:
    """Exponential-memory kernel u e^{-vt} H(t) with gamma = v/u, a = 1/u."""

    gamma: float
    a: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.a > 0):
            raise InvalidModel(f"toy model needs gamma > 0 and a > 0, got {self}")

    kind = "toy"

    def denominator(self, omega):
        return self.gamma - 1j * self.a * omega

    def denominator_derivs(self, omega):
        return -1j * self.a, 0.0

    def params(self) -> dict:
        return {"gamma": self.gamma, "a": self.a}


@dataclass(frozen=True)
class Lorentz:
    """Damped-oscillator susceptibility in the (a, b, c) parametrisation."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0:
            # degree drops; the quartic Sellmeier equation needs a != 0
            raise InvalidModel("Lorentz model needs a != 0")
        poles = np.roots([self.a, 1j * self.b, self.c])
        # a w^2 + i b w + c has a real root only if Im of some root vanishes
        if np.any(np.abs(poles.imag) <= 1e-12 * np.maximum(1.0, np.abs(poles))):
            raise InvalidModel(f"Lorentz denominator has a real root: {poles}")

    kind = "lorentz"

    def denominator(self, omega):
        return self.a * omega**2 + 1j * self.b * omega + self.c

    def denominator_derivs(self, omega):
        return 2 * self.a * omega + 1j * self.b, 2 * self.a

    def params(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


SusceptibilityModel = Union[Toy, Lorentz]


def model_from_dict(kind: str, params: dict) -> SusceptibilityModel:
    kind = kind.lower()
    if kind == "toy":
        return Toy(gamma=float(params["gamma"]), a=float(params["a"]))
    if kind == "lorentz":
        return Lorentz(a=float(params["a"]), b=float(params["b"]), c=float(params["c"]))
    raise InvalidModel(f"unknown model kind {kind!r}")


def _checked_denominator(model, omega):
    q = model.denominator(omega)
    if np.any(np.abs(q) <= POLE_TOL):
        raise NearPole(f"|denominator| <= {POLE_TOL:g} at omega={omega}")
    return q


def chi_hat(model: SusceptibilityModel, omega):
    """Susceptibility at (complex) frequency ``omega``; vectorised."""
    return 1.0 / (SQRT_2PI * _checked_denominator(model, omega))


def chi_derivs(model: SusceptibilityModel, omega):
    """First and second frequency derivatives of :func:`chi_hat`.

    With chi = 1/(sqrt(2 pi) Q):  chi' = -Q'/(sqrt(2 pi) Q^2) and
    chi'' = (2 Q'^2 - Q Q'')/(sqrt(2 pi) Q^3).
    """
    q = _checked_denominator(model, omega)
    dq, d2q = model.denominator_derivs(omega)
    first = -dq / (SQRT_2PI * q**2)
    second = (2 * dq**2 - q * d2q) / (SQRT_2PI * q**3)
    return first, second


def n_squared(model: SusceptibilityModel, omega):
    """Squared complex refractive index 1 + sqrt(2 pi) chi(omega)."""
    return 1.0 + SQRT_2PI * chi_hat(model, omega)
