"""Model-specific closed forms of the MMS coefficients.

These are the hand-reduced expressions for the toy and Lorentz models,
written directly in terms of the model parameters and the Sellmeier operator
symbols rather than through chi and its derivatives.  They serve as an
independent check on the generic route in :mod:`mmswave.mms`.
"""
from __future__ import annotations

from .susceptibility import Lorentz, Toy


def toy_group_velocity(m: Toy, k, w):
    return (2 * m.a * k * w + 2j * m.gamma * k) / (3 * m.a * w**2 + 2j * w * (m.gamma + 1) - m.a * k**2)


def toy_alpha(m: Toy, k, w, vg):
    return vg / (2 * k) * (1 + m.gamma**2 / (m.gamma - 1j * m.a * w) ** 3)


def toy_c1(m: Toy, k, w):
    g3 = m.gamma - 3j * m.a * w
    return 9 * w**2 * g3 / (-9 * w**2 * g3 + 9 * k**2 * g3 - 9 * w**2)


def toy_c2(m: Toy, k, w):
    wi = w.imag
    s = 2 * wi - 1j * w
    num = -(3 * m.a * s**3 + 3 * m.gamma * s**2)
    den = m.a * s**3 + k**2 * (m.gamma + m.a * s) + s**2 * (m.gamma + 1)
    return num / den


def lorentz_group_velocity(m: Lorentz, k, w):
    a, b, c = m.a, m.b, m.c
    num = 2j * k * a * w**2 - 2 * k * b * w + 2j * k * c
    den = 4j * a * w**3 - 3 * b * w**2 + 2j * w * (c + 1) - 2j * k**2 * a * w + k**2 * b
    return num / den


def lorentz_p4(m: Lorentz, w):
    a, b, c = m.a, m.b, m.c
    return (-a**3 * w**6 + w**4 * (3 * a * b**2 - 3 * a**2 * c) - 3j * a**2 * b * w**5
            + w**3 * (-6j * a * b * c + 1j * a * b + 1j * b**3)
            + w**2 * (-3 * a * c**2 + 3 * a * c + 3 * b**2 * c)
            - 3j * b * c**2 * w - c**3 - c**2)


def lorentz_alpha(m: Lorentz, k, w, vg):
    q = m.a * w**2 + 1j * m.b * w + m.c
    return vg / (2 * k) * (-lorentz_p4(m, w) / q**3)


def lorentz_c1(m: Lorentz, k, w):
    a, b, c = m.a, m.b, m.c
    q1 = 81 * a * w**4 + 27j * b * w**3 + 9 * c * w**2
    den = (w**2 * (81 * a * k**2 - 9 * c - 9) - 81 * a * w**4 + 27j * b * k**2 * w
           - 27j * b * w**3 + 9 * c * k**2)
    return q1 / den


def lorentz_c2(m: Lorentz, k, w):
    a, b, c = m.a, m.b, m.c
    wi = w.imag
    q2 = 3 * (a * w**4 + 8j * a * w**3 * wi - 24 * a * w**2 * wi**2 - 32j * a * w * wi**3
              + 16 * a * wi**4 + 1j * b * w**3 - 6 * b * w**2 * wi - 12j * b * w * wi**2
              + 8 * b * wi**3 + c * w**2 + 4j * c * w * wi - 4 * c * wi**2)
    den = (w**2 * (a * k**2 + 24 * a * wi**2 + 6 * b * wi - c - 1)
           + w * (4j * a * k**2 * wi + 32j * a * wi**3 + 1j * b * k**2 + 12j * b * wi**2
                  - 4j * c * wi - 4j * wi)
           + w**3 * (-8j * a * wi - 1j * b)
           - 4 * a * k**2 * wi**2 - a * w**4 - 16 * a * wi**4 - 2 * b * k**2 * wi
           - 8 * b * wi**3 + c * k**2 + 4 * c * wi**2 + 4 * wi**2)
    return q2 / den


def closed_form_coefficients(model, k, w, vg) -> dict:
    """alpha, c1, c2 and w'(k) from the model-specific reductions."""
    if isinstance(model, Toy):
        return {"vg": toy_group_velocity(model, k, w), "alpha": toy_alpha(model, k, w, vg),
                "c1": toy_c1(model, k, w), "c2": toy_c2(model, k, w)}
    if isinstance(model, Lorentz):
        return {"vg": lorentz_group_velocity(model, k, w), "alpha": lorentz_alpha(model, k, w, vg),
                "c1": lorentz_c1(model, k, w), "c2": lorentz_c2(model, k, w)}
    raise TypeError(f"unsupported model {model!r}")
