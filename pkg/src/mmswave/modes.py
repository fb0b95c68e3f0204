"""Complex dispersion branches of the Sellmeier-transformed equations.

Writing the dispersion relation w^2 n^2(w) = k^2 over the common denominator
gives a polynomial p(k, w) = P(w) - k^2 Q(w), cubic for the toy model and
quartic for the Lorentz model.  Roots are found from the companion matrix and
Newton-polished; derivatives of a branch come from implicit differentiation,
w'(k) = -p_k / p_w.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchJump,
    BranchPointError,
    DegenerateLeadingCoefficient,
    NoForwardBranch,
    PairingViolation,
)
from .susceptibility import Lorentz, SusceptibilityModel, Toy, n_squared

PAIRING_TOL = 1e-9
POLISH_TOL = 1e-12
DEFAULT_TRACK_STEPS = 64


def _split_poly(model: SusceptibilityModel):
    """Coefficients (highest first) of P and Q in p = P(w) - k^2 Q(w)."""
    if isinstance(model, Toy):
        g, a = model.gamma, model.a
        return np.array([a, 1j * (g + 1), 0, 0]), np.array([a, 1j * g])
    if isinstance(model, Lorentz):
        a, b, c = model.a, model.b, model.c
        return np.array([a, 1j * b, c + 1, 0, 0]), np.array([a, 1j * b, c])
    raise TypeError(f"unsupported model {model!r}")


def dispersion_poly(model: SusceptibilityModel, k: float) -> np.ndarray:
    """Coefficients of p(k, .) in w, highest degree first."""
    big, small = _split_poly(model)
    out = big.astype(complex)
    out[-small.size:] -= k * k * small
    return out


def poly_scale(coeffs, omega) -> float:
    """Magnitude scale sum |c_j| |w|^j used to judge residuals."""
    powers = np.abs(omega) ** np.arange(len(coeffs) - 1, -1, -1)
    return float(np.sum(np.abs(coeffs) * powers))


def residual(model, k, omega) -> float:
    return abs(np.polyval(dispersion_poly(model, k), omega))


def _polish(coeffs, w, max_iter=50):
    deriv = np.polyder(coeffs)
    for _ in range(max_iter):
        pw = np.polyval(coeffs, w)
        if abs(pw) <= POLISH_TOL * poly_scale(coeffs, w):
            break
        dpw = np.polyval(deriv, w)
        if dpw == 0:
            break
        step = pw / dpw
        w_new = w - step
        # clustered roots: stop once Newton no longer reduces the residual
        if abs(np.polyval(coeffs, w_new)) >= abs(pw):
            break
        w = w_new
    return w


def roots(coeffs) -> np.ndarray:
    """All roots of a complex polynomial (companion matrix + Newton polish)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if abs(coeffs[0]) <= 1e-14:
        raise DegenerateLeadingCoefficient(f"leading coefficient {coeffs[0]}")
    raw = np.roots(coeffs)
    # np.roots drops trailing zero coefficients as zero roots; keep the count right
    raw = np.concatenate([raw, np.zeros(len(coeffs) - 1 - raw.size, complex)])
    return np.array([_polish(coeffs, w) for w in raw])


@dataclass(frozen=True)
class PairingReport:
    pairs: tuple          # index pairs (i, j) with w_j = -conj(w_i), i < j
    self_paired: tuple    # indices with w = -conj(w), i.e. purely imaginary
    max_mismatch: float

    def as_dict(self, values=None) -> dict:
        d = {"pairs": [list(p) for p in self.pairs],
             "self_paired": list(self.self_paired),
             "max_mismatch": self.max_mismatch}
        if values is not None:
            d["roots"] = [[float(w.real), float(w.imag)] for w in values]
        return d


def verify_pairing(values, tol: float = PAIRING_TOL) -> PairingReport:
    """Check that the root multiset is closed under w -> -conj(w)."""
    values = np.asarray(values, dtype=complex)
    m = values.size
    images = -np.conj(values)
    best = None
    for perm in itertools.permutations(range(m)):
        # the map is an involution, so the matching must be one too
        if any(perm[perm[i]] != i for i in range(m)):
            continue
        err = max(
            abs(values[perm[i]] - images[i]) / max(1.0, abs(values[i])) for i in range(m)
        )
        if best is None or err < best[0]:
            best = (err, perm)
    err, perm = best
    if err > tol:
        raise PairingViolation(f"roots {values} not closed under -conj (mismatch {err:.3g})")
    pairs = tuple((i, perm[i]) for i in range(m) if i < perm[i])
    selfs = tuple(i for i in range(m) if perm[i] == i)
    return PairingReport(pairs, selfs, float(err))


def select_branch(model: SusceptibilityModel, values, k: float) -> complex:
    """Forward root (Re w > 0) closest to k / Re n(k); ties go to smaller |Im w|."""
    values = np.asarray(values, dtype=complex)
    forward = [w for w in values if w.real > 0]
    if not forward:
        raise NoForwardBranch(f"no root with Re w > 0 among {values}")
    target = k / np.sqrt(n_squared(model, complex(k))).real
    return complex(min(forward, key=lambda w: (abs(w.real - target), abs(w.imag))))


def _partials(model, k, omega):
    big, small = _split_poly(model)
    dp_dw = np.polyval(np.polyder(big), omega) - k * k * np.polyval(np.polyder(small), omega)
    dp_dk = -2.0 * k * np.polyval(small, omega)
    return dp_dw, dp_dk


def group_velocity(model: SusceptibilityModel, k: float, omega: complex) -> complex:
    """w'(k) on the branch through (k, omega), by implicit differentiation."""
    coeffs = dispersion_poly(model, k)
    if abs(np.polyval(coeffs, omega)) > 1e-9 * max(1.0, poly_scale(coeffs, omega)):
        raise ValueError(f"omega={omega} is not a root at k={k}")
    dp_dw, dp_dk = _partials(model, k, omega)
    if abs(dp_dw) < 1e-12:
        raise BranchPointError(f"dp/dw = {dp_dw} at k={k}, omega={omega}")
    return complex(-dp_dk / dp_dw)


def _min_separation(values) -> float:
    d = np.abs(values[:, None] - values[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def track_branch(model: SusceptibilityModel, k_from: float, omega_from: complex,
                 k_to: float, steps: int = DEFAULT_TRACK_STEPS) -> complex:
    """Continue the root through (k_from, omega_from) to k_to.

    Each of ``steps`` increments starts Newton from the previous root; a move
    larger than half the smallest root separation counts as a branch jump.
    """
    w = complex(omega_from)
    if steps <= 0 or k_to == k_from:
        return w
    for kk in np.linspace(k_from, k_to, steps + 1)[1:]:
        coeffs = dispersion_poly(model, kk)
        w_new = _polish(coeffs, w)
        all_roots = roots(coeffs)
        if abs(w_new - w) > 0.5 * _min_separation(all_roots):
            raise BranchJump(f"branch moved {abs(w_new - w):.3g} at k={kk}")
        # snap onto the nearest root so stagnating Newton cannot drift
        w = complex(all_roots[np.argmin(np.abs(all_roots - w_new))])
    return w


def third_harmonic_root(model: SusceptibilityModel, k0: float, omega0: complex) -> complex:
    """Forward root at 3 k0 closest to 3 w0 (the mode carrying the 3k0 hump)."""
    values = roots(dispersion_poly(model, 3 * k0))
    forward = [w for w in values if w.real > 0] or list(values)
    return complex(min(forward, key=lambda w: abs(w - 3 * omega0)))


@dataclass(frozen=True)
class DispersionBranch:
    k0: float
    omega0: complex
    vg: complex
    omega_3k: complex
    vg_3k: complex

    @property
    def omega_i(self) -> float:
        return self.omega0.imag


def find_branch(model: SusceptibilityModel, k0: float) -> DispersionBranch:
    """Select the carrier mode at k0 and fill in its third-harmonic data."""
    values = roots(dispersion_poly(model, k0))
    verify_pairing(values)
    omega0 = select_branch(model, values, k0)
    omega_3k = third_harmonic_root(model, k0, omega0)
    return DispersionBranch(
        k0=float(k0),
        omega0=omega0,
        vg=group_velocity(model, k0, omega0),
        omega_3k=omega_3k,
        vg_3k=group_velocity(model, 3 * k0, omega_3k),
    )
