import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mmswave.errors import BranchJump, BranchPointError, DegenerateLeadingCoefficient, NoForwardBranch, PairingViolation
from mmswave.modes import (dispersion_poly, find_branch, group_velocity, poly_scale, residual, roots,
                           select_branch, third_harmonic_root, track_branch, verify_pairing)
from mmswave.susceptibility import Lorentz, Toy, n_squared

from conftest import PRESET_CASES

QUOTED_OMEGA0 = {"toy": 6.28 - 2.5e-2j, "lorentz_uv": 7.9 - 1.99e-2j, "lorentz_ir": 6.29 - 4.91e-2j}


def test_toy_at_zero_wavenumber():
    m = Toy(5.0, 20.0)
    r = sorted(roots(dispersion_poly(m, 0.0)), key=abs)
    assert abs(r[0]) < 1e-12 and abs(r[1]) < 1e-12
    assert abs(r[2] + 1j * 6 / 20) < 1e-12


def test_factored_cubic():
    r = np.sort_complex(roots(np.poly([1, 2, 3]).astype(complex)))
    assert np.allclose(r, [1, 2, 3], atol=1e-12)


def test_degenerate_leading():
    with pytest.raises(DegenerateLeadingCoefficient):
        roots(np.array([1e-16, 1.0, 2.0]))


def test_random_quartics_reconstruct(rng):
    for _ in range(50):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        r = roots(c)
        rebuilt = c[0] * np.poly(r)
        assert np.max(np.abs(rebuilt - c)) < 1e-9 * np.max(np.abs(c))


@pytest.mark.parametrize("name", sorted(PRESET_CASES))
def test_quoted_frequencies(name):
    model, k0 = PRESET_CASES[name]
    w = select_branch(model, roots(dispersion_poly(model, k0)), k0)
    ref = QUOTED_OMEGA0[name]
    assert abs(w.real - ref.real) <= 0.01 and abs(w.imag - ref.imag) <= 0.01


def test_roots_satisfy_refractive_relation(case):
    _, model, _, _ = case
    for k in (0.5, 3.0, 8.0, 24.0):
        for w in roots(dispersion_poly(model, k)):
            if abs(w) < 1e-8:
                continue
            assert abs(w**2 * n_squared(model, w) - k**2) < 1e-9 * max(1, k**2)


@pytest.mark.parametrize("name", sorted(PRESET_CASES))
def test_pairing_sweep_and_evenness(name):
    model, _ = PRESET_CASES[name]
    for k in np.arange(0.5, 30.01, 0.5):
        r = roots(dispersion_poly(model, k))
        rep = verify_pairing(r)
        assert rep.max_mismatch < 1e-9
        if isinstance(model, Toy):
            assert len(rep.self_paired) == 1 and abs(r[rep.self_paired[0]].real) < 1e-9
        else:
            assert 2 * len(rep.pairs) + len(rep.self_paired) == 4
            assert all(abs(r[i].real) < 1e-9 for i in rep.self_paired)
        rm = roots(dispersion_poly(model, -k))
        assert all(np.min(np.abs(rm - w)) < 1e-9 * max(1, abs(w)) for w in r)


def test_vacuum_pairing_and_velocity():
    rep = verify_pairing([2.0, -2.0])
    assert tuple(rep.pairs) == ((0, 1),)


def test_pairing_violation():
    with pytest.raises(PairingViolation):
        verify_pairing([1 + 1j, 2 - 1j])


def test_no_forward_branch():
    m = Toy(5.0, 20.0)
    with pytest.raises(NoForwardBranch):
        select_branch(m, [-1 - 0.1j, -0.3j], 1.0)


def test_branch_invariants(case):
    _, model, k0, b = case
    assert residual(model, k0, b.omega0) < 1e-10 * max(1.0, poly_scale(dispersion_poly(model, k0), b.omega0))
    assert b.omega0.imag <= 0
    assert b.omega_i == b.omega0.imag


def test_group_velocity_matches_finite_difference(case):
    _, model, k0, b = case
    h = 1e-5
    wp = track_branch(model, k0, b.omega0, k0 + h, steps=4)
    wm = track_branch(model, k0, b.omega0, k0 - h, steps=4)
    fd = (wp - wm) / (2 * h)
    assert abs(b.vg - fd) < 1e-6 * abs(b.vg)


def test_group_velocity_rejects_non_root():
    m = Toy(5.0, 20.0)
    with pytest.raises(ValueError):
        group_velocity(m, 1.0, 3.0 + 0j)


def test_branch_point():
    # toy at k=0 has a double root at the origin, where p_omega vanishes
    with pytest.raises(BranchPointError):
        group_velocity(Toy(5.0, 20.0), 0.0, 0j)


def test_tracking(case):
    _, model, k0, b = case
    assert track_branch(model, k0, b.omega0, k0, steps=0) == b.omega0
    w3 = track_branch(model, k0, b.omega0, 3 * k0)
    assert residual(model, 3 * k0, w3) < 1e-10 * poly_scale(dispersion_poly(model, 3 * k0), w3)
    back = track_branch(model, 3 * k0, w3, k0)
    assert abs(back - b.omega0) < 1e-9


def test_branch_jump_detected():
    # near k=0 the forward and backward roots crowd together; one coarse step jumps
    m = Toy(5.0, 20.0)
    w = select_branch(m, roots(dispersion_poly(m, 0.5)), 0.5)
    with pytest.raises(BranchJump):
        track_branch(m, 0.5, w, 0.01, steps=1)


def test_third_harmonic_carrier(case):
    _, model, k0, b = case
    w3 = third_harmonic_root(model, k0, b.omega0)
    assert b.omega_3k == w3
    assert abs(w3 - 3 * b.omega0) < 0.2 * abs(3 * b.omega0)


@given(gamma=st.floats(0.5, 20), a=st.floats(0.5, 50), k=st.floats(0.5, 20))
@settings(max_examples=50, deadline=None)
def test_toy_vg_closed_form(gamma, a, k):
    from mmswave.closed_forms import toy_group_velocity
    m = Toy(gamma, a)
    b = find_branch(m, k)
    assert abs(b.vg - toy_group_velocity(m, k, b.omega0)) < 1e-10 * abs(b.vg)
