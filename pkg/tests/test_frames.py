import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airy_trap.errors import DomainError
from airy_trap.frames import (
    PhysicalScaling,
    TrapParams,
    comoving_to_lab,
    field_strength,
    from_physical,
    physical_acceleration,
    to_physical,
    zeta_of_xi,
)
from airy_trap.profiles import WavefunctionProfile, make_xi_grid


def test_field_strength_examples():
    assert field_strength(0.5, 0.5) == pytest.approx(1.0)
    assert field_strength(0.5, 0.05) == pytest.approx(0.1)
    assert field_strength(1.0, 0.0) == 0.0


def test_field_strength_domain():
    with pytest.raises(DomainError):
        field_strength(0.0, 1.0)
    with pytest.raises(DomainError):
        field_strength(-1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0.05, 5.0),
    st.floats(0.0, 10.0),
    st.floats(0.1, 4.0),
)
def test_field_strength_homogeneous(eps, a, k):
    # F(k eps, k^3 a) = F(eps, a)
    f1 = field_strength(eps, a)
    f2 = field_strength(k * eps, k**3 * a)
    assert f2 == pytest.approx(f1, rel=1e-12, abs=1e-300)


def test_zeta_of_xi_examples():
    assert zeta_of_xi(0.0, -0.25, 1.0) == pytest.approx(0.25)
    assert zeta_of_xi(-0.3 / 0.7, -0.3, 0.7) == pytest.approx(0.0, abs=1e-14)
    assert zeta_of_xi(1.0, 0.0, 8.0) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        zeta_of_xi(1.0, 0.0, 0.0)


def test_trap_params_consistency():
    p = TrapParams(epsilon=0.5, accel=0.05)
    assert p.field == pytest.approx(0.1)
    p2 = TrapParams(epsilon=0.5, field=0.1)
    assert p2.accel == pytest.approx(0.05)
    with pytest.raises(DomainError):
        TrapParams(epsilon=0.5, accel=0.05, field=0.3)
    with pytest.raises(DomainError):
        TrapParams(epsilon=0.0, accel=0.1)


def _sample_profile():
    xi = make_xi_grid(-15.0, 10.0, 401)
    vals = np.exp(-np.abs(xi) / 2.0) * np.exp(0.3j * xi)
    return WavefunctionProfile(scenario="pulling", field=0.1,
                               energy=complex(-0.25), xi_grid=xi, values=vals)


def test_comoving_to_lab_modulus_preserved():
    prof = _sample_profile()
    params = TrapParams(epsilon=0.5, accel=0.05)
    lab = comoving_to_lab(prof, t=10.0, params=params)
    assert np.allclose(np.abs(lab.values), np.abs(prof.values), atol=1e-14)
    assert lab.tau == pytest.approx(2 * 0.25 * 10.0)
    # grid offset (a/2) t^2 on top of the xi/(2 eps) dilation
    assert lab.xi_grid[0] == pytest.approx(prof.xi_grid[0] / 1.0 + 2.5)


def test_comoving_to_lab_identity_at_rest():
    prof = _sample_profile()
    params = TrapParams(epsilon=0.5, accel=0.0)
    lab = comoving_to_lab(prof, t=0.0, params=params)
    assert np.allclose(lab.values, prof.values, atol=1e-15)
    assert np.allclose(lab.xi_grid, prof.xi_grid / (2 * 0.5))


def test_comoving_to_lab_norm_jacobian():
    prof = _sample_profile()
    eps = 0.7
    params = TrapParams(epsilon=eps, accel=0.03)
    lab = comoving_to_lab(prof, t=3.0, params=params)
    # pure phase + affine map: lab norm^2 = comoving norm^2 / (2 eps)
    n_com = np.trapezoid(np.abs(prof.values) ** 2, prof.xi_grid)
    n_lab = np.trapezoid(np.abs(lab.values) ** 2, lab.xi_grid)
    assert n_lab * 2 * eps == pytest.approx(n_com, rel=1e-10)


def test_to_physical_examples():
    params = TrapParams(epsilon=1.0, accel=2.0 / 3.0)
    rb = PhysicalScaling.rubidium_atom()
    assert to_physical(params, rb, "lifetime", 1.0).value == pytest.approx(1.5e-9)
    v = to_physical(params, rb, "vmax", 1.0)
    assert v.value == pytest.approx(1e-9 / 1.5e-9)
    assert v.unit == "m/s"
    assert to_physical(params, rb, "energy", 0.0).value == 0.0


def test_physical_round_trip():
    params = TrapParams(epsilon=1.0, accel=0.5)
    rb = PhysicalScaling.rubidium_atom()
    for q in ("lifetime", "vmax", "energy", "accel"):
        v = 3.7
        assert from_physical(params, rb, q, to_physical(params, rb, q, v).value) == \
            pytest.approx(v, rel=1e-12)


def test_physical_acceleration_scale():
    # a = 2/3 at eps = 1 on the rubidium scaling lands near 3e7 g
    params = TrapParams(epsilon=1.0, accel=2.0 / 3.0)
    a_si, a_g = physical_acceleration(params, PhysicalScaling.rubidium_atom())
    assert a_si == pytest.approx((2.0 / 3.0) * 1e-9 / 1.5e-9**2, rel=1e-12)
    assert 1e7 < a_g < 1e8


def test_scaling_validation():
    with pytest.raises(DomainError):
        PhysicalScaling(x0=0.0, t0=1.0, well_depth=1.0, well_width=1.0)


def test_make_xi_grid_has_zero_node():
    g = make_xi_grid(-7.3, 2.1, 301)
    assert len(g) == 301
    assert np.any(g == 0.0)
    assert g[0] == pytest.approx(-7.3) and g[-1] == pytest.approx(2.1)
    assert np.all(np.diff(g) > 0)
