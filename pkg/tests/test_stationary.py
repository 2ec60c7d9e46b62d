import math

import numpy as np
import pytest

from airy_trap.airy import ai_zero, airy_eval
from airy_trap.errors import ConvergenceError, DomainError, SingularError
from airy_trap.profiles import derivative_jump_residual
from airy_trap.stationary import (
    compound_profile,
    matching_coefficient,
    quasi_bound_profile,
    resonance_energy,
    tail_intensity,
)

# 50-digit ternary-search oracle values for the tail minimizer
ORACLE_E = {0.02: -0.25220264389, 0.05: -0.263185804266}


def test_matching_coefficient_pole():
    with pytest.raises(SingularError):
        matching_coefficient(ai_zero(1), 0.1)


def test_matching_coefficient_satisfies_jump():
    # c is defined exactly by the derivative-jump condition at the well
    for field, zeta0 in ((0.1, 1.2), (0.05, 2.0), (0.2, 0.9)):
        c = matching_coefficient(zeta0, field)
        q = airy_eval(zeta0)
        ai, aip = q.ai.real, q.ai_prime.real
        bi, bip = q.bi.real, q.bi_prime.real
        lhs = field ** (1.0 / 3.0) * (aip / ai - (bip + c * aip) / (bi + c * ai))
        assert lhs == pytest.approx(-1.0, abs=1e-9)


def test_tail_intensity_form():
    # at a zeta0 where 1/Ai = pi F^(-1/3) Bi the first term dies and
    # I = pi F^(-2/3) Ai^2
    field = 0.1
    from scipy.optimize import brentq

    def t1(z):
        q = airy_eval(z)
        return 1.0 / q.ai.real - math.pi * field ** (-1.0 / 3.0) * q.bi.real

    z_star = brentq(t1, 0.5, 3.0, xtol=1e-14)
    ai = airy_eval(z_star).ai.real
    assert tail_intensity(z_star, field) == pytest.approx(
        math.pi * field ** (-2.0 / 3.0) * ai * ai, rel=1e-9)


def test_tail_intensity_scan_minimum_location():
    # smooth interior minimum near zeta0 = (1/4) F^(-2/3)
    field = 0.05
    zs = np.linspace(0.8, 3.2, 1201)
    vals = [tail_intensity(z, field) for z in zs]
    k = int(np.argmin(vals))
    assert 0 < k < len(zs) - 1
    assert zs[k] == pytest.approx(0.25 * field ** (-2.0 / 3.0), rel=0.15)


def test_resonance_energy_against_oracle():
    for field, e_ref in ORACLE_E.items():
        st = resonance_energy(field)
        assert st.energy == pytest.approx(e_ref, abs=5e-9)
        assert st.zeta0 == pytest.approx(-st.energy * field ** (-2.0 / 3.0), rel=1e-12)


def test_resonance_energy_dense_scan_cross_check():
    # independent dense scan over 10^4 energies at F = 0.1
    field = 0.1
    st = resonance_energy(field)
    es = np.linspace(-0.5 + 1e-3, -0.05 - 1e-3, 10000)
    vals = [tail_intensity(-e * field ** (-2.0 / 3.0), field) for e in es]
    e_scan = es[int(np.argmin(vals))]
    assert abs(st.energy - e_scan) <= 2 * (es[1] - es[0])
    assert st.tail_intensity <= min(vals) * (1 + 1e-9)


def test_resonance_energy_weak_tilt_shift():
    # E + 1/4 ~ -5 F^2: within 0.5% at F = 0.005, within 20% at F = 0.05
    st = resonance_energy(0.005)
    assert (st.energy + 0.25) == pytest.approx(-5 * 0.005**2, rel=5e-3)
    st = resonance_energy(0.05)
    assert (st.energy + 0.25) == pytest.approx(-5 * 0.05**2, rel=0.2)


def test_resonance_energy_tail_term_optimality():
    # the dominant tail term dies at the minimum; float64 can certify the
    # 1e-8 ratio in the window where exp(-1/(3F)) clears the noise floor
    st = resonance_energy(0.01)
    assert st.tail_term_ratio <= 1e-8


def test_resonance_energy_domain():
    with pytest.raises(DomainError):
        resonance_energy(0.25)
    with pytest.raises(DomainError):
        resonance_energy(0.0)


def test_tail_amplitude_matches_weak_tilt_form():
    # I_min ~ (1/(2 F^(1/3))) exp(-1/(6F)) within a factor of 2 for small F
    for field in (0.02, 0.05):
        st = resonance_energy(field)
        ref = 0.5 * field ** (-1.0 / 3.0) * math.exp(-1.0 / (6.0 * field))
        assert 0.5 < st.tail_intensity / ref < 2.0


def test_quasi_bound_profile_basics():
    prof = quasi_bound_profile(0.05, -40.0, 10.0, 1001)
    i0 = int(np.argmin(np.abs(prof.xi_grid)))
    assert prof.xi_grid[i0] == 0.0
    assert prof.values[i0] == 1.0
    # right side decays monotonically once zeta > 0
    right = prof.abs_values()[i0:]
    assert np.all(np.diff(right) < 0)


def test_quasi_bound_profile_tail_ordering():
    # the oscillating left-tail level rises with F
    levels = []
    for f in (0.02, 0.05, 0.1):
        prof = quasi_bound_profile(f, -40.0, 10.0, 1501)
        mask = prof.xi_grid < -25.0
        levels.append(float(np.max(prof.abs_values()[mask])))
    assert levels[0] < levels[1] < levels[2]


def test_compound_profile_jump_condition():
    # fine local grid so the one-sided stencils see the true slopes
    for field, energy in ((0.1, -0.21), (0.05, -0.3), (0.2, -0.25)):
        prof = compound_profile(field, energy, -0.8, 0.8, 3201)
        i0 = int(np.argmin(np.abs(prof.xi_grid)))
        assert derivative_jump_residual(prof, -prof.values[i0]) <= 1e-8


def test_profile_solves_airy_ode():
    # phi'' = (F xi - E) phi away from the well, at 1e-6 of the local
    # envelope (the tail oscillates through zeros, so pointwise-relative
    # would be ill-posed; h balances FD truncation against Airy rounding)
    field = 0.05
    st = resonance_energy(field)
    prof = quasi_bound_profile(field, -12.0, 6.0, 1801)
    xi, v = prof.xi_grid, prof.values.real
    h = xi[1] - xi[0]
    i0 = int(np.argmin(np.abs(xi)))
    absv = np.abs(v)
    for i in range(4, len(xi) - 4):
        if abs(i - i0) <= 3:
            continue
        second = (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (
            12 * h * h)
        target = (field * xi[i] - st.energy) * v[i]
        envelope = float(np.max(absv[max(0, i - 40):i + 40]))
        scale = max(abs(target), envelope, 1e-9)
        assert abs(second - target) / scale <= 1e-6
