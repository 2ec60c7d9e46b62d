import cmath
import math

import numpy as np
import pytest

from airy_trap.errors import BranchError, DomainError
from airy_trap.profiles import derivative_jump_residual
from airy_trap.pulling import (
    ResonanceSolution,
    continue_solution,
    decay_metrics,
    pulling_profile,
    solve_pulling,
    survival_probability,
    sweep_pulling,
    strong_field_energy,
    weak_field_energy,
)

# 30-digit continuation oracle for the decaying branch
ORACLE_E = {
    0.05: complex(-0.26346129652673, -0.0058720901796189),
    0.1: complex(-0.28072597624320, -0.0316981038089872),
    1.0: complex(-0.27260268764465, -0.6229342990268274),
    10.0: complex(0.88156703896180, -4.8059470698128510),
}


def test_roots_against_oracle():
    for field, e_ref in ORACLE_E.items():
        sol = solve_pulling(field)
        assert sol.energy.real == pytest.approx(e_ref.real, rel=1e-10)
        assert sol.energy.imag == pytest.approx(e_ref.imag, rel=1e-9)
        assert sol.residual <= 1e-10
        assert sol.energy.imag <= 0


def test_weak_field_energy_values():
    e = weak_field_energy(1.0 / 6.0)
    assert e.real == pytest.approx(-0.25)
    assert e.imag == pytest.approx(-0.25 * math.exp(-1.0), rel=1e-12)
    assert e.imag == pytest.approx(-0.091970, abs=1e-6)
    assert weak_field_energy(1e-6) == pytest.approx(-0.25 + 0j)
    assert abs(weak_field_energy(0.05).imag) == pytest.approx(
        0.25 * math.exp(-10.0 / 3.0), rel=1e-12)


def test_weak_field_convergence_rate():
    # the closed form's Im part converges only linearly: |ratio - 1| ~ 7 F
    for field in (0.002, 0.005, 0.01):
        sol = solve_pulling(field)
        ratio = sol.energy.imag / weak_field_energy(field).imag
        assert abs(ratio - 1.0) <= 8.5 * field
        assert ratio < 1.0  # closed form always overestimates the rate


def test_strong_field_energy():
    e = strong_field_energy(math.e)
    ref = -((math.e / 4.0) ** (2.0 / 3.0)) * (1j * math.sqrt(3.0) - 1.0) / 2.0
    assert e == pytest.approx(ref, rel=1e-12)
    # order-of-magnitude agreement with the numerical root at F = 10
    sol = solve_pulling(10.0)
    assert abs(strong_field_energy(10.0) - sol.energy) / abs(sol.energy) <= 0.5
    # |E| grows like F^(2/3) ln F
    assert abs(strong_field_energy(100.0)) > abs(strong_field_energy(10.0))
    with pytest.raises(DomainError):
        strong_field_energy(2.0)


def test_residuals_across_seed_grid():
    # Newton converges from the documented seeding on the full log grid
    for field in np.geomspace(1e-3, 10.0, 60):
        sol = solve_pulling(float(field))
        assert sol.residual <= 1e-10


def test_imaginary_part_monotone_in_field():
    rows = sweep_pulling(1.0, 25.0, 60)
    ei = np.array([r["EI"] for r in rows])  # increasing invF = decreasing F
    assert np.all(np.diff(ei) < 0)


def test_continuation_round_trip():
    base = solve_pulling(0.8)
    there = continue_solution(base, 2.5)
    back = continue_solution(there, 0.8)
    assert abs(back.zeta0 - base.zeta0) <= 1e-9


def test_wrong_branch_detection():
    # seeding at the complex conjugate lands on the growing branch
    good = solve_pulling(0.1)
    with pytest.raises(BranchError):
        solve_pulling(0.1, seed=good.zeta0.conjugate())


def test_field_domain():
    with pytest.raises(DomainError):
        solve_pulling(5e-4)
    with pytest.raises(DomainError):
        solve_pulling(11.0)


def test_decay_metrics_weak_field_example():
    # eps = 1/2, a = (2/3) eps^3 = 1/12: closed-form lifetime is 4e
    eps = 0.5
    accel = (2.0 / 3.0) * eps**3
    field = 2.0 * accel / (2.0 * eps) ** 3
    sol = solve_pulling(field)
    met = decay_metrics(sol, eps, accel)
    assert met.lifetime_weak == pytest.approx(4.0 * math.e, rel=1e-12)
    assert met.vmax_weak == pytest.approx(accel * 4.0 * math.e, rel=1e-12)
    assert met.lifetime_scaled == pytest.approx(
        1.0 / (4.0 * (-sol.energy.imag) * eps**2), rel=1e-12)
    assert met.vmax_scaled == pytest.approx(accel * met.lifetime_scaled, rel=1e-12)


def test_decay_metrics_zero_rate_sentinel():
    fake = ResonanceSolution(field=0.01, zeta0=1 + 0j, energy=complex(-0.25, 0.0),
                             residual=0.0, iterations=0, seed_used="user")
    met = decay_metrics(fake, 0.5)
    assert met.lifetime_scaled == math.inf
    assert met.vmax_scaled == math.inf
    bad = ResonanceSolution(field=0.01, zeta0=1 + 0j, energy=complex(-0.25, 1e-3),
                            residual=0.0, iterations=0, seed_used="user")
    with pytest.raises(DomainError):
        decay_metrics(bad, 0.5)


def test_survival_probability():
    sol = solve_pulling(0.1)
    eps = 0.5
    assert survival_probability(0.0, sol, eps) == 1.0
    met = decay_metrics(sol, eps)
    assert survival_probability(met.lifetime_scaled, sol, eps) == pytest.approx(
        math.exp(-1.0), rel=1e-12)
    with pytest.raises(DomainError):
        survival_probability(-1.0, sol, eps)


def test_profile_matching_and_jump():
    sol = solve_pulling(0.1)
    prof = pulling_profile(0.1, -0.8, 0.8, 3201, solution=sol)
    i0 = int(np.argmin(np.abs(prof.xi_grid)))
    assert prof.values[i0] == 1.0 + 0j
    assert derivative_jump_residual(prof, -prof.values[i0]) <= 1e-8


def test_profile_outgoing_envelope():
    # far left the mode is a pure outgoing wave: |phi|^2 ~ C (-zeta)^(-1/2)
    field = 0.1
    sol = solve_pulling(field)
    prof = pulling_profile(field, -60.0, 5.0, 2401, solution=sol)
    mask = prof.xi_grid < -30.0
    zeta = field ** (1.0 / 3.0) * (prof.xi_grid[mask] - sol.energy / field)
    scaled = prof.abs_values()[mask] ** 2 * np.sqrt(np.abs(zeta))
    assert np.std(scaled) / np.mean(scaled) <= 0.02


def test_profile_tail_rises_with_field():
    levels = []
    for f in (0.05, 0.1, 0.3):
        prof = pulling_profile(f, -40.0, 10.0, 1201)
        mask = prof.xi_grid < -25.0
        levels.append(float(np.max(prof.abs_values()[mask])))
    assert levels[0] < levels[1] < levels[2]


def test_sweep_rows_schema():
    rows = sweep_pulling(2.0, 20.0, 12)
    assert len(rows) == 12
    keys = {"F", "invF", "reE", "imE", "EI", "residual", "reE_weak", "imE_weak",
            "T_scaled", "vmax_scaled"}
    assert keys.issubset(rows[0].keys())
    assert all(rows[i]["invF"] < rows[i + 1]["invF"] for i in range(len(rows) - 1))
