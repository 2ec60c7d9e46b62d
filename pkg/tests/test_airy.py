import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airy_trap.airy import AiryQuad, ai_zero, airy_eval
from airy_trap.errors import AccuracyError, DomainError

# Reference values computed offline with 30-digit arithmetic (Maclaurin
# series at 0; first zeros of Ai; sampled real-axis table).
AI0 = 0.355028053887817239260063186004
BI0 = 0.614926627446000735150922369094
AIP0 = -0.258819403792806798405183560189
BIP0 = 0.448288357353826357914823710399
A1 = -2.33810741045976703848919725245
A2 = -4.08794944413097061663698870146

# (z, Ai, Bi) on the real axis, 30-digit oracle rounded to double
REAL_AXIS_TABLE = [
    (-20.0, -0.176406127077985, -0.200139309322651),
    (-12.0, -0.0665551750543731, -0.295719912078073),
    (-8.0, -0.0527050503563862, -0.331251580751138),
    (-5.0, 0.350761009024114, -0.138369134901601),
    (-2.0, 0.227407428201686, -0.412302587956398),
    (-0.7, 0.51100039757501, 0.27526801198788),
    (0.0, 0.355028053887817, 0.614926627446001),
    (1.0, 0.135292416312881, 1.20742359495287),
    (3.0, 0.00659113935746072, 14.0373289637302),
    (6.5, 2.79588234320491e-6, 22340.607718397),
    (10.0, 1.10475325528987e-10, 455641153.548225),
    (16.0, 4.15688882891702e-20, 9.57212390604919e17),
    (24.0, 1.15708108539854e-35, 2.80773183681073e33),
]


def test_values_at_zero():
    q = airy_eval(0.0)
    assert q.ai.real == pytest.approx(AI0, abs=1e-13)
    assert q.bi.real == pytest.approx(BI0, abs=1e-13)
    assert q.ai_prime.real == pytest.approx(AIP0, abs=1e-13)
    assert q.bi_prime.real == pytest.approx(BIP0, abs=1e-13)
    assert q.ai.imag == 0.0 and q.bi.imag == 0.0


def test_real_axis_table():
    for z, ai_ref, bi_ref in REAL_AXIS_TABLE:
        q = airy_eval(z)
        assert q.ai.real == pytest.approx(ai_ref, rel=1e-10), f"Ai({z})"
        assert q.bi.real == pytest.approx(bi_ref, rel=1e-10), f"Bi({z})"
        assert q.ai.imag == 0.0 and q.bi.imag == 0.0


def test_near_first_zero_small():
    assert abs(airy_eval(-2.33811).ai) <= 1e-4


def test_leading_asymptotic_at_ten():
    lead = 0.5 / math.sqrt(math.pi) * 10.0**-0.25 * math.exp(-(2.0 / 3.0) * 10.0**1.5)
    assert airy_eval(10.0).ai.real == pytest.approx(lead, rel=2e-2)


def _wronskian_residual(q: AiryQuad) -> float:
    scale = max(1.0, math.pi * (abs(q.ai * q.bi_prime) + abs(q.ai_prime * q.bi)))
    return abs(q.ai * q.bi_prime - q.ai_prime * q.bi - 1.0 / math.pi) / scale


def test_wronskian_grid():
    # 250 real-axis points plus 63 per complex ray; the residual is scaled
    # by the product magnitude, since both functions grow like exp(|w|)
    # along the +-2pi/3 rays and an absolute bound is unrepresentable there.
    pts = list(np.linspace(-20.0, 20.0, 250))
    for theta in (np.pi / 3, -np.pi / 3, 2 * np.pi / 3, -2 * np.pi / 3):
        pts.extend(r * cmath.exp(1j * theta) for r in np.linspace(0.05, 20.0, 63))
    worst = max(_wronskian_residual(airy_eval(z)) for z in pts)
    assert worst <= 1e-10


def test_ode_residual_random_points():
    rng = np.random.default_rng(20240811)
    h = 1e-2
    checked = 0
    while checked < 200:
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        if abs(z) > 10 or abs(z) < 0.3:
            continue
        checked += 1
        for comp in ("ai", "bi"):
            vals = [getattr(airy_eval(z + k * h), comp) for k in (-2, -1, 0, 1, 2)]
            second = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (
                12 * h * h
            )
            target = z * vals[2]
            scale = max(abs(target), abs(vals[2]), 1e-12)
            assert abs(second - target) / scale <= 1e-6


@settings(max_examples=150, deadline=None)
@given(st.complex_numbers(max_magnitude=24.0, allow_nan=False, allow_infinity=False))
def test_conjugate_symmetry(z):
    q = airy_eval(z)
    qc = airy_eval(z.conjugate())
    for name in ("ai", "ai_prime", "bi", "bi_prime"):
        a, b = getattr(q, name), getattr(qc, name)
        assert abs(a.conjugate() - b) <= 1e-12 * max(1.0, abs(a))


@settings(max_examples=150, deadline=None)
@given(st.complex_numbers(max_magnitude=24.0, allow_nan=False, allow_infinity=False))
def test_wronskian_property(z):
    assert _wronskian_residual(airy_eval(z)) <= 1e-10


def test_est_error_reported():
    assert airy_eval(2.0 + 1.0j).est_error <= 1e-12
    assert airy_eval(7.5).est_error <= 1e-12
    assert airy_eval(100.0 + 5.0j).est_error <= 1e-8


def test_domain_errors():
    with pytest.raises(DomainError):
        airy_eval(2e4)
    with pytest.raises(DomainError):
        airy_eval(complex(float("nan"), 0.0))
    # Bi overflows double range on the far positive axis
    with pytest.raises(AccuracyError):
        airy_eval(500.0)


def test_ai_zero_first():
    assert ai_zero(1) == pytest.approx(A1, abs=1e-9)


def test_ai_zero_second_and_ordering():
    z2 = ai_zero(2)
    assert z2 == pytest.approx(A2, abs=1e-9)
    assert z2 < ai_zero(1) < 0
    assert abs(airy_eval(z2).ai) <= 1e-9


def test_ai_zero_self_consistency():
    for n in (1, 5, 30, 100):
        assert abs(airy_eval(ai_zero(n)).ai) <= 1e-9


def test_ai_zero_domain():
    with pytest.raises(DomainError):
        ai_zero(0)
    with pytest.raises(DomainError):
        ai_zero(101)
