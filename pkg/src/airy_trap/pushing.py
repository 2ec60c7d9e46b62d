"""Decay of a state shoved by an accelerating repulsive barrier.

The particle sits in the triangular pocket between the repulsive delta at
xi = 0 and the rising linear potential.  An impenetrable barrier would pin
the energy at the hard-wall value set by the first Airy zero; the finite
barrier shifts the root into the complex plane,

    F^(1/3) = -pi * Ai(zeta0) * [Bi(zeta0) + i Ai(zeta0)],

whose imaginary part sets the leak rate through the delta.  Large tilts
make that leak so fast that trapping is meaningless, hence the F <= 0.3
domain cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .airy import ai_zero, airy_eval
from .errors import BranchError, ConvergenceError, DomainError, QuadratureError
from .profiles import WavefunctionProfile, make_xi_grid
from .pulling import DecayMetrics

__all__ = [
    "PushedState",
    "GAMMA_SHIFT",
    "hard_wall_energy",
    "hard_wall_norm",
    "solve_pushing",
    "n0_coefficient",
    "pushing_metrics",
    "pushing_profile",
    "extract_gamma",
    "sweep_pushing",
]

_FIELD_MIN = 1e-3
_FIELD_MAX = 0.3
_RESIDUAL_TOL = 1e-11
_MAX_ITER = 100

# Imaginary-shift coefficient of the root near the hard-wall limit,
# Im zeta0 ~ GAMMA_SHIFT * F^(2/3) as F -> 0.  Used as a Newton seed and as
# a test target only; the solver result never depends on it.
GAMMA_SHIFT = 1.534


@dataclass(frozen=True)
class PushedState:
    """Complex pushed-resonance root with its normalization constants."""

    field: float
    zeta0: complex
    energy: complex
    norm_N: float
    coeff_N0: complex
    residual: float


def _check_field(field: float) -> None:
    if not (_FIELD_MIN <= field <= _FIELD_MAX):
        raise DomainError(
            f"pushing field must lie in [{_FIELD_MIN:g}, {_FIELD_MAX:g}] "
            "(repulsive-barrier decay is too fast beyond)"
        )


@lru_cache(maxsize=1)
def _first_zero() -> float:
    return ai_zero(1)


def hard_wall_energy(field: float) -> float:
    """Pocket ground energy if the barrier were impenetrable: -a1 F^(2/3)."""
    if field <= 0:
        raise DomainError("hard_wall_energy: field must be positive")
    return -_first_zero() * field ** (2.0 / 3.0)


def hard_wall_norm(field: float) -> float:
    """Normalization N of the hard-wall mode N Ai(F^(1/3) xi + a1), xi > 0.

    Fixed by N^2 F^(-1/3) * integral of Ai^2 from a1 to infinity = 1; the
    quadrature cross-checks the closed-form value 1/|Ai'(a1)| * F^(1/6).
    """
    if field <= 0:
        raise DomainError("hard_wall_norm: field must be positive")
    a1 = _first_zero()

    val, abserr = integrate.quad(
        lambda z: airy_eval(z).ai.real ** 2, a1, 12.0, epsabs=1e-13, epsrel=1e-12,
        limit=200,
    )
    # exponentially small remainder beyond z = 12
    tail = 1e-15
    if abserr > 1e-9:
        raise QuadratureError(f"hard_wall_norm: quadrature error {abserr:.2e}")
    return float(field ** (1.0 / 6.0) / math.sqrt(val + tail))


def _h_and_hprime(zeta: complex, f13: float):
    q = airy_eval(zeta)
    out = q.bi + 1j * q.ai
    outp = q.bi_prime + 1j * q.ai_prime
    h = f13 + math.pi * q.ai * out
    hp = math.pi * (q.ai_prime * out + q.ai * outp)
    return h, hp


def _newton(zeta: complex, field: float) -> complex:
    f13 = field ** (1.0 / 3.0)
    trace = [zeta]
    for _ in range(_MAX_ITER):
        h, hp = _h_and_hprime(zeta, f13)
        if hp == 0:
            raise ConvergenceError("solve_pushing: vanishing derivative", trace=trace)
        step = h / hp
        if abs(step) > 0.5:
            step *= 0.5 / abs(step)
        zeta = zeta - step
        trace.append(zeta)
        if abs(h) <= _RESIDUAL_TOL and abs(step) <= 1e-12 * max(1.0, abs(zeta)):
            return zeta
    raise ConvergenceError(
        f"solve_pushing: Newton exceeded {_MAX_ITER} iterations at F = {field}",
        trace=trace,
    )


def solve_pushing(field: float) -> PushedState:
    """Decaying pushed-resonance root, seeded by the hard-wall expansion.

    Seed: zeta0 = a1 + F^(1/3) + i * GAMMA_SHIFT * F^(2/3).  If Newton fails
    from that seed (possible near the upper end of the domain) the root is
    tracked by continuation from a smaller tilt.
    """
    _check_field(field)
    a1 = _first_zero()
    seed = a1 + field ** (1.0 / 3.0) + 1j * GAMMA_SHIFT * field ** (2.0 / 3.0)
    try:
        zeta = _newton(seed, field)
    except ConvergenceError:
        f0 = 0.05
        zeta = _newton(a1 + f0 ** (1.0 / 3.0) + 1j * GAMMA_SHIFT * f0 ** (2.0 / 3.0), f0)
        for f in np.geomspace(f0, field, 8)[1:]:
            zeta = _newton(zeta, float(f))

    residual = abs(_h_and_hprime(zeta, field ** (1.0 / 3.0))[0])
    if residual > 1e-10:
        raise ConvergenceError(f"solve_pushing: residual {residual:.2e} above 1e-10")
    energy = -field ** (2.0 / 3.0) * zeta
    if energy.imag > 1e-12:
        raise BranchError(
            f"solve_pushing: converged to the growing branch (Im E = {energy.imag:.3e})"
        )
    norm_n = hard_wall_norm(field)
    q = airy_eval(zeta)
    coeff_n0 = norm_n * q.ai / (q.bi + 1j * q.ai)
    return PushedState(
        field=field, zeta0=zeta, energy=energy, norm_N=norm_n,
        coeff_N0=coeff_n0, residual=residual,
    )


def n0_coefficient(state: PushedState) -> complex:
    """Tail amplitude N0 = N Ai(zeta0) / [Bi(zeta0) + i Ai(zeta0)].

    For small F the magnitude follows the chain
    |N0| ~ pi Ai'(a1)^2 F^(1/3) N ~ 2.2 sqrt(F), but the corrections decay
    only like F^(1/3), so the chain is loose except at very small tilt.
    """
    q = airy_eval(state.zeta0)
    return state.norm_N * q.ai / (q.bi + 1j * q.ai)


def pushing_metrics(state: PushedState, epsilon: float,
                    accel: float | None = None) -> DecayMetrics:
    """Lifetime/velocity for the pushed state, plus small-F closed forms.

    The comparison columns carry T ~ 1/(4 eps^2 gamma F^(4/3)) and
    v_max ~ eps^2 gamma^(-1) (a/4)^(-1/3); the survival exponent
    2 gamma F^(4/3) tau equals 4^(-1/3) gamma eps^(-2) a^(4/3) t in lab time.
    """
    if epsilon <= 0:
        raise DomainError("pushing_metrics: epsilon must be positive")
    a_consistent = state.field * (2.0 * epsilon) ** 3 / 2.0
    if accel is None:
        accel = a_consistent
    elif not math.isclose(accel, a_consistent, rel_tol=1e-9, abs_tol=1e-300):
        raise DomainError("pushing_metrics: accel inconsistent with F and epsilon")
    e_i = -state.energy.imag
    if e_i < 0:
        raise DomainError("pushing_metrics: negative decay constant")
    lifetime = math.inf if e_i == 0 else 1.0 / (4.0 * e_i * epsilon * epsilon)
    vmax = accel * lifetime if lifetime != math.inf else math.inf
    if accel > 0:
        t_cl = 1.0 / (4.0 * epsilon**2 * GAMMA_SHIFT * state.field ** (4.0 / 3.0))
        v_cl = epsilon**2 / GAMMA_SHIFT * (accel / 4.0) ** (-1.0 / 3.0)
    else:
        t_cl = v_cl = math.inf
    return DecayMetrics(
        lifetime_scaled=lifetime, vmax_scaled=vmax, epsilon=epsilon, accel=accel,
        lifetime_weak=t_cl, vmax_weak=v_cl,
    )


def pushing_profile(state: PushedState, xi_min: float = -40.0, xi_max: float = 20.0,
                    n: int = 2001) -> WavefunctionProfile:
    """Pushed eigenmode: N Ai(zeta) in the pocket, N0 (Bi + i Ai) behind it."""
    f13 = state.field ** (1.0 / 3.0)
    xi = make_xi_grid(xi_min, xi_max, n)
    vals = np.empty(len(xi), dtype=complex)
    for i, x in enumerate(xi):
        q = airy_eval(f13 * x + state.zeta0)
        if x >= 0:
            vals[i] = state.norm_N * q.ai
        else:
            vals[i] = state.coeff_N0 * (q.bi + 1j * q.ai)
    return WavefunctionProfile(
        scenario="pushing", field=state.field, energy=state.energy,
        xi_grid=xi, values=vals,
    )


def extract_gamma(f_min: float = 0.002, f_max: float = 0.02, n: int = 12):
    """Through-origin least-squares fit of Im zeta0 against F^(2/3).

    Returns (gamma_fit, details); details carries the per-point effective
    coefficients Im zeta0 / F^(2/3) and a two-term [F^(2/3), F] fit, which
    expose how slowly the hard-wall expansion converges.
    """
    if not (_FIELD_MIN <= f_min < f_max <= _FIELD_MAX):
        raise DomainError("extract_gamma: bad field range")
    fs = np.geomspace(f_min, f_max, n)
    ims = np.array([solve_pushing(float(f)).zeta0.imag for f in fs])
    basis = fs ** (2.0 / 3.0)
    gamma_fit = float(np.sum(ims * basis) / np.sum(basis * basis))
    two_term, *_ = np.linalg.lstsq(np.vstack([basis, fs]).T, ims, rcond=None)
    details = {
        "fields": fs,
        "im_zeta0": ims,
        "gamma_effective": ims / basis,
        "gamma_two_term": float(two_term[0]),
    }
    return gamma_fit, details


def sweep_pushing(f_min: float = 0.005, f_max: float = 0.3, n: int = 60,
                  epsilon: float = 0.5) -> list[dict]:
    """Pushed-resonance sweep; mirrors the pulling sweep columns plus N, N0."""
    if not (_FIELD_MIN <= f_min < f_max <= _FIELD_MAX):
        raise DomainError("sweep_pushing: bad field range")
    rows = []
    for f in np.geomspace(f_min, f_max, n):
        f = float(f)
        st = solve_pushing(f)
        met = pushing_metrics(st, epsilon)
        rows.append({
            "F": f,
            "invF": 1.0 / f,
            "reE": st.energy.real,
            "imE": st.energy.imag,
            "EI": -st.energy.imag,
            "residual": st.residual,
            "N": st.norm_N,
            "absN0": abs(st.coeff_N0),
            "E_hardwall": hard_wall_energy(f),
            "T_scaled": met.lifetime_scaled,
            "vmax_scaled": met.vmax_scaled,
        })
    return rows
