"""Complex decay eigenvalues of the dragged attractive trap.

The trapped state leaks by tunneling through the tilted barrier, so its
energy acquires a negative imaginary part.  The eigenvalue condition
couples Ai with the outgoing combination Bi + i Ai at the matching point:

    pi * Ai(zeta0) * [Bi(zeta0) + i Ai(zeta0)] = F^(1/3),

with E = -F^(2/3) zeta0.  The root is found by a damped complex Newton
iteration with an analytic derivative; seeds come from the weak- and
strong-field closed forms, with log-spaced continuation bridging the gap.

Sign convention: time evolution exp(-i E tau) decays for Im E < 0, and the
positive rate constant E_I = -Im E enters all lifetime formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .airy import airy_eval
from .errors import BranchError, ConvergenceError, DomainError
from .profiles import WavefunctionProfile, make_xi_grid

__all__ = [
    "ResonanceSolution",
    "DecayMetrics",
    "solve_pulling",
    "continue_solution",
    "weak_field_energy",
    "strong_field_energy",
    "decay_metrics",
    "survival_probability",
    "pulling_profile",
    "sweep_pulling",
]

_FIELD_MIN = 1e-3
_FIELD_MAX = 10.0
_WEAK_SEED_MAX = 0.3
_STRONG_SEED_MIN = 3.0
_RESIDUAL_TOL = 1e-11
_MAX_ITER = 100


@dataclass(frozen=True)
class ResonanceSolution:
    """Converged complex root of the decay eigenvalue condition."""

    field: float
    zeta0: complex
    energy: complex
    residual: float
    iterations: int
    seed_used: str


@dataclass(frozen=True)
class DecayMetrics:
    """Lifetime and terminal velocity, with closed-form comparison columns."""

    lifetime_scaled: float
    vmax_scaled: float
    epsilon: float
    accel: float
    lifetime_weak: float | None = None
    vmax_weak: float | None = None
    lifetime_strong: float | None = None
    vmax_strong: float | None = None


def _g_and_gprime(zeta: complex, f13: float):
    q = airy_eval(zeta)
    out = q.bi + 1j * q.ai
    outp = q.bi_prime + 1j * q.ai_prime
    g = math.pi * q.ai * out - f13
    gp = math.pi * (q.ai_prime * out + q.ai * outp)
    return g, gp


def _newton(zeta: complex, field: float, seed_used: str) -> ResonanceSolution:
    f13 = field ** (1.0 / 3.0)
    trace = [zeta]
    for it in range(1, _MAX_ITER + 1):
        g, gp = _g_and_gprime(zeta, f13)
        if gp == 0:
            raise ConvergenceError("solve_pulling: vanishing derivative", trace=trace)
        step = g / gp
        # keep steps from jumping across the root landscape
        cap = max(1.0, abs(zeta) / 4.0)
        if abs(step) > cap:
            step *= cap / abs(step)
        zeta = zeta - step
        trace.append(zeta)
        if abs(g) <= _RESIDUAL_TOL and abs(step) <= 1e-12 * max(1.0, abs(zeta)):
            break
    else:
        raise ConvergenceError(
            f"solve_pulling: Newton exceeded {_MAX_ITER} iterations at F = {field}",
            trace=trace,
        )
    residual = abs(_g_and_gprime(zeta, f13)[0])
    if residual > 1e-10:
        raise ConvergenceError(
            f"solve_pulling: residual {residual:.2e} above 1e-10 at F = {field}",
            trace=trace,
        )
    energy = -field ** (2.0 / 3.0) * zeta
    if energy.imag > 1e-12:
        raise BranchError(
            f"solve_pulling: converged to the growing branch (Im E = {energy.imag:.3e})"
        )
    return ResonanceSolution(
        field=field, zeta0=zeta, energy=energy, residual=residual,
        iterations=it, seed_used=seed_used,
    )


def _weak_seed(field: float) -> complex:
    return 0.25 * field ** (-2.0 / 3.0) * (1.0 + 1j * math.exp(-1.0 / (6.0 * field)))


def _strong_seed(field: float) -> complex:
    return 4.0 ** (-2.0 / 3.0) * cmath.exp(2j * cmath.pi / 3.0) * math.log(field)


def solve_pulling(field: float, seed: complex | None = None) -> ResonanceSolution:
    """Decaying-branch root of the eigenvalue condition at tilt F.

    Seeding: the weak-field form below F = 0.3, the strong-field form above
    F = 3, and continuation from the nearest closed-form anchor in between.
    A user-supplied ``seed`` overrides all of that.
    """
    if not (_FIELD_MIN <= field <= _FIELD_MAX):
        raise DomainError(
            f"solve_pulling: field must lie in [{_FIELD_MIN:g}, {_FIELD_MAX:g}]"
        )
    if seed is not None:
        return _newton(complex(seed), field, "user")
    if field <= _WEAK_SEED_MAX:
        return _newton(_weak_seed(field), field, "weak_field")
    if field >= _STRONG_SEED_MIN:
        return _newton(_strong_seed(field), field, "strong_field")
    # continuation from the nearer anchor, stepping in log F
    anchor = _WEAK_SEED_MAX if field < 1.0 else _STRONG_SEED_MIN
    sol = solve_pulling(anchor)
    n_steps = max(2, int(math.ceil(abs(math.log(field / anchor)) / 0.2)))
    for f in np.geomspace(anchor, field, n_steps + 1)[1:]:
        sol = _newton(sol.zeta0, float(f), "continuation")
    return sol


def continue_solution(solution: ResonanceSolution, field: float) -> ResonanceSolution:
    """Track the solved branch to a nearby tilt, seeding from the known root."""
    if not (_FIELD_MIN <= field <= _FIELD_MAX):
        raise DomainError("continue_solution: field out of range")
    n_steps = max(1, int(math.ceil(abs(math.log(field / solution.field)) / 0.2)))
    sol = solution
    for f in np.geomspace(solution.field, field, n_steps + 1)[1:]:
        sol = _newton(sol.zeta0, float(f), "continuation")
    return sol


def weak_field_energy(field: float) -> complex:
    """Closed-form eigenvalue E = -(1/4)[1 + i exp(-1/(6F))], decaying branch.

    A leading-order form: its relative error in Im E grows roughly like 7 F,
    so it is quantitative only for F well below 0.1.
    """
    if field <= 0:
        raise DomainError("weak_field_energy: field must be positive")
    return -0.25 * (1.0 + 1j * math.exp(-1.0 / (6.0 * field)))


def strong_field_energy(field: float) -> complex:
    """Large-tilt closed form E = -(F/4)^(2/3) ln(F) (i sqrt(3) - 1)/2."""
    if field < _STRONG_SEED_MIN:
        raise DomainError(f"strong_field_energy: field must be >= {_STRONG_SEED_MIN}")
    return -((field / 4.0) ** (2.0 / 3.0)) * math.log(field) * (1j * math.sqrt(3.0) - 1.0) / 2.0


def decay_metrics(solution: ResonanceSolution, epsilon: float,
                  accel: float | None = None) -> DecayMetrics:
    """Lifetime T = 1/(4 E_I eps^2) and terminal velocity v_max = a T.

    ``accel`` defaults to the value consistent with the solution's F and
    epsilon.  Closed-form weak columns are always attached; strong-field
    columns only where ln F > 0 keeps them positive (F > 1).
    """
    if epsilon <= 0:
        raise DomainError("decay_metrics: epsilon must be positive")
    a_consistent = solution.field * (2.0 * epsilon) ** 3 / 2.0
    if accel is None:
        accel = a_consistent
    elif not math.isclose(accel, a_consistent, rel_tol=1e-9, abs_tol=1e-300):
        raise DomainError(
            f"decay_metrics: accel {accel} inconsistent with F and epsilon "
            f"(expected {a_consistent})"
        )
    e_i = -solution.energy.imag
    if e_i < 0:
        raise DomainError("decay_metrics: negative decay constant")
    lifetime = math.inf if e_i == 0 else 1.0 / (4.0 * e_i * epsilon * epsilon)
    vmax = accel * lifetime if lifetime != math.inf else math.inf

    if accel > 0:
        arg = 2.0 * epsilon**3 / (3.0 * accel)
        t_weak = epsilon**-2 * math.exp(arg) if arg < 700 else math.inf
        v_weak = accel * t_weak
    else:
        t_weak = v_weak = math.inf
    t_strong = v_strong = None
    if solution.field > 1.0:
        lnf = math.log(solution.field)
        t_strong = 4.0 ** (2.0 / 3.0) / (
            2.0 * math.sqrt(3.0) * epsilon**2 * solution.field ** (2.0 / 3.0) * lnf
        )
        v_strong = accel * t_strong
    return DecayMetrics(
        lifetime_scaled=lifetime, vmax_scaled=vmax, epsilon=epsilon, accel=accel,
        lifetime_weak=t_weak, vmax_weak=v_weak,
        lifetime_strong=t_strong, vmax_strong=v_strong,
    )


def survival_probability(t: float, solution: ResonanceSolution, epsilon: float) -> float:
    """P(t) = exp(-4 E_I eps^2 t), the single-pole survival estimate.

    In the weak-field regime this reduces to
    exp[-eps^2 t exp(-2 eps^3/(3a))]: the inner exponent must be negative,
    because a gentler pull (smaller a) has a thicker barrier and must decay
    slower.
    """
    if t < 0:
        raise DomainError("survival_probability: t must be >= 0")
    e_i = -solution.energy.imag
    return math.exp(-4.0 * e_i * epsilon * epsilon * t)


def pulling_profile(field: float, xi_min: float = -40.0, xi_max: float = 10.0,
                    n: int = 2001,
                    solution: ResonanceSolution | None = None) -> WavefunctionProfile:
    """Decaying eigenmode profile, Ai to the right and Bi + i Ai to the left."""
    sol = solution if solution is not None else solve_pulling(field)
    f13 = field ** (1.0 / 3.0)
    xi = make_xi_grid(xi_min, xi_max, n)
    q0 = airy_eval(sol.zeta0)
    right0 = q0.ai
    left0 = q0.bi + 1j * q0.ai
    vals = np.empty(len(xi), dtype=complex)
    for i, x in enumerate(xi):
        if x == 0.0:
            vals[i] = 1.0
            continue
        q = airy_eval(f13 * x + sol.zeta0)
        vals[i] = q.ai / right0 if x > 0 else (q.bi + 1j * q.ai) / left0
    return WavefunctionProfile(
        scenario="pulling", field=field, energy=sol.energy, xi_grid=xi, values=vals,
    )


def sweep_pulling(inv_field_min: float = 1.0, inv_field_max: float = 25.0,
                  n: int = 120, epsilon: float = 0.5) -> list[dict]:
    """Eigenvalue sweep on a log grid of 1/F, with closed-form columns.

    Solutions are tracked by continuation from small F upward, which keeps
    every point on the decaying branch.  Rows come back in increasing 1/F.
    """
    if not (0 < inv_field_min < inv_field_max):
        raise DomainError("sweep_pulling: need 0 < inv_field_min < inv_field_max")
    inv_fs = np.geomspace(inv_field_min, inv_field_max, n)
    fields = sorted(1.0 / inv_fs)  # ascending F
    rows = []
    sol = None
    for f in fields:
        sol = solve_pulling(f) if sol is None else _newton(sol.zeta0, f, "continuation")
        e_w = weak_field_energy(f)
        met = decay_metrics(sol, epsilon)
        rows.append({
            "F": f,
            "invF": 1.0 / f,
            "reE": sol.energy.real,
            "imE": sol.energy.imag,
            "EI": -sol.energy.imag,
            "residual": sol.residual,
            "reE_weak": e_w.real,
            "imE_weak": e_w.imag,
            "T_scaled": met.lifetime_scaled,
            "vmax_scaled": met.vmax_scaled,
        })
    rows.sort(key=lambda r: r["invF"])
    return rows
