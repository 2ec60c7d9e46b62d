"""Stationary quasi-bound states of the attractive trap on a linear slope.

For a given tilt F the stationary solution is Airy on both sides of the
well, glued at xi = 0 by the delta-function derivative jump.  Generic
energies leave a large oscillatory tail at xi -> -inf; the resonance
(least delocalized) state minimizes that tail's amplitude.  The minimum is
extremely sharp, so it is located by first root-finding the dominant tail
term and then polishing with a bracketed scalar minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .airy import airy_eval
from .errors import ConvergenceError, DomainError, SingularError
from .profiles import WavefunctionProfile, make_xi_grid

__all__ = [
    "StationaryState",
    "matching_coefficient",
    "tail_intensity",
    "resonance_energy",
    "quasi_bound_profile",
    "compound_profile",
]

# Below ~1e-3 the tail terms overflow float64 (they grow like exp(1/(6F))).
_FIELD_MIN = 1e-3
_FIELD_MAX = 0.2
_ENERGY_BRACKET = (-0.5, -0.05)


@dataclass(frozen=True)
class StationaryState:
    """Resonance energy of the tilted trap with its tail diagnostics.

    ``tail_term_ratio`` is |t1/t2| at the minimum: the dominant tail term
    over the residual one.  It vanishes like exp(-1/(3F)) as F -> 0, which
    is the optimality condition of the construction.
    """

    field: float
    energy: float
    zeta0: float
    coeff_c: float
    tail_intensity: float
    tail_term_ratio: float = 0.0


def _check_field(field: float, upper: float = _FIELD_MAX) -> None:
    if not (_FIELD_MIN <= field <= upper):
        raise DomainError(
            f"field must lie in [{_FIELD_MIN:g}, {upper:g}], got {field!r}"
        )


def _checked_ai(zeta0: float):
    """Airy values at zeta0, guarding the 1/Ai pole.

    Ai only changes sign for negative arguments; there a 1e-12 neighborhood
    of a zero is treated as singular.  On the positive side Ai is small but
    strictly positive, so only genuine overflow of 1/Ai is rejected.
    """
    q = airy_eval(zeta0)
    ai = q.ai.real
    if ai == 0.0 or (zeta0 <= 0.0 and abs(ai) <= 1e-12) or not math.isfinite(1.0 / ai):
        raise SingularError(f"Ai({zeta0}) vanishes; matching formula has a pole")
    return q


def matching_coefficient(zeta0: float, field: float) -> float:
    """Admixture c of the recessive solution on the tail side.

    c = [F^(1/3)/(pi Ai(zeta0)) - Bi(zeta0)] / Ai(zeta0); the formula has a
    pole at zeros of Ai, reported as SingularError.
    """
    if field <= 0:
        raise DomainError("matching_coefficient: field must be positive")
    q = _checked_ai(zeta0)
    ai = q.ai.real
    return (field ** (1.0 / 3.0) / (math.pi * ai) - q.bi.real) / ai


def _tail_terms(zeta0: float, field: float):
    q = _checked_ai(zeta0)
    ai, bi = q.ai.real, q.bi.real
    pf = math.pi * field ** (-1.0 / 3.0)
    return 1.0 / ai - pf * bi, pf * ai


def _intensity_noise_floor(zeta0: float, field: float) -> float:
    """Rounding-noise bound on tail_intensity near its minimum.

    The dominant term is a difference of two exp(+w)-sized quantities, so
    close to the minimum the computed intensity is noise-limited; the bound
    scales the Airy evaluation error onto both squared terms.
    """
    q = _checked_ai(zeta0)
    ai, bi = abs(q.ai.real), abs(q.bi.real)
    pf = math.pi * field ** (-1.0 / 3.0)
    err = max(q.est_error, 4e-16)
    n1 = err * (1.0 / ai + pf * bi)
    n2 = err * pf * ai
    t1, t2 = _tail_terms(zeta0, field)
    return (2.0 * abs(t1) * n1 + n1 * n1 + 2.0 * abs(t2) * n2 + n2 * n2) / math.pi


def tail_intensity(zeta0: float, field: float) -> float:
    """Amplitude factor of the far-tail average density.

    Returns (1/pi) { [1/Ai(z0) - pi F^(-1/3) Bi(z0)]^2 + [pi F^(-1/3) Ai(z0)]^2 }.
    The slowly varying 1/sqrt(-zeta) geometric prefactor of the tail is
    deliberately excluded: it does not depend on the trial energy.
    """
    if field <= 0:
        raise DomainError("tail_intensity: field must be positive")
    t1, t2 = _tail_terms(zeta0, field)
    return (t1 * t1 + t2 * t2) / math.pi


def resonance_energy(field: float) -> StationaryState:
    """Energy minimizing the tail amplitude, bracketed around E = -1/4.

    The dominant tail term crosses zero once inside the bracket; that root
    seeds a local bracketed minimization of the full tail intensity.  At the
    reported minimum the dominant term is certified below 1e-6 of the
    residual one (it is orders of magnitude smaller still at small F).
    """
    _check_field(field)
    f23 = field ** (2.0 / 3.0)

    def t1_of_e(energy: float) -> float:
        return _tail_terms(-energy / f23, field)[0]

    e_lo, e_hi = _ENERGY_BRACKET
    try:
        e_root = optimize.brentq(t1_of_e, e_lo + 0.05, e_hi - 0.01, xtol=1e-15)
    except ValueError as exc:
        raise ConvergenceError(
            f"resonance_energy: no tail-term sign change inside {_ENERGY_BRACKET}"
        ) from exc

    def intensity_of_e(energy: float) -> float:
        return tail_intensity(-energy / f23, field)

    # Candidate scan: a bracket-wide grid plus a log ladder around the
    # root, so both wide shallow minima (large F) and needle-sharp ones
    # (small F) get caught.
    cands = np.unique(np.concatenate([
        np.linspace(e_lo + 1e-4, e_hi - 1e-4, 1201),
        e_root + np.geomspace(1e-8, 0.05, 25),
        e_root - np.geomspace(1e-8, 0.05, 25),
        [e_root],
    ]))
    cands = cands[(cands > e_lo) & (cands < e_hi)]
    ivals = np.array([intensity_of_e(e) for e in cands])
    k = int(np.argmin(ivals))
    if k == 0 or k == len(cands) - 1:
        raise ConvergenceError(
            "resonance_energy: no interior minimum inside the energy bracket"
        )
    res = optimize.minimize_scalar(
        intensity_of_e,
        bracket=(cands[k - 1], cands[k], cands[k + 1]),
        method="brent",
        options={"xtol": 1e-13},
    )
    e_min, i_min = float(res.x), float(res.fun)
    # At small F the minimum collapses onto the root of the dominant term
    # faster than float64 resolves and the landscape there is a noise
    # plateau; prefer the root whenever it ties within the noise floor.
    i_at_root = intensity_of_e(e_root)
    noise = _intensity_noise_floor(-e_root / f23, field)
    if i_at_root <= i_min + 3.0 * noise:
        e_min, i_min = e_root, i_at_root
    if not (e_lo < e_min < e_hi):
        raise ConvergenceError(f"resonance_energy: minimum {e_min} left the bracket")

    # Stationarity certificate at the resolution float64 supports: the
    # value must not drop over a relative-1e-9 step to either side.
    h_chk = 1e-9 * max(1.0, abs(e_min))
    if (intensity_of_e(e_min + h_chk) < i_min * (1.0 - 1e-12)
            or intensity_of_e(e_min - h_chk) < i_min * (1.0 - 1e-12)):
        raise ConvergenceError("resonance_energy: minimum failed stationarity check")

    zeta0 = -e_min / f23
    t1, t2 = _tail_terms(zeta0, field)
    return StationaryState(
        field=field,
        energy=e_min,
        zeta0=zeta0,
        coeff_c=matching_coefficient(zeta0, field),
        tail_intensity=i_min,
        tail_term_ratio=abs(t1) / abs(t2),
    )


def quasi_bound_profile(field: float, xi_min: float = -40.0, xi_max: float = 10.0,
                        n: int = 2001) -> WavefunctionProfile:
    """Least-delocalized stationary profile, normalized to 1 at the well.

    Right of the well the profile is Ai(zeta)/Ai(zeta0); left of it the
    recessive admixture is dropped and the tail is Bi(zeta)/Bi(zeta0).
    """
    state = resonance_energy(field)
    xi = make_xi_grid(xi_min, xi_max, n)
    f13 = field ** (1.0 / 3.0)
    q0 = airy_eval(state.zeta0)
    vals = np.empty(len(xi), dtype=complex)
    for i, x in enumerate(xi):
        if x == 0.0:
            vals[i] = 1.0
            continue
        q = airy_eval(f13 * x + state.zeta0)
        vals[i] = q.ai.real / q0.ai.real if x > 0 else q.bi.real / q0.bi.real
    return WavefunctionProfile(
        scenario="stationary", field=field, energy=complex(state.energy),
        xi_grid=xi, values=vals,
    )


def compound_profile(field: float, energy: float, xi_min: float, xi_max: float,
                     n: int) -> WavefunctionProfile:
    """General-energy stationary solution with the matching coefficient built in.

    phi = Ai(zeta)/Ai(zeta0) everywhere, plus
    pi F^(-1/3) [Ai(zeta0) Bi(zeta) - Bi(zeta0) Ai(zeta)] on the tail side;
    by construction it satisfies the delta-well derivative jump
    phi'(0+) - phi'(0-) = -phi(0) for any energy in the bracket.
    """
    if field <= 0:
        raise DomainError("compound_profile: field must be positive")
    f13 = field ** (1.0 / 3.0)
    zeta0 = -energy / field ** (2.0 / 3.0)
    q0 = _checked_ai(zeta0)
    ai0, bi0 = q0.ai.real, q0.bi.real
    xi = make_xi_grid(xi_min, xi_max, n)
    vals = np.empty(len(xi), dtype=complex)
    for i, x in enumerate(xi):
        q = airy_eval(f13 * x + zeta0)
        v = q.ai.real / ai0
        if x < 0:
            v += math.pi / f13 * (ai0 * q.bi.real - bi0 * q.ai.real)
        vals[i] = v
    return WavefunctionProfile(
        scenario="stationary", field=field, energy=complex(energy),
        xi_grid=xi, values=vals,
    )
