"""Airy functions Ai, Bi and their derivatives on the complex plane.

The evaluator is organised in three zones, switched on |z|:

* ``|z| <= 6``    -- Maclaurin series in float64.  The largest term of the
  series reaches ~exp((4/3)*6^{3/2}/2) there, so cancellation stays below
  ~1e-11 relative.
* ``6 < |z| < 9`` -- the same series summed in 30-digit arithmetic
  (mpmath), where float64 cancellation would no longer certify 1e-10.
* ``|z| >= 9``    -- Poincare asymptotic expansions of Ai, truncated at the
  smallest term.  Bi and values outside |arg z| <= 2*pi/3 are produced from
  Ai at rotated arguments via the standard connection formulas, which keeps
  every raw expansion inside its reliable sector.

Each result carries ``est_error``, a conservative relative bound built from
the truncation/cancellation budget of the zone that produced it.  Near a
zero of one of the functions "relative" is measured against the local
modulus envelope; no finite-precision evaluator can do better there.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import mpmath

from .errors import AccuracyError, ConvergenceError, DomainError

__all__ = ["AiryQuad", "airy_eval", "ai_zero"]

# Zone radii; the Wronskian property tests validate the matching.  The
# float64 series loses ~exp((4/3)|z|^{3/2}) in cancellation on the recessive
# component, which caps its radius at 4.2 for 1e-10 component accuracy.
_SERIES_RADIUS = 4.2
_ASYMP_RADIUS = 9.0
_SUPPORTED_RADIUS = 1.0e4

# Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3)
_C1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_C2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
_SQRT3 = math.sqrt(3.0)

_OMEGA = cmath.exp(2j * cmath.pi / 3)  # e^{2 pi i/3}
_OMEGA_BAR = _OMEGA.conjugate()

_EPS = 2.2204460492503131e-16

# mpmath's precision is process-global; serialize annulus evaluations.
_MP_LOCK = threading.Lock()
_MP_DPS = 30


@dataclass(frozen=True)
class AiryQuad:
    """Ai, Ai', Bi, Bi' at one point, with a conservative relative error bound."""

    ai: complex
    ai_prime: complex
    bi: complex
    bi_prime: complex
    est_error: float


def airy_eval(z) -> AiryQuad:
    """Evaluate Ai(z), Ai'(z), Bi(z), Bi'(z) for complex or real z.

    Supported disc: |z| <= 1e4 (DomainError beyond).  Inside |z| <= 25 the
    values are good to ~1e-12 relative; beyond that accuracy degrades
    gracefully and ``est_error`` reports the bound.  AccuracyError is raised
    if the bound cannot certify 1e-8, or if a component overflows float64.
    For real input the imaginary parts are exactly zero.
    """
    zc = complex(z)
    if not (math.isfinite(zc.real) and math.isfinite(zc.imag)):
        raise DomainError("airy_eval: argument must be finite")
    r = abs(zc)
    if r > _SUPPORTED_RADIUS:
        raise DomainError(
            f"airy_eval: |z| = {r:.3g} outside the supported disc |z| <= {_SUPPORTED_RADIUS:g}"
        )

    try:
        if r <= _SERIES_RADIUS:
            quad = _series_quad(zc)
        elif r < _ASYMP_RADIUS:
            quad = _series_quad_mp(zc)
        else:
            quad = _asymptotic_quad(zc)
    except OverflowError as exc:
        raise AccuracyError(
            f"airy_eval: component overflowed double precision at z = {zc}"
        ) from exc

    vals = (quad.ai, quad.ai_prime, quad.bi, quad.bi_prime)
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
        raise AccuracyError(
            "airy_eval: component overflowed double precision "
            f"(|z| = {r:.3g}); reduce |z| or use the scaled asymptotic forms"
        )
    if quad.est_error > 1.0e-8:
        raise AccuracyError(
            f"airy_eval: cannot certify 1e-8 at z = {zc} (bound {quad.est_error:.2e})"
        )

    if zc.imag == 0.0:
        # Conjugate symmetry forces real results on the real axis.
        return AiryQuad(
            complex(quad.ai.real, 0.0),
            complex(quad.ai_prime.real, 0.0),
            complex(quad.bi.real, 0.0),
            complex(quad.bi_prime.real, 0.0),
            quad.est_error,
        )
    return quad


def airy_arrays(values):
    """airy_eval over an iterable; returns four complex lists (Ai, Ai', Bi, Bi')."""
    ai, aip, bi, bip = [], [], [], []
    for z in values:
        q = airy_eval(z)
        ai.append(q.ai)
        aip.append(q.ai_prime)
        bi.append(q.bi)
        bip.append(q.bi_prime)
    return ai, aip, bi, bip


# ----------------------------------------------------------------------
# Maclaurin series zone


def _series_quad(z: complex) -> AiryQuad:
    """Sum f, g, f', g' Maclaurin series in float64 and assemble the quad.

    Ai = c1*f - c2*g, Bi = sqrt(3)*(c1*f + c2*g); the auxiliary series obey
    f'' = z f, g'' = z g with f(0)=1, g(0)=0, g'(0)=1.
    """
    z3 = z * z * z
    f = tf = 1.0 + 0j
    g = tg = z
    fp = 0.0 + 0j
    tfp = 0.0 + 0j
    gp = tgp = 1.0 + 0j
    max_mag = max(abs(g), 1.0)
    k = 0
    while True:
        k += 1
        k3 = 3.0 * k
        tf = tf * z3 / ((k3 - 1.0) * k3)
        tg = tg * z3 / (k3 * (k3 + 1.0))
        tgp = tgp * z3 / ((k3 - 2.0) * k3)
        if k == 1:
            tfp = 0.5 * z * z
        else:
            tfp = tfp * z3 / ((k3 - 3.0) * (k3 - 1.0))
        f += tf
        g += tg
        fp += tfp
        gp += tgp
        tmag = abs(tf) + abs(tg) + abs(tfp) + abs(tgp)
        max_mag = max(max_mag, tmag)
        if tmag < 1e-18 * (abs(f) + abs(g) + 1e-300):
            break
        if k > 400:  # cannot happen inside |z| <= 9, defensive only
            raise ConvergenceError("airy series did not terminate")

    ai = _C1 * f - _C2 * g
    aip = _C1 * fp - _C2 * gp
    bi = _SQRT3 * (_C1 * f + _C2 * g)
    bip = _SQRT3 * (_C1 * fp + _C2 * gp)
    # Cancellation bound: largest intermediate term over the value envelope.
    # The zone radius keeps the recessive component's own relative error
    # below ~2e-10 even though the bound is envelope-normalized.
    envelope = max(abs(ai) + abs(bi), 1e-300)
    err = 8.0 * _EPS * max(max_mag / envelope, 1.0)
    return AiryQuad(ai, aip, bi, bip, err)


def _series_quad_mp(z: complex) -> AiryQuad:
    """Same series with 30-digit arithmetic for the 6 < |z| < 9 annulus."""
    with _MP_LOCK, mpmath.workdps(_MP_DPS):
        zm = mpmath.mpc(z.real, z.imag)
        z3 = zm * zm * zm
        one = mpmath.mpf(1)
        f = tf = one
        g = tg = zm
        fp = tfp = mpmath.mpc(0)
        gp = tgp = one
        k = 0
        tol = mpmath.mpf(10) ** (-(_MP_DPS + 3))
        while True:
            k += 1
            k3 = 3 * k
            tf = tf * z3 / ((k3 - 1) * k3)
            tg = tg * z3 / (k3 * (k3 + 1))
            tgp = tgp * z3 / ((k3 - 2) * k3)
            if k == 1:
                tfp = zm * zm / 2
            else:
                tfp = tfp * z3 / ((k3 - 3) * (k3 - 1))
            f += tf
            g += tg
            fp += tfp
            gp += tgp
            if (abs(tf) + abs(tg) + abs(tfp) + abs(tgp)) < tol * (abs(f) + abs(g)):
                break
            if k > 600:
                raise ConvergenceError("airy annulus series did not terminate")

        c1 = mpmath.power(3, mpmath.mpf(-2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        c2 = mpmath.power(3, mpmath.mpf(-1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        s3 = mpmath.sqrt(3)
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
        bi = s3 * (c1 * f + c2 * g)
        bip = s3 * (c1 * fp + c2 * gp)
        out = tuple(complex(v) for v in (ai, aip, bi, bip))
    # 30 digits minus ~8 digits of cancellation leaves >20; float64 rounding wins.
    return AiryQuad(*out, 4.0 * _EPS)


# ----------------------------------------------------------------------
# Asymptotic zone

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0
_ARG_TOL = 1e-12


def _ai_expansion(z: complex):
    """(Ai, Ai', relative truncation bound) from the Poincare expansion.

    Reliable for |arg z| <= 2*pi/3; callers guarantee that.  Truncates at
    the smallest term of the u-series.
    """
    w = (2.0 / 3.0) * z * cmath.sqrt(z)  # z^{3/2}, principal branch
    inv_w = 1.0 / w
    su = 1.0 + 0j  # sum of (-1)^k c_k w^{-k}
    sv = 1.0 + 0j  # sum of (-1)^k d_k w^{-k}
    ck = 1.0
    powk = 1.0 + 0j
    min_term = 1.0
    k = 0
    while True:
        k += 1
        ck = ck * (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        dk = -ck * (6 * k + 1) / (6 * k - 1)
        powk *= -inv_w
        t_u = ck * powk
        tm = abs(t_u)
        if tm >= min_term or k > 60:
            break  # past optimal truncation
        min_term = tm
        su += t_u
        sv += dk * powk
    zq = z ** 0.25
    pref = cmath.exp(-w) / (2.0 * math.sqrt(math.pi))
    ai = pref * su / zq
    aip = -pref * sv * zq
    return ai, aip, min_term + 4.0 * _EPS


def _ai_any(z: complex):
    """Ai, Ai' anywhere with |z| >= _ASYMP_RADIUS, plus an error bound."""
    if abs(cmath.phase(z)) <= _TWO_THIRDS_PI + _ARG_TOL:
        return _ai_expansion(z)
    # Connection formula; both rotated arguments land in |arg| <= 2*pi/3.
    a1, a1p, e1 = _ai_expansion(_OMEGA * z)
    a2, a2p, e2 = _ai_expansion(_OMEGA_BAR * z)
    ai = -(_OMEGA * a1 + _OMEGA_BAR * a2)
    aip = -(_OMEGA_BAR * a1p + _OMEGA * a2p)  # chain rule: omega^2 = conj(omega)
    return ai, aip, e1 + e2


def _asymptotic_quad(z: complex) -> AiryQuad:
    ai, aip, e_ai = _ai_any(z)
    b1, b1p, e1 = _ai_any(_OMEGA * z)
    b2, b2p, e2 = _ai_any(_OMEGA_BAR * z)
    ph = cmath.exp(1j * cmath.pi / 6)
    bi = ph * b1 + ph.conjugate() * b2
    bip = ph * _OMEGA * b1p + ph.conjugate() * _OMEGA_BAR * b2p
    err = 4.0 * (e_ai + e1 + e2) + 8.0 * _EPS
    return AiryQuad(ai, aip, bi, bip, err)


# ----------------------------------------------------------------------
# Zeros of Ai


def ai_zero(n: int) -> float:
    """n-th negative zero of Ai (n = 1 is the zero closest to the origin).

    Asymptotic initial guess refined by Newton iteration on airy_eval;
    absolute accuracy ~1e-12 for n <= 100.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("ai_zero: n must be a positive integer")
    if n > 100:
        raise DomainError("ai_zero: n must be <= 100")

    t = 3.0 * math.pi * (4.0 * n - 1.0) / 8.0
    # T(t) = t^{2/3}(1 + 5/48 t^{-2} - 5/36 t^{-4})
    guess = -(t ** (2.0 / 3.0)) * (1.0 + 5.0 / 48.0 / t**2 - 5.0 / 36.0 / t**4)

    x = guess
    spacing = 1.0 if n == 1 else abs(guess) ** -0.25  # zeros tighten like |a_n|^{-1/4}
    for _ in range(50):
        q = airy_eval(x)
        fx = q.ai.real
        fpx = q.ai_prime.real
        step = fx / fpx
        x -= step
        if abs(x - guess) > 2.0:
            raise ConvergenceError(f"ai_zero({n}): Newton left the bracket", trace=[x])
        if abs(step) < 1e-14 * max(1.0, abs(x)):
            break
    else:
        raise ConvergenceError(f"ai_zero({n}): Newton did not converge")

    resid = abs(airy_eval(x).ai)
    if resid > 1e-9 or abs(x - guess) > 0.5 * max(spacing, 0.1):
        raise ConvergenceError(
            f"ai_zero({n}): residual {resid:.2e} too large at {x!r}", trace=[x]
        )
    return x
