"""Laboratory <-> comoving frame conversions and unit scalings.

Internally everything is dimensionless with hbar = m = 1: the trap strength
is epsilon, the lab acceleration a, and the tilt of the comoving-frame
linear potential is F = 2a/(2 epsilon)^3.  Physical units enter only through
``to_physical`` / ``from_physical`` and the bundled scaling presets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError

HBAR_SI = 1.054571817e-34  # J s
G_SI = 9.80665  # m/s^2

__all__ = [
    "TrapParams",
    "PhysicalScaling",
    "PhysicalValue",
    "field_strength",
    "zeta_of_xi",
    "comoving_to_lab",
    "to_physical",
    "from_physical",
    "physical_acceleration",
]


def field_strength(epsilon: float, accel: float) -> float:
    """Tilt of the comoving linear potential, F = 2a/(2 epsilon)^3."""
    if epsilon <= 0:
        raise DomainError("field_strength: epsilon must be positive")
    if accel < 0:
        raise DomainError("field_strength: accel must be >= 0")
    return 2.0 * accel / (2.0 * epsilon) ** 3


@dataclass(frozen=True)
class TrapParams:
    """Trap strength and acceleration, with the derived field F kept consistent.

    Construct with either ``accel`` or ``field``; the other is filled in via
    F = 2a/(2 epsilon)^3.  ``epsilon`` is the magnitude of the delta strength
    (the pushing scenario interprets it as |epsilon|).
    """

    epsilon: float
    accel: float | None = None
    field: float | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DomainError("TrapParams: epsilon must be positive")
        if self.accel is None and self.field is None:
            raise DomainError("TrapParams: provide accel or field")
        if self.accel is None:
            if self.field < 0:
                raise DomainError("TrapParams: field must be >= 0")
            object.__setattr__(
                self, "accel", self.field * (2.0 * self.epsilon) ** 3 / 2.0
            )
        elif self.field is None:
            object.__setattr__(self, "field", field_strength(self.epsilon, self.accel))
        else:
            expect = field_strength(self.epsilon, self.accel)
            if not math.isclose(expect, self.field, rel_tol=1e-9, abs_tol=1e-15):
                raise DomainError(
                    f"TrapParams: inconsistent field {self.field} vs 2a/(2e)^3 = {expect}"
                )


@dataclass(frozen=True)
class PhysicalScaling:
    """Length/time units tying the dimensionless model to an experiment.

    ``rubidium_atom``: x0 = 1 nm, t0 = 1.5 ns (a nm-scale well dragging a
    Rb atom).  ``optical_beam``: x0 = 1 um transverse, with the evolution
    variable reinterpreted as propagation distance in units of 10 um.
    """

    x0: float
    t0: float
    well_depth: float
    well_width: float
    preset: str = "custom"

    def __post_init__(self):
        for name in ("x0", "t0", "well_depth", "well_width"):
            if getattr(self, name) <= 0:
                raise DomainError(f"PhysicalScaling: {name} must be positive")

    @classmethod
    def rubidium_atom(cls) -> "PhysicalScaling":
        return cls(x0=1e-9, t0=1.5e-9, well_depth=1e-5, well_width=1e-10,
                   preset="rubidium_atom")

    @classmethod
    def optical_beam(cls) -> "PhysicalScaling":
        # t0 is a propagation distance here (2*pi*x0^2/lambda ~ 10 um).
        return cls(x0=1e-6, t0=1e-5, well_depth=1e-3, well_width=1e-6,
                   preset="optical_beam")


@dataclass(frozen=True)
class PhysicalValue:
    value: float
    unit: str


_QUANTITY_UNITS = {
    "rubidium_atom": {"lifetime": "s", "vmax": "m/s", "energy": "J", "accel": "m/s^2"},
    "optical_beam": {"lifetime": "m", "vmax": "rad", "energy": "J", "accel": "1/m"},
    "custom": {"lifetime": "s", "vmax": "m/s", "energy": "J", "accel": "m/s^2"},
}


def _unit_factor(scaling: PhysicalScaling, quantity: str) -> float:
    if quantity == "lifetime":
        return scaling.t0
    if quantity == "vmax":
        return scaling.x0 / scaling.t0
    if quantity == "energy":
        return HBAR_SI / scaling.t0
    if quantity == "accel":
        return scaling.x0 / scaling.t0**2
    raise DomainError(f"to_physical: unknown quantity {quantity!r}")


def to_physical(params: TrapParams, scaling: PhysicalScaling, quantity: str,
                value: float) -> PhysicalValue:
    """Map a scaled quantity to physical units through x0 and t0."""
    factor = _unit_factor(scaling, quantity)
    unit = _QUANTITY_UNITS.get(scaling.preset, _QUANTITY_UNITS["custom"])[quantity]
    return PhysicalValue(value * factor, unit)


def from_physical(params: TrapParams, scaling: PhysicalScaling, quantity: str,
                  physical_value: float) -> float:
    """Inverse of to_physical: physical value back to scaled units."""
    return physical_value / _unit_factor(scaling, quantity)


def physical_acceleration(params: TrapParams, scaling: PhysicalScaling):
    """Lab acceleration in m/s^2 and in units of g."""
    a_si = to_physical(params, scaling, "accel", params.accel).value
    return a_si, a_si / G_SI


def zeta_of_xi(xi, energy, field: float):
    """Airy-equation variable zeta = F^(1/3) (xi - E/F); complex when E is.

    At xi = 0 this reduces to zeta0 = -E * F^(-2/3).
    """
    if field <= 0:
        raise DomainError("zeta_of_xi: field must be positive")
    e = complex(energy)
    z = field ** (1.0 / 3.0) * (np.asarray(xi, dtype=complex) - e / field)
    if np.ndim(xi) == 0:
        return complex(z)
    return z


def comoving_to_lab(profile, t: float, params: TrapParams):
    """Map a comoving-frame profile phi(xi) to the lab wavefunction psi(x, t).

    x = xi/(2 eps) + (a/2) t^2, psi = phi * exp(i a x t - (i/3) a^2 t^3),
    and tau = 2 eps^2 t is recorded on the returned profile.  The transform
    is a pure phase times an affine coordinate change, so |psi(x)| equals
    |phi(xi)| point for point; grid L2 norms pick up the 1/(2 eps) Jacobian.
    """
    eps, a = params.epsilon, params.accel
    x = profile.xi_grid / (2.0 * eps) + 0.5 * a * t * t
    phase = np.exp(1j * (a * x * t - a * a * t**3 / 3.0))
    return replace(
        profile,
        xi_grid=x,
        values=profile.values * phase,
        frame="lab",
        tau=2.0 * eps * eps * t,
    )
