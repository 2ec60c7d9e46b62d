"""Sampled wavefunction profiles on xi grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["WavefunctionProfile", "make_xi_grid", "derivative_jump_residual"]


@dataclass(frozen=True)
class WavefunctionProfile:
    """Complex wavefunction samples with their scenario metadata.

    The xi grid is strictly increasing and, for matched two-branch
    solutions, always contains xi = 0 as a node.
    """

    scenario: str
    field: float
    energy: complex
    xi_grid: np.ndarray
    values: np.ndarray
    frame: str = "comoving"
    tau: float | None = None

    def __post_init__(self):
        xi = np.asarray(self.xi_grid, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if xi.ndim != 1 or vals.shape != xi.shape:
            raise DomainError("WavefunctionProfile: grid/values shape mismatch")
        if not np.all(np.diff(xi) > 0):
            raise DomainError("WavefunctionProfile: xi grid must be strictly increasing")
        object.__setattr__(self, "xi_grid", xi)
        object.__setattr__(self, "values", vals)

    def abs_values(self) -> np.ndarray:
        return np.abs(self.values)

    def grid_norm(self) -> float:
        """Trapezoid L2 norm of the samples."""
        return float(np.sqrt(np.trapezoid(np.abs(self.values) ** 2, self.xi_grid)))


def make_xi_grid(xi_min: float, xi_max: float, n: int) -> np.ndarray:
    """Strictly increasing grid of n points over [xi_min, xi_max] with a node at 0.

    Spacings on the two sides of 0 differ slightly so that both endpoints
    and the matching point are grid nodes.
    """
    if not (xi_min < 0.0 < xi_max):
        raise DomainError("make_xi_grid: need xi_min < 0 < xi_max")
    if n < 5:
        raise DomainError("make_xi_grid: need at least 5 points")
    span = xi_max - xi_min
    n_left = max(2, int(round((n - 1) * (-xi_min) / span)))
    n_right = max(2, (n - 1) - n_left)
    left = np.linspace(xi_min, 0.0, n_left + 1)
    right = np.linspace(0.0, xi_max, n_right + 1)
    return np.concatenate([left[:-1], right])


def derivative_jump_residual(profile: WavefunctionProfile, expected_jump: complex,
                             points: int = 4) -> float:
    """|phi'(0+) - phi'(0-) - expected_jump| from one-sided finite differences.

    Uses 4-point one-sided stencils on each side of the xi = 0 node, so the
    grid must be locally uniform per side (make_xi_grid guarantees that).
    """
    xi = profile.xi_grid
    i0 = int(np.argmin(np.abs(xi)))
    if abs(xi[i0]) > 1e-12:
        raise DomainError("derivative_jump_residual: grid has no node at xi = 0")
    if i0 < points or i0 > len(xi) - 1 - points:
        raise DomainError("derivative_jump_residual: too few nodes around xi = 0")
    v = profile.values
    hr = xi[i0 + 1] - xi[i0]
    hl = xi[i0] - xi[i0 - 1]
    # third-order one-sided first-derivative stencil: (-11 f0 + 18 f1 - 9 f2 + 2 f3)/(6 h)
    dr = (-11 * v[i0] + 18 * v[i0 + 1] - 9 * v[i0 + 2] + 2 * v[i0 + 3]) / (6 * hr)
    dl = (11 * v[i0] - 18 * v[i0 - 1] + 9 * v[i0 - 2] - 2 * v[i0 - 3]) / (6 * hl)
    return abs((dr - dl) - expected_jump)
