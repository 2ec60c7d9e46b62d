"""Resonances, lifetimes and dynamics of an accelerating delta-function trap.

In the frame comoving with the trap the acceleration becomes a static
linear potential of tilt F = 2a/(2 eps)^3, and everything reduces to Airy
functions: stationary quasi-bound states, complex decay eigenvalues for the
pulled and pushed scenarios, and a Crank-Nicolson time-domain simulation
that cross-checks the eigenvalues.
"""

__version__ = "0.1.0"

from .airy import AiryQuad, ai_zero, airy_eval
from .errors import (
    AccuracyError,
    AiryTrapError,
    BranchError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EmptyDataError,
    FitError,
    QuadratureError,
    SingularError,
    StabilityError,
)
from .frames import (
    PhysicalScaling,
    PhysicalValue,
    TrapParams,
    comoving_to_lab,
    field_strength,
    from_physical,
    physical_acceleration,
    to_physical,
    zeta_of_xi,
)
from .profiles import WavefunctionProfile, make_xi_grid
from .pulling import (
    DecayMetrics,
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
from .pushing import (
    GAMMA_SHIFT,
    PushedState,
    extract_gamma,
    hard_wall_energy,
    hard_wall_norm,
    n0_coefficient,
    pushing_metrics,
    pushing_profile,
    solve_pushing,
    sweep_pushing,
)
from .stationary import (
    StationaryState,
    compound_profile,
    matching_coefficient,
    quasi_bound_profile,
    resonance_energy,
    tail_intensity,
)
from .tdse import (
    TdseConfig,
    TdseRun,
    bound_state_energy,
    cap_reflection_amplitude,
    evolve,
    fig5_config,
    fig6_config,
    fit_decay_rate,
    initial_bound_state,
    initial_hard_wall_state,
    lab_frame_density,
)
