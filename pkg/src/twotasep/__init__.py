"""Numerical laboratory for the hydrodynamics of the two-species TASEP.

Right-moving particles (bullets) hop at rate beta, left-moving particles
(circs) at rate alpha, and opposing particles swap at rate 1.  The package
provides the density <-> Riemann-variable algebra, a self-similar
Riemann-problem solver, open-boundary steady states, phase diagrams, and a
kinetic Monte Carlo oracle, plus a CLI tying them together.
"""

from .errors import (
    BracketError,
    ConfigError,
    DegenerateDerivativeError,
    DomainError,
    InfeasibleCurrentError,
    InvalidShockPairError,
    NonConvergenceError,
    PhaseClassificationError,
    SingularDenominatorError,
    SpeedOrderingError,
    TwoTasepError,
)
from .hydro import (
    CharVelocities,
    Currents,
    Densities,
    ModelParams,
    RiemannVars,
    char_velocities,
    currents_from_rho,
    currents_from_z,
    duality_transform,
    in_physical_domain,
    rho_from_z,
    z_from_rho,
)
from .phases import (
    ALLOWED_PHASES,
    DIAGONAL_DEGENERATE,
    Induction,
    Phase,
    RateSweep,
    TasepPhase,
    classify_phase,
    phase_diagram_rates,
    phase_diagram_z,
    phase_name,
    tasep_phase,
)
from .riemann import (
    RiemannData,
    Wave,
    WaveFamily,
    WaveFanSolution,
    eval_solution,
    extremal_current,
    fan_state_at,
    r0,
    shock_speed,
    solve_riemann,
    tasep_riemann,
)
from .steady import (
    BoundaryRates,
    SolverConfig,
    SteadyState,
    invert_left,
    invert_right,
    left_boundary_currents,
    right_boundary_currents,
    solve_steady_state,
)

__version__ = "0.1.0"

__all__ = [
    "ALLOWED_PHASES",
    "BoundaryRates",
    "BracketError",
    "CharVelocities",
    "ConfigError",
    "Currents",
    "DIAGONAL_DEGENERATE",
    "DegenerateDerivativeError",
    "Densities",
    "DomainError",
    "Induction",
    "InfeasibleCurrentError",
    "InvalidShockPairError",
    "ModelParams",
    "NonConvergenceError",
    "Phase",
    "PhaseClassificationError",
    "RateSweep",
    "RiemannData",
    "RiemannVars",
    "SingularDenominatorError",
    "SolverConfig",
    "SpeedOrderingError",
    "SteadyState",
    "TasepPhase",
    "TwoTasepError",
    "Wave",
    "WaveFamily",
    "WaveFanSolution",
    "char_velocities",
    "classify_phase",
    "currents_from_rho",
    "currents_from_z",
    "duality_transform",
    "eval_solution",
    "extremal_current",
    "fan_state_at",
    "in_physical_domain",
    "invert_left",
    "invert_right",
    "left_boundary_currents",
    "phase_diagram_rates",
    "phase_diagram_z",
    "phase_name",
    "r0",
    "rho_from_z",
    "right_boundary_currents",
    "shock_speed",
    "solve_riemann",
    "solve_steady_state",
    "tasep_phase",
    "tasep_riemann",
    "z_from_rho",
]
