"""Finite-time thermodynamics of a two-level-spin Carnot engine with
temperature-tunable baths: EMP bounds, optimal driving protocols, and the
full power maximization with independent verification."""

from .baths import (
    Bath,
    EmpBounds,
    LowDissipationCoefficients,
    LowDissipationOptimum,
    effective_temperature,
    emp_bounds,
    gca_efficiency,
    generalized_carnot,
    low_dissipation_optimum,
)
from .engine import (
    CycleBoundaries,
    EngineParams,
    cycle_boundaries,
    entropy,
    gap_from_state,
    heat_rate,
    master_rhs,
    stationary_population,
    work_rate,
)
from .errors import (
    DegenerateCycleError,
    DomainError,
    InfeasibleDurationError,
    InvalidStateError,
    NonEngineError,
    NumericalError,
    SpinCarnotError,
)
from .oracle import (
    MasterIntegration,
    cycle_energy_audit,
    integrate_master,
    quasi_static_audit,
)
from .power import (
    OptimumReport,
    SweepRow,
    emp_vs_carnot_sweep,
    fit_low_dissipation,
    low_dissipation_prediction,
    maximize_power,
    power_at,
)
from .protocol import (
    BranchKind,
    ELBranch,
    ProtocolTrace,
    branch_endpoints,
    duration_integral,
    el_constant,
    heat_quadrature,
    pdot_branch,
    population_from_gap,
    reconstruct_protocol,
    solve_k_for_duration,
)

__version__ = "0.1.0"

__all__ = [
    "Bath",
    "BranchKind",
    "CycleBoundaries",
    "DegenerateCycleError",
    "DomainError",
    "ELBranch",
    "EmpBounds",
    "EngineParams",
    "InfeasibleDurationError",
    "InvalidStateError",
    "LowDissipationCoefficients",
    "LowDissipationOptimum",
    "MasterIntegration",
    "NonEngineError",
    "NumericalError",
    "OptimumReport",
    "ProtocolTrace",
    "SpinCarnotError",
    "SweepRow",
    "branch_endpoints",
    "cycle_boundaries",
    "cycle_energy_audit",
    "duration_integral",
    "effective_temperature",
    "el_constant",
    "emp_bounds",
    "emp_vs_carnot_sweep",
    "entropy",
    "fit_low_dissipation",
    "gap_from_state",
    "gca_efficiency",
    "generalized_carnot",
    "heat_quadrature",
    "heat_rate",
    "integrate_master",
    "low_dissipation_optimum",
    "low_dissipation_prediction",
    "master_rhs",
    "maximize_power",
    "pdot_branch",
    "population_from_gap",
    "power_at",
    "quasi_static_audit",
    "reconstruct_protocol",
    "solve_k_for_duration",
    "stationary_population",
    "work_rate",
]
