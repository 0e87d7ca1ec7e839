"""Optimal tracking of a hidden two-state Markov drift."""

from ._core import (
    DomainError,
    Error,
    IntegrationFailure,
    ModelParams,
    NoRootBracket,
    PhiSolution,
    ValidationError,
    ValueFunction,
    __version__,
    entrance_boundary_check,
    estimate_cost,
    h1,
    h2,
    hopital_ratio,
    l_residual,
    scale_function,
    simulate_path,
    solve,
    solve_phi,
    threshold_sweep,
    v_tilde,
)

__all__ = [
    "DomainError",
    "Error",
    "IntegrationFailure",
    "ModelParams",
    "NoRootBracket",
    "PhiSolution",
    "ValidationError",
    "ValueFunction",
    "__version__",
    "entrance_boundary_check",
    "estimate_cost",
    "h1",
    "h2",
    "hopital_ratio",
    "l_residual",
    "scale_function",
    "simulate_path",
    "solve",
    "solve_phi",
    "threshold_sweep",
    "v_tilde",
]
