"""Kirchhoff plate bending by Galerkin weighted residuals with polynomial trial functions."""

from .config import load_problem, problem_from_config, problem_to_config
from .criteria import DesignCriterion, DesignReport, evaluate_problem, sweep
from .fields import derive_fields, max_principal_stress
from .model import (
    EdgeSegmentBC,
    LoadSpec,
    MaterialSpec,
    PlateProblem,
    PlateRect,
    SolverSettings,
    full_edges,
    rigidities,
    validate_problem,
)
from .solver import Solution, solve, solve_adaptive, solve_fixed_order

__version__ = "0.1.0"

__all__ = [
    "DesignCriterion", "DesignReport", "EdgeSegmentBC", "LoadSpec", "MaterialSpec", "PlateProblem",
    "PlateRect", "Solution", "SolverSettings", "derive_fields", "evaluate_problem", "full_edges",
    "load_problem", "max_principal_stress", "problem_from_config", "problem_to_config", "rigidities",
    "solve", "solve_adaptive", "solve_fixed_order", "sweep", "validate_problem",
]
