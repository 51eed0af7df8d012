"""Edge server placement and cell assignment toolkit."""

from .generate import GenSpec, gen_gravity, gen_uniform, generate
from .harness import SweepSpec, run_sweep
from .model import (
    Assignment,
    GridSpec,
    Instance,
    MalformedAssignmentError,
    Objectives,
    Violation,
    cost,
    cost_pairwise,
    objectives,
    server_load,
    spread,
    validate,
)
from .oracle import OracleBudgetError, OracleResult, enumerate_assignments
from .pipeline import ALGORITHMS, SolverConfig, SolveResult, solve

__all__ = [
    "ALGORITHMS",
    "Assignment",
    "GenSpec",
    "GridSpec",
    "Instance",
    "MalformedAssignmentError",
    "Objectives",
    "OracleBudgetError",
    "OracleResult",
    "SolveResult",
    "SolverConfig",
    "SweepSpec",
    "Violation",
    "cost",
    "cost_pairwise",
    "enumerate_assignments",
    "gen_gravity",
    "gen_uniform",
    "generate",
    "objectives",
    "run_sweep",
    "server_load",
    "solve",
    "spread",
    "validate",
]
