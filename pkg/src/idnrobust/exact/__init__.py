"""Exact solving: enumeration search and the time-expanded ILP."""

from .ilp import (
    CheckResult,
    Constraint,
    IlpModel,
    LpFormatError,
    MissingVariableError,
    Variable,
    build_ilp,
    check_assignment,
    export_lp,
    parse_lp,
    read_assignment_csv,
    trace_to_assignment,
    write_assignment_csv,
)
from .search import ExactLimits, ExactSolver, Exhausted, solve_exact

__all__ = [
    "CheckResult",
    "Constraint",
    "ExactLimits",
    "ExactSolver",
    "Exhausted",
    "IlpModel",
    "LpFormatError",
    "MissingVariableError",
    "Variable",
    "build_ilp",
    "check_assignment",
    "export_lp",
    "parse_lp",
    "read_assignment_csv",
    "solve_exact",
    "trace_to_assignment",
    "write_assignment_csv",
]
