"""Robustness analysis of interdependent networks under Boolean dependency relations."""

from .cascade import (
    CascadeTrace,
    MintermRef,
    cascade,
    closure,
    kill_set,
    kill_sets_all,
    mhs,
    step,
    tmhs,
)
from .exact import (
    ExactLimits,
    ExactSolver,
    Exhausted,
    IlpModel,
    build_ilp,
    check_assignment,
    export_lp,
    parse_lp,
    solve_exact,
    trace_to_assignment,
)
from .generator import GenSpec, generate
from .ingest import (
    export_killsets_csv,
    export_sweep_csv,
    export_trace_csv,
    parse_idn,
    read_idn,
    serialize_idn,
)
from .model import (
    IDN,
    IDR,
    CaseClass,
    EntityId,
    IdnError,
    InvalidInstanceError,
    Side,
    UnknownEntityError,
    ValidationReport,
    classify,
    make_idn,
    validate,
)
from .robustness import DEFAULT_GRID, RobustnessResult, threshold
from .solvers import solve_case1, solve_heuristic
from .sweep import SweepPoint, sweep

__version__ = "0.1.0"
