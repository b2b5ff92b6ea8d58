"""Command-line front end.

Exit codes: 0 success, 1 invalid input (including an invalid instance or an
infeasible ILP assignment), 2 exact-search limits exhausted, 3 internal error.
Data goes to standard output or ``--out``; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .cascade import cascade, kill_sets_all
from .exact import (
    ExactLimits,
    Exhausted,
    build_ilp,
    check_assignment,
    export_lp,
    parse_lp,
    read_assignment_csv,
    trace_to_assignment,
    write_assignment_csv,
)
from .exact.search import ExactSolver
from .generator import GenSpec, generate
from .ingest import (
    ParseNote,
    export_killsets_csv,
    export_sweep_csv,
    export_trace_csv,
    read_idn,
    serialize_idn,
)
from .model import CaseClass, IdnError, classify, require_valid, validate
from .solvers import solve_case1, solve_heuristic
from .sweep import METHODS, sweep, worker_count

log = logging.getLogger("idnrobust")

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_INTERNAL = 0, 1, 2, 3
OUT_HELP = "write here instead of standard output"
RHO_HELP = "target failure fraction in (0, 1]"
METHOD_HELP = "solver (default heuristic)"
CASES = {"1": CaseClass.CaseI, "2": CaseClass.CaseII, "3": CaseClass.CaseIII, "4": CaseClass.CaseIV}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str):
    notes: list[ParseNote] = []
    idn = read_idn(path, notes)
    for note in notes:
        print(f"{path}: note: {note}", file=sys.stderr)
    return idn


def _load_valid(path: str):
    idn = _load(path)
    require_valid(idn)
    return idn


def _limits(args) -> ExactLimits:
    defaults = ExactLimits()
    return ExactLimits(
        max_witness_size=args.max_witness if args.max_witness is not None else defaults.max_witness_size,
        max_nodes=args.max_nodes if args.max_nodes is not None else defaults.max_nodes,
        time_budget=args.time_budget if args.time_budget is not None else defaults.time_budget,
    )


def _check_limit_flags(args) -> None:
    given = [f for f in ("max_witness", "max_nodes", "time_budget") if getattr(args, f) is not None]
    if given and args.method != "exact":
        flags = ", ".join("--" + f.replace("_", "-") for f in given)
        raise UsageError(f"{flags}: valid only with --method exact")


def _rho(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("rho must be in (0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _add_limits(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("exact search limits (only with --method exact)")
    g.add_argument("--max-witness", type=_positive_int, help="largest witness size to try (default 6)")
    g.add_argument("--max-nodes", type=_positive_int, help="enumeration node budget per rho (default 50000000)")
    g.add_argument("--time-budget", type=_positive_float, help="seconds per rho (default 60)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idnrobust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check an .idn file for structural problems")
    p.add_argument("file", help="instance in .idn format")

    p = sub.add_parser("classify", help="print the case class (CaseI..CaseIV)")
    p.add_argument("file", help="instance in .idn format")

    p = sub.add_parser("simulate", help="run a cascade and print the entity x time matrix")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--fail", required=True, help="comma-separated initially failed entities")
    p.add_argument("--trace", help="write the CSV here instead of standard output")
    p.add_argument("--steps", type=int, help="pad the matrix to this many time steps")

    p = sub.add_parser("killsets", help="per-entity kill sets as CSV")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--out", help=OUT_HELP)

    p = sub.add_parser("robustness", help="compute K for one rho")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--rho", type=_rho, required=True, help=RHO_HELP)
    p.add_argument("--method", choices=METHODS, default="heuristic", help=METHOD_HELP)
    _add_limits(p)

    p = sub.add_parser("sweep", help="K for rho = step, 2*step, ..., 1 as CSV")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--method", choices=METHODS, default="heuristic", help=METHOD_HELP)
    p.add_argument("--grid-step", type=_rho, default=0.02, help="grid spacing (default 0.02)")
    p.add_argument("--out", help=OUT_HELP)
    _add_limits(p)

    p = sub.add_parser("export-ilp", help="write the time-expanded ILP in LP format")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--rho", type=_rho, required=True, help=RHO_HELP)
    p.add_argument("--tf", type=_positive_int, help="final time step (default |A|+|B|)")
    p.add_argument("--out", help=OUT_HELP)

    p = sub.add_parser("assign", help="ILP assignment (variable,value CSV) reproducing a cascade")
    p.add_argument("file", help="instance in .idn format")
    p.add_argument("--fail", required=True, help="comma-separated initially failed entities")
    p.add_argument("--tf", type=_positive_int, help="final time step (default |A|+|B|)")
    p.add_argument("--out", help=OUT_HELP)

    p = sub.add_parser("check-ilp", help="check an assignment CSV against an LP model")
    p.add_argument("model", help="LP file written by export-ilp")
    p.add_argument("assignment", help="variable,value CSV")

    p = sub.add_parser("generate", help="write a seeded random instance")
    p.add_argument("--case", choices=sorted(CASES), required=True, help="case class 1..4")
    p.add_argument("--size-a", type=_positive_int, required=True, help="entities on side A")
    p.add_argument("--size-b", type=_positive_int, required=True, help="entities on side B")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--idr-probability", type=float, default=0.8,
                   help="chance that an entity gets an IDR (default 0.8)")
    p.add_argument("--max-minterms", type=_positive_int, default=3, help="minterms per IDR, at most (default 3)")
    p.add_argument("--max-minterm-size", type=_positive_int, default=3,
                   help="entities per minterm, at most (default 3)")
    p.add_argument("--allow-same-side", action="store_true",
                   help="let dependencies point at entities on the same side")
    p.add_argument("--out", help=OUT_HELP)
    return parser


def _grid(step: float) -> list[float]:
    count = int(1.0 / step + 1e-9)
    grid = [round(step * i, 10) for i in range(1, count + 1)]
    if grid[-1] < 1.0 - 1e-9:
        grid.append(1.0)
    return grid


def _fail_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("--fail needs at least one entity")
    return names


def _run(args) -> int:
    cmd = args.command
    if cmd == "validate":
        report = validate(_load(args.file))
        for v in report.violations:
            print(f"{v.severity}: {v.message}")
        if report.ok:
            print("valid")
            return EXIT_OK
        return EXIT_INPUT

    if cmd == "classify":
        print(classify(_load_valid(args.file)).value)
        return EXIT_OK

    if cmd == "simulate":
        idn = _load_valid(args.file)
        trace = cascade(idn, _fail_list(args.fail))
        text = export_trace_csv(trace, args.steps)
        if args.trace:
            _emit(text, args.trace)
            print(f"failed={len(trace.final)} steady_step={trace.steady_step}")
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if cmd == "killsets":
        idn = _load_valid(args.file)
        _emit(export_killsets_csv(idn, kill_sets_all(idn)), args.out)
        return EXIT_OK

    if cmd == "robustness":
        _check_limit_flags(args)
        idn = _load_valid(args.file)
        if args.method == "case1":
            res = solve_case1(idn, args.rho)
        elif args.method == "heuristic":
            res = solve_heuristic(idn, args.rho)
        else:
            res = ExactSolver(idn, _limits(args)).solve(args.rho)
        if isinstance(res, Exhausted):
            sys.stdout.write(res.summary())
            print(f"exact search exhausted: {res.reason}", file=sys.stderr)
            return EXIT_EXHAUSTED
        sys.stdout.write(res.summary())
        return EXIT_OK

    if cmd == "sweep":
        _check_limit_flags(args)
        idn = _load_valid(args.file)
        limits = _limits(args) if args.method == "exact" else None
        points = sweep(idn, _grid(args.grid_step), args.method, limits, workers=worker_count())
        _emit(export_sweep_csv(points), args.out)
        missing = [p.rho for p in points if p.k is None]
        if missing:
            res = ExactSolver(idn, limits).solve(missing[0])
            print(f"exact search exhausted for {len(missing)} grid point(s), first at rho={missing[0]:.2f}",
                  file=sys.stderr)
            if isinstance(res, Exhausted):
                sys.stderr.write(res.summary())
            return EXIT_EXHAUSTED
        return EXIT_OK

    if cmd == "export-ilp":
        idn = _load_valid(args.file)
        _emit(export_lp(build_ilp(idn, args.rho, args.tf)), args.out)
        return EXIT_OK

    if cmd == "assign":
        idn = _load_valid(args.file)
        trace = cascade(idn, _fail_list(args.fail))
        _emit(write_assignment_csv(trace_to_assignment(idn, trace, args.tf)), args.out)
        return EXIT_OK

    if cmd == "check-ilp":
        model = parse_lp(Path(args.model).read_text(encoding="utf-8"))
        asg = read_assignment_csv(Path(args.assignment).read_text(encoding="utf-8"))
        result = check_assignment(model, asg)
        for v in result.violations:
            print(f"violated: {v}")
        print(f"feasible={'yes' if result.feasible else 'no'}")
        print(f"objective={result.objective}")
        return EXIT_OK if result.feasible else EXIT_INPUT

    if cmd == "generate":
        spec = GenSpec(
            case=CASES[args.case],
            size_a=args.size_a,
            size_b=args.size_b,
            idr_probability=args.idr_probability,
            max_minterms=args.max_minterms,
            max_minterm_size=args.max_minterm_size,
            cross_only=not args.allow_same_side,
            seed=args.seed,
        )
        _emit(serialize_idn(generate(spec)), args.out)
        return EXIT_OK

    raise AssertionError(f"unhandled command {cmd}")


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except (IdnError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
