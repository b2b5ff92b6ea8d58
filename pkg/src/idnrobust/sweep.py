"""K-versus-rho curves for a fixed instance."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, Sequence

from .exact import ExactLimits, ExactSolver
from .model import IDN, require_valid
from .robustness import DEFAULT_GRID, RobustnessResult, check_rho, threshold
from .solvers import heuristic_picks, solve_case1

METHODS = ("case1", "heuristic", "exact")


class SweepPoint(NamedTuple):
    rho: float
    k: int | None  # None when the exact search ran out of limits


def sweep(
    idn: IDN,
    rho_grid: Sequence[float] | None = None,
    method: str = "heuristic",
    limits: ExactLimits | None = None,
    workers: int = 1,
) -> list[SweepPoint]:
    """Solve every grid point with ``method``; output is sorted by rho.

    The heuristic is run once up to the largest threshold: its pick order does
    not depend on rho, so each grid point is read off the shared sequence.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    grid = sorted(check_rho(r) for r in (DEFAULT_GRID if rho_grid is None else rho_grid))
    if not grid:
        return []
    require_valid(idn)
    n = len(idn)

    if method == "case1":
        return [SweepPoint(r, solve_case1(idn, r).k) for r in grid]

    if method == "heuristic":
        picks = heuristic_picks(idn, threshold(grid[-1], n))
        sizes = [failed.bit_count() for _, failed in picks]
        out = []
        for r in grid:
            target = threshold(r, n)
            k = next(j for j, size in enumerate(sizes) if size >= target)
            out.append(SweepPoint(r, k))
        return out

    if workers > 1 and len(grid) > 1:
        # contiguous chunks keep each worker's proof cache useful
        size = -(-len(grid) // workers)
        chunks = [grid[i : i + size] for i in range(0, len(grid), size)]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = pool.map(_exact_chunk, [idn] * len(chunks), chunks, [limits] * len(chunks))
            return [p for part in parts for p in part]
    return _exact_chunk(idn, grid, limits)


def _exact_chunk(idn: IDN, grid: list[float], limits: ExactLimits | None) -> list[SweepPoint]:
    solver = ExactSolver(idn, limits)
    out = []
    for r in grid:
        res = solver.solve(r)
        out.append(SweepPoint(r, res.k if isinstance(res, RobustnessResult) else None))
    return out


def worker_count() -> int:
    """Worker cap from ``IDN_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("IDN_THREADS", "0").strip() or "0"
    value = int(raw)
    if value < 0:
        raise ValueError("IDN_THREADS must be >= 0")
    return value or (os.cpu_count() or 1)
