"""Shared result type and threshold arithmetic for all robustness solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import EntityId

# 0.02, 0.04, ..., 1.00
DEFAULT_GRID: tuple[float, ...] = tuple(round(0.02 * i, 2) for i in range(1, 51))

_EPS = 1e-9


def check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho <= 1.0 or math.isnan(rho):
        raise ValueError(f"rho must be in (0, 1], got {rho}")
    return rho


def threshold(rho: float, n: int) -> int:
    """Minimum number of failed entities demanded by ``rho``: ceil(rho * n).

    The small epsilon stops float noise (0.07 * 100 = 7.000000000000001)
    from bumping an exact product up by one.
    """
    rho = check_rho(rho)
    if n <= 0:
        raise ValueError("instance has no entities")
    return max(1, math.ceil(rho * n - _EPS))


@dataclass(frozen=True)
class RobustnessResult:
    """Outcome of a solver for one ``rho``.

    ``k`` follows the (K, rho) convention: ``k + 1`` initial failures are
    needed, so ``len(witness) == k + 1``. ``sequence`` is the witness in the
    order the solver picked it (canonical order for the exact solver).
    """

    rho: float
    threshold: int
    k: int
    witness: frozenset[EntityId]
    final_failed: frozenset[EntityId]
    method: str
    sequence: tuple[EntityId, ...] = field(default=(), compare=False)

    @property
    def witness_size(self) -> int:
        return self.k + 1

    def summary(self) -> str:
        names = " ".join(e.name for e in (self.sequence or sorted(self.witness)))
        return (
            f"K={self.k}\n"
            f"witness_size={self.witness_size}\n"
            f"witness={names}\n"
            f"threshold={self.threshold}\n"
            f"final_failed={len(self.final_failed)}\n"
        )
