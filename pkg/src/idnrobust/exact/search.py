"""Exact minimum initial-failure sets by iterative deepening.

For witness size s = 1, 2, ... the search walks s-subsets in lexicographic
(canonical entity) order, so the first sufficient subset found is the
lexicographically smallest minimum witness. Two sound prunings apply:

* an entity already in the closure of the chosen prefix is skipped, since a
  set containing it cannot be a minimum witness;
* a branch is cut when even failing every remaining candidate together with
  the prefix cannot reach the threshold (closure is monotone).

Summing singleton kill-set sizes is *not* a valid bound here: with
disjunctive IDRs two failures can jointly kill entities that neither kills
alone, so that bound is not used.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..cascade import engine
from ..model import IDN, require_valid
from ..robustness import RobustnessResult, threshold
from ..solvers import solve_heuristic


@dataclass(frozen=True)
class ExactLimits:
    max_witness_size: int = 6
    max_nodes: int = 50_000_000
    time_budget: float = 60.0

    def __post_init__(self):
        if self.max_witness_size < 1 or self.max_nodes < 1 or not self.time_budget > 0:
            raise ValueError("exact limits must all be positive")


@dataclass(frozen=True)
class Exhausted:
    """Returned instead of a result when the search hits a limit.

    ``k_lower`` is proven (no witness of size ``k_lower`` or less exists).
    ``k_upper`` comes from the heuristic and is always achievable.
    """

    rho: float
    threshold: int
    k_lower: int
    k_upper: int
    reason: str
    nodes: int

    def summary(self) -> str:
        return (
            f"exhausted: {self.reason}\n"
            f"K_lower={self.k_lower}\n"
            f"K_upper={self.k_upper}\n"
            f"threshold={self.threshold}\n"
            f"nodes={self.nodes}\n"
        )


class _OutOfBudget(Exception):
    pass


class ExactSolver:
    """Reusable exact solver for one instance.

    Remembers which witness sizes were proven insufficient for which
    thresholds, so a sweep over increasing ``rho`` never repeats a proof.
    """

    def __init__(self, idn: IDN, limits: ExactLimits | None = None):
        require_valid(idn)
        self.idn = idn
        self.limits = limits or ExactLimits()
        self.eng = engine(idn)
        n = self.eng.n
        self._tail = [self.eng.full & ~((1 << i) - 1) for i in range(n + 1)]
        # size -> smallest threshold proven unreachable with that many failures
        self._unreachable: dict[int, int] = {}
        self.nodes = 0

    def solve(self, rho: float) -> RobustnessResult | Exhausted:
        n = self.eng.n
        target = threshold(rho, n)
        self.nodes = 0
        self._deadline = time.monotonic() + self.limits.time_budget
        proven = 0
        try:
            for size in range(1, min(self.limits.max_witness_size, n) + 1):
                if self._unreachable.get(size, n + 1) <= target:
                    proven = size
                    continue
                found = self._search(size, target)
                if found is not None:
                    return self._result(rho, target, found)
                self._unreachable[size] = min(self._unreachable.get(size, n + 1), target)
                proven = size
            reason = f"no witness of size <= {self.limits.max_witness_size}"
        except _OutOfBudget as exc:
            reason = str(exc)
        return self._exhausted(rho, target, proven, reason)

    def _tick(self):
        self.nodes += 1
        if self.nodes >= self.limits.max_nodes:
            raise _OutOfBudget(f"node budget {self.limits.max_nodes} exhausted")
        if not self.nodes & 0xFFF and time.monotonic() > self._deadline:
            raise _OutOfBudget(f"time budget {self.limits.time_budget}s exhausted")

    def _search(self, size: int, target: int) -> list[int] | None:
        eng, tail, n = self.eng, self._tail, self.eng.n
        add, tick = eng.add, self._tick

        def dfs(start: int, left: int, closed: int) -> list[int] | None:
            for i in range(start, n - left + 1):
                bit = 1 << i
                if closed & bit:
                    continue
                # every later candidate together cannot reach the target
                if add(closed, tail[i]).bit_count() < target:
                    return None
                tick()
                new = add(closed, bit)
                if left == 1:
                    if new.bit_count() >= target:
                        return [i]
                    continue
                rest = dfs(i + 1, left - 1, new)
                if rest is not None:
                    return [i] + rest
            return None

        return dfs(0, size, 0)

    def _result(self, rho, target, picks) -> RobustnessResult:
        eng = self.eng
        witness = tuple(eng.entities[i] for i in picks)
        return RobustnessResult(
            rho=float(rho),
            threshold=target,
            k=len(picks) - 1,
            witness=frozenset(witness),
            final_failed=eng.to_set(eng.closure(eng.mask(witness))),
            method="exact",
            sequence=witness,
        )

    def _exhausted(self, rho, target, proven, reason) -> Exhausted:
        upper = solve_heuristic(self.idn, rho).k
        return Exhausted(
            rho=float(rho),
            threshold=target,
            k_lower=proven,
            k_upper=upper,
            reason=reason,
            nodes=self.nodes,
        )


def solve_exact(idn: IDN, rho: float, limits: ExactLimits | None = None) -> RobustnessResult | Exhausted:
    """Minimum witness for ``rho``, or :class:`Exhausted` when a limit is hit."""
    return ExactSolver(idn, limits).solve(rho)
