"""Greedy robustness solvers.

``solve_case1`` is optimal on instances where every IDR is a single
one-entity minterm: kill sets there form a laminar family, so repeatedly
taking the largest remaining kill set is optimal.

``solve_heuristic`` handles any instance. It picks the entity whose residual
kill set is largest, breaking ties by the larger total minterm hit set on the
residual instance. Its K never undercuts the true value.

Every remaining tie is broken by the canonical (side, name) order.
"""

from __future__ import annotations

from .cascade import engine
from .model import IDN, CaseClass, InvalidInstanceError, classify, require_valid
from .robustness import RobustnessResult, threshold


def solve_case1(idn: IDN, rho: float) -> RobustnessResult:
    if classify(idn) is not CaseClass.CaseI:
        raise InvalidInstanceError("solve_case1 requires a Case I instance")
    target = threshold(rho, len(idn))
    eng = engine(idn)
    remaining = list(eng.kill_masks)
    failed = 0
    picks: list[int] = []
    while failed.bit_count() < target:
        best = max(range(eng.n), key=lambda i: (remaining[i].bit_count(), -i))
        chosen = remaining[best]
        picks.append(best)
        failed |= chosen
        remaining = [c & ~chosen for c in remaining]
    return _result(eng, rho, target, picks, failed, "case1")


def heuristic_picks(idn: IDN, target: int) -> list[tuple[int, int]]:
    """Run the greedy heuristic until ``target`` entities have failed.

    Returns ``(entity_index, failed_mask_after_pick)`` per iteration. The
    sequence does not depend on ``target`` except through where it stops,
    so a larger target always extends the sequence of a smaller one.
    """
    require_valid(idn)
    eng = engine(idn)
    owner_minterms = [(o, m) for o in eng.owners for m in eng.minterms[o]]
    failed = 0
    picks: list[tuple[int, int]] = []
    while failed.bit_count() < target:
        best_size = -1
        tied: list[tuple[int, int]] = []
        for i in range(eng.n):
            if failed >> i & 1:
                continue
            killed = eng.add(failed, 1 << i) & ~failed
            size = killed.bit_count()
            if size > best_size:
                best_size, tied = size, [(i, killed)]
            elif size == best_size:
                tied.append((i, killed))
        if len(tied) > 1:
            # residual instance: IDRs of surviving owners, minterms not yet hit
            residual = [m for o, m in owner_minterms if not failed >> o & 1 and not m & failed]
            best_hits = -1
            for i, killed in tied:
                hits = sum(1 for m in residual if m & killed)
                if hits > best_hits:
                    best_hits, pick = hits, (i, killed)
        else:
            pick = tied[0]
        failed |= pick[1]
        picks.append((pick[0], failed))
    return picks


def solve_heuristic(idn: IDN, rho: float) -> RobustnessResult:
    target = threshold(rho, len(idn))
    picks = heuristic_picks(idn, target)
    failed = picks[-1][1] if picks else 0
    return _result(engine(idn), rho, target, [i for i, _ in picks], failed, "heuristic")


def _result(eng, rho, target, picks, failed, method) -> RobustnessResult:
    seq = tuple(eng.entities[i] for i in picks)
    return RobustnessResult(
        rho=float(rho),
        threshold=target,
        k=len(picks) - 1,
        witness=frozenset(seq),
        final_failed=eng.to_set(failed),
        method=method,
        sequence=seq,
    )

