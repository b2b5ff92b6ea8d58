from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idnrobust import (
    DEFAULT_GRID,
    CaseClass,
    GenSpec,
    InvalidInstanceError,
    closure,
    generate,
    make_idn,
    solve_case1,
    solve_exact,
    solve_heuristic,
    sweep,
    threshold,
)
from idnrobust.robustness import check_rho
from idnrobust.solvers import heuristic_picks

from .conftest import idns
from .oracles import literal_heuristic, naive_min_witness

RHOS = (0.25, 0.5, 0.75, 1.0)


class TestThreshold:
    @pytest.mark.parametrize(
        "rho, n, expected",
        [(1.0, 7, 7), (0.5, 7, 4), (0.02, 7, 1), (0.07, 100, 7), (0.15, 7, 2), (0.3, 10, 3)],
    )
    def test_values(self, rho, n, expected):
        assert threshold(rho, n) == expected

    @pytest.mark.parametrize("rho", [0.0, -0.1, 1.01, float("nan")])
    def test_bad_rho(self, rho):
        with pytest.raises(ValueError):
            check_rho(rho)

    def test_empty_instance(self):
        with pytest.raises(ValueError):
            threshold(0.5, 0)

    def test_default_grid(self):
        assert len(DEFAULT_GRID) == 50
        assert DEFAULT_GRID[0] == 0.02 and DEFAULT_GRID[-1] == 1.0


class TestCase1:
    def test_chain(self, chain):
        # a2 takes down b1 and a1; b2 needs its own attack
        res = solve_case1(chain, 1.0)
        assert res.k == 1
        assert [e.name for e in res.sequence] == ["a2", "b2"]
        assert len(res.final_failed) == 4

    def test_no_dependencies(self, no_deps):
        assert solve_case1(no_deps, 1.0).k == 3
        assert solve_case1(no_deps, 0.5).k == 1

    def test_rejects_general_instances(self, sample):
        with pytest.raises(InvalidInstanceError):
            solve_case1(sample, 0.5)

    @pytest.mark.parametrize("seed", range(15))
    def test_optimal_against_enumeration(self, seed):
        idn = generate(GenSpec(CaseClass.CaseI, 4, 5, seed=seed))
        for rho in RHOS:
            target = threshold(rho, len(idn))
            assert solve_case1(idn, rho).witness_size == len(naive_min_witness(idn, target))


class TestHeuristic:
    def test_sample(self, sample):
        res = solve_heuristic(sample, 1.0)
        assert res.k == 0 and [e.name for e in res.sequence] == ["a2"]
        assert res.method == "heuristic"

    def test_tie_break_prefers_larger_minterm_hit_set(self):
        # b1 and b2 both kill two entities; b2 hits a2[0], a3[0] and b3[0], b1 only two
        idn = make_idn(
            ["a1", "a2", "a3"], ["b1", "b2", "b3"],
            {"a1": [["b1"]], "a2": [["b2"]], "a3": [["b2"], ["b1"]], "b3": [["a2"], ["a3"]]},
        )
        assert literal_heuristic(idn, 1) == ["b2"]
        assert [e.name for e in solve_heuristic(idn, 0.1).sequence] == ["b2"]

    def test_summary_lines(self, sample):
        text = solve_heuristic(sample, 1.0).summary()
        assert text.splitlines() == ["K=0", "witness_size=1", "witness=a2", "threshold=7", "final_failed=7"]


@settings(max_examples=200, deadline=None)
@given(idns(max_a=3, max_b=4), st.sampled_from(RHOS))
def test_heuristic_matches_literal_oracle(idn, rho):
    target = threshold(rho, len(idn))
    assert [e.name for e in solve_heuristic(idn, rho).sequence] == literal_heuristic(idn, target)


@settings(max_examples=200, deadline=None)
@given(idns(max_a=3, max_b=4), st.sampled_from(RHOS))
def test_heuristic_sound_and_never_below_optimum(idn, rho):
    target = threshold(rho, len(idn))
    res = solve_heuristic(idn, rho)
    assert len(closure(idn, res.witness)) >= target
    assert res.final_failed == closure(idn, res.witness)
    assert res.witness_size >= len(naive_min_witness(idn, target))
    assert res.k <= target - 1 and len(res.witness) == res.k + 1


@settings(max_examples=100, deadline=None)
@given(idns(max_a=3, max_b=4))
def test_heuristic_prefix_stable(idn):
    full = heuristic_picks(idn, len(idn))
    for rho in DEFAULT_GRID:
        part = heuristic_picks(idn, threshold(rho, len(idn)))
        assert part == full[: len(part)]
    ks = [p.k for p in sweep(idn)]
    assert ks == sorted(ks)
    assert ks == [solve_heuristic(idn, r).k for r in DEFAULT_GRID]
