import random
from collections import Counter

import pytest
from conftest import blocks
from scipy.stats import chisquare

from nested_ensembles.ensemble import election_observer
from nested_ensembles.enumeration import enumerate_nestings, swap_reachability
from nested_ensembles.errors import InvalidConfig, InvalidSeed, StuckChain
from nested_ensembles.graph import NestingSpec, is_k_nested
from nested_ensembles.swap import SwapConfig, SwapState, is_valid_swap, propose_pair, run_swap, swap_step


def visited(graph, plan, steps, rng_seed=0):
    """Canonical plans seen by a Swap run, keyed by digest"""
    seen = {plan.digest(): plan.canonical()}
    state = SwapState(graph, plan, random.Random(rng_seed))
    for _ in range(steps):
        state = swap_step(state)
        seen.setdefault(state.plan.digest(), state.plan.canonical())
    return seen


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [{"steps": 0}, {"steps": 1, "max_rejections_per_step": 0}, {"steps": 1, "rng_seed": 2**64}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidConfig):
            SwapConfig(**kwargs)


class TestProposal:
    def test_pairs_are_uniform(self, grid3x3, row_plan):
        state = SwapState(grid3x3, row_plan, random.Random(2024))
        counts = Counter(propose_pair(state) for _ in range(81_000))
        assert len(counts) == 81
        assert chisquare(list(counts.values())).pvalue > 0.001

    def test_valid_and_invalid_swaps(self, grid3x3, row_plan):
        assert is_valid_swap(grid3x3, row_plan, "3", "4")
        assert not is_valid_swap(grid3x3, row_plan, "1", "4")

    def test_same_district_is_a_valid_noop(self, grid3x3, row_plan):
        assert is_valid_swap(grid3x3, row_plan, "1", "2")
        assert is_valid_swap(grid3x3, row_plan, "5", "5")

    def test_swaps_are_reversible(self, grid3x3, row_plan):
        rng = random.Random(3)
        plans = list(visited(grid3x3, row_plan, 500).values())
        vertices = grid3x3.vertices
        checked = 0
        for _ in range(2_000):
            plan = rng.choice(plans)
            u, v = rng.choice(vertices), rng.choice(vertices)
            if not is_valid_swap(grid3x3, plan, u, v):
                continue
            swapped = plan.with_swap(u, v)
            assert is_k_nested(grid3x3, swapped, NestingSpec(3))
            assert is_valid_swap(grid3x3, swapped, u, v)
            assert swapped.with_swap(u, v) == plan
            if plan.assignment[u] == plan.assignment[v]:
                assert swapped.digest() == plan.digest()
            checked += 1
        assert checked > 0


class TestStep:
    def test_locked_plan_with_no_patience_gets_stuck(self, path6):
        # every cross-district swap on a path disconnects a district
        state = SwapState(path6, blocks([(1, 2, 3), (4, 5, 6)]), random.Random(0))
        with pytest.raises(StuckChain):
            for _ in range(200):
                state = swap_step(state, max_rejections=1)

    def test_locked_plan_stays_put(self, path6):
        plan = blocks([(1, 2, 3), (4, 5, 6)])
        assert list(visited(path6, plan, 200)) == [plan.digest()]


class TestRunSwap:
    def test_one_record_per_step(self, toy_graph, row_plan):
        observers = [election_observer(toy_graph.election("TOY"))]
        records = list(run_swap(toy_graph, row_plan, SwapConfig(50, rng_seed=1), observers))
        assert [r.step for r in records] == list(range(1, 51))
        assert all(r.seats_a in (1, 2, 3) for r in records)

    def test_deterministic(self, grid3x3, row_plan):
        config = SwapConfig(300, rng_seed=42)
        first = [r.plan_digest for r in run_swap(grid3x3, row_plan, config)]
        second = [r.plan_digest for r in run_swap(grid3x3, row_plan, config)]
        assert first == second

    def test_rejects_unnested_seed(self, grid3x3):
        with pytest.raises(InvalidSeed):
            run_swap(grid3x3, blocks([(1, 2), (3, 6, 9), (4, 5, 7, 8)]), SwapConfig(10))

    def test_arity_two(self, grid2x3):
        seed = blocks([(1, 2), (3, 6), (4, 5)])
        nesting = NestingSpec(2)
        nestings = enumerate_nestings(grid2x3, nesting)
        for record in run_swap(grid2x3, seed, SwapConfig(500, rng_seed=8, nesting=nesting)):
            assert record.plan_digest in {plan.digest() for plan in nestings}

    def test_short_run_stays_nested(self, grid3x3, row_plan):
        nestings = {plan.digest() for plan in enumerate_nestings(grid3x3, NestingSpec(3))}
        digests = {r.plan_digest for r in run_swap(grid3x3, row_plan, SwapConfig(2_000, rng_seed=5))}
        assert digests <= nestings


@pytest.mark.slow
@pytest.mark.parametrize("graph_name", ["grid2x3", "grid3x3"])
def test_long_runs_emit_only_nestings(request, graph_name):
    graph = request.getfixturevalue(graph_name)
    nesting = NestingSpec(3)
    nestings = enumerate_nestings(graph, nesting)
    start = sorted(nestings, key=lambda plan: plan.digest())[0]
    seen = visited(graph, start, 100_000, rng_seed=17)
    assert set(seen.values()) <= nestings


@pytest.mark.slow
def test_long_run_visits_the_reachable_closure(grid3x3, row_plan):
    seen = visited(grid3x3, row_plan, 100_000, rng_seed=23)
    assert set(seen.values()) == swap_reachability(grid3x3, NestingSpec(3), row_plan)
