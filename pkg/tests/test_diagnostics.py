import numpy as np
import pytest

from nested_ensembles.diagnostics import (
    autocorrelation,
    autocorrelation_curve,
    compare_ensembles,
    histogram_distance,
    partial_ensemble_rank_stats,
    seat_histogram,
    seat_range,
    statistic_series,
)
from nested_ensembles.ensemble import EnsembleRecord, election_observer
from nested_ensembles.errors import DegenerateSeries, EmptyEnsemble, InvalidConfig, SchemaError, SeriesTooShort
from nested_ensembles.graph import NestingSpec
from nested_ensembles.seeds import random_nested_seed
from nested_ensembles.swap import SwapConfig, run_swap


def records_with(seats, shares=None):
    return [
        EnsembleRecord(step, f"d{step}", {"seats_a": s, "ranked_shares_a": shares[step - 1] if shares else (0.5,)})
        for step, s in enumerate(seats, start=1)
    ]


class TestAutocorrelation:
    def test_lag_zero_is_one(self):
        assert autocorrelation([3, 1, 4, 1, 5, 9, 2, 6], 0) == 1.0

    def test_alternating_series(self):
        series = [1 if i % 2 == 0 else -1 for i in range(11)]
        assert autocorrelation(series, 1) == -1.0
        assert autocorrelation(series, 2) == pytest.approx(1.0)

    def test_white_noise_decorrelates(self):
        noise = np.random.default_rng(7).normal(size=10_000)
        curve = autocorrelation_curve(noise, 20)
        assert curve[0] == 1.0
        assert max(abs(value) for value in curve[1:]) < 0.05

    def test_constant_series(self):
        with pytest.raises(DegenerateSeries):
            autocorrelation([2, 2, 2, 2], 1)

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            autocorrelation([1, 2, 3], 2)

    def test_negative_lag(self):
        with pytest.raises(InvalidConfig):
            autocorrelation([1, 2, 3], -1)

    @pytest.mark.parametrize(("scale", "shift"), [(3.0, 0.0), (0.5, -7.0), (-1.0, 0.0), (-2.5, 4.0)])
    def test_unchanged_by_affine_maps(self, scale, shift):
        series = np.random.default_rng(3).normal(size=200).cumsum()
        mapped = scale * series + shift
        assert autocorrelation_curve(mapped, 10) == pytest.approx(autocorrelation_curve(series, 10))


def test_statistic_series_rejects_vectors():
    records = records_with([1, 2])
    assert statistic_series(records, "seats_a") == [1.0, 2.0]
    with pytest.raises(SchemaError, match="vector"):
        statistic_series(records, "ranked_shares_a")
    with pytest.raises(SchemaError, match="no statistic"):
        statistic_series(records, "seats_b")


class TestPartialEnsembles:
    def test_prefix_summaries(self):
        shares = [(0.1 * i, 0.5 + 0.01 * i) for i in range(1, 11)]
        summaries = partial_ensemble_rank_stats(records_with([0] * 10, shares), [0.1, 0.5, 1.0])

        assert summaries[0.1][0].minimum == pytest.approx(0.1)
        assert summaries[0.1][0].maximum == pytest.approx(0.1)
        assert summaries[0.5][0].maximum == pytest.approx(0.5)
        assert summaries[1.0][0].median == pytest.approx(0.55)
        assert summaries[1.0][1].minimum == pytest.approx(0.51)
        assert summaries[1.0][1].maximum == pytest.approx(0.60)
        assert len(summaries[1.0]) == 2

    def test_prefix_rounds_up(self):
        summaries = partial_ensemble_rank_stats(records_with([0] * 3, [(0.2,), (0.4,), (0.9,)]), [0.5])
        assert summaries[0.5][0].maximum == pytest.approx(0.4)

    def test_empty(self):
        with pytest.raises(EmptyEnsemble):
            partial_ensemble_rank_stats([])

    def test_bad_fraction(self):
        with pytest.raises(InvalidConfig):
            partial_ensemble_rank_stats(records_with([1]), [0.0])


class TestHistograms:
    def test_seat_histogram_sorted(self):
        assert list(seat_histogram(records_with([3, 1, 3, 2])).items()) == [(1, 1), (2, 1), (3, 2)]

    def test_distance(self):
        assert histogram_distance({1: 5, 2: 5}, {2: 10, 1: 10}) == 0
        assert histogram_distance({1: 4}, {2: 7}) == 1
        assert histogram_distance({1: 1, 2: 1}, {2: 1}) == pytest.approx(0.5)

    def test_distance_is_a_metric(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            first, second, third = (
                {seats: int(count) for seats, count in enumerate(rng.integers(0, 6, size=5)) if count} or {0: 1}
                for _ in range(3)
            )
            assert histogram_distance(first, first) == 0
            assert histogram_distance(first, second) == pytest.approx(histogram_distance(second, first))
            assert 0 <= histogram_distance(first, second) <= 1
            assert histogram_distance(first, third) <= histogram_distance(first, second) + histogram_distance(
                second, third
            ) + 1e-12

    def test_empty_histogram(self):
        with pytest.raises(EmptyEnsemble):
            histogram_distance({}, {1: 1})

    def test_seat_range_ignores_zero_counts(self):
        assert seat_range({0: 0, 14: 3, 23: 1, 30: 0}) == (14, 23)

    def test_compare_ensembles(self):
        comparison = compare_ensembles(records_with([1, 1, 2, 2]), records_with([2, 3]))
        assert comparison.distance == pytest.approx(0.5)
        assert comparison.first_range == (1, 2)
        assert comparison.second_range == (2, 3)


def test_toy_swap_run_decorrelates(house_graph):
    plan = random_nested_seed(house_graph, NestingSpec(3), rng_seed=1)
    observers = [election_observer(house_graph.election("TOY"))]
    series = statistic_series(run_swap(house_graph, plan, SwapConfig(5_000, rng_seed=2), observers), "seats_a")
    curve = autocorrelation_curve(series, 500)
    assert curve[0] == 1.0
    assert abs(curve[500]) < abs(curve[1])


@pytest.mark.slow
def test_long_toy_swap_run_hovers_around_zero(house_graph):
    plan = random_nested_seed(house_graph, NestingSpec(3), rng_seed=1)
    observers = [election_observer(house_graph.election("TOY"))]
    series = statistic_series(run_swap(house_graph, plan, SwapConfig(100_000, rng_seed=2), observers), "seats_a")
    curve = autocorrelation_curve(series, 2_500)
    assert max(abs(value) for value in curve[2_000:]) < 0.1


@pytest.mark.slow
def test_seeds_agree_on_seat_histogram(house_graph):
    observers = [election_observer(house_graph.election("TOY"))]
    runs = []
    for seed in (101, 202):
        start = random_nested_seed(house_graph, NestingSpec(3), rng_seed=seed)
        runs.append(list(run_swap(house_graph, start, SwapConfig(100_000, rng_seed=seed), observers)))
    assert compare_ensembles(*runs).distance < 0.05
