"""
Convergence heuristics and ensemble comparisons.

Autocorrelation uses the two-sample Pearson form: the first m - lag values
are correlated with the last m - lag values, each window centered on its
own mean. This differs slightly from the stationary estimator that centers
both windows on the global mean.
"""

import math
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .ensemble import EnsembleRecord
from .errors import DegenerateSeries, EmptyEnsemble, InvalidConfig, SchemaError, SeriesTooShort

DEFAULT_FRACTIONS = (0.1, 0.5, 1.0)


def autocorrelation(series: Sequence[float], lag: int) -> float:
    if lag < 0:
        raise InvalidConfig(f"lag must be nonnegative, got {lag}")
    values = np.asarray(series, dtype=float)
    if len(values) <= lag + 1:
        raise SeriesTooShort(f"Series of length {len(values)} is too short for lag {lag}")

    head = values[: len(values) - lag]
    tail = values[lag:]
    head_centered = head - head.mean()
    tail_centered = tail - tail.mean()
    head_norm = float(head_centered @ head_centered)
    tail_norm = float(tail_centered @ tail_centered)
    if head_norm == 0 or tail_norm == 0:
        raise DegenerateSeries(f"Series is constant over a lag-{lag} window")
    if lag == 0:
        return 1.0

    correlation = float(head_centered @ tail_centered) / math.sqrt(head_norm * tail_norm)
    return float(np.clip(correlation, -1.0, 1.0))


def autocorrelation_curve(series: Sequence[float], max_lag: int) -> list[float]:
    return [autocorrelation(series, lag) for lag in range(max_lag + 1)]


def statistic_series(records: Iterable[EnsembleRecord], stat: str) -> list[float]:
    series: list[float] = []
    for record in records:
        value = record.stat(stat)
        if isinstance(value, tuple | list):
            raise SchemaError(f"Statistic {stat!r} is a vector; pick a scalar statistic")
        series.append(float(value))
    return series


@dataclass(frozen=True)
class RankSummary:
    minimum: float
    lower_quartile: float
    median: float
    upper_quartile: float
    maximum: float


def partial_ensemble_rank_stats(
    records: Sequence[EnsembleRecord],
    fractions: Iterable[float] = DEFAULT_FRACTIONS,
) -> dict[float, list[RankSummary]]:
    """Five-number summary of each rank's share over the first ceil(f * m) records, per fraction f"""
    if not records:
        raise EmptyEnsemble("No records to summarize")
    fractions = list(fractions)
    for fraction in fractions:
        if not 0 < fraction <= 1:
            raise InvalidConfig(f"Fractions must lie in (0, 1], got {fraction}")

    shares = np.array([record.ranked_shares_a for record in records], dtype=float)
    if shares.ndim != 2:
        raise SchemaError("Ranked share vectors differ in length across records")

    summaries: dict[float, list[RankSummary]] = {}
    for fraction in fractions:
        prefix = shares[: math.ceil(fraction * len(records))]
        quantiles = np.quantile(prefix, [0.0, 0.25, 0.5, 0.75, 1.0], axis=0)
        summaries[fraction] = [RankSummary(*(float(q) for q in quantiles[:, rank])) for rank in range(shares.shape[1])]
    return summaries


def seat_histogram(records: Iterable[EnsembleRecord], stat: str = "seats_a") -> dict[int, int]:
    counts = Counter(int(value) for value in statistic_series(records, stat))
    if not counts:
        raise EmptyEnsemble("No records to count")
    return dict(sorted(counts.items()))


def histogram_distance(first: Mapping[int, int], second: Mapping[int, int]) -> float:
    """Total variation distance between the normalized histograms"""
    first_total = sum(first.values())
    second_total = sum(second.values())
    if first_total == 0 or second_total == 0:
        raise EmptyEnsemble("Cannot compare an empty histogram")
    support = set(first) | set(second)
    return 0.5 * sum(abs(first.get(k, 0) / first_total - second.get(k, 0) / second_total) for k in support)


def seat_range(histogram: Mapping[int, int]) -> tuple[int, int]:
    observed = [seats for seats, count in histogram.items() if count > 0]
    if not observed:
        raise EmptyEnsemble("Histogram has no observations")
    return min(observed), max(observed)


@dataclass(frozen=True)
class EnsembleComparison:
    distance: float
    first_range: tuple[int, int]
    second_range: tuple[int, int]
    first_histogram: dict[int, int]
    second_histogram: dict[int, int]


def compare_ensembles(
    first: Iterable[EnsembleRecord],
    second: Iterable[EnsembleRecord],
    stat: str = "seats_a",
) -> EnsembleComparison:
    """Seat histograms, ranges and their total variation distance, e.g. nested vs unnested"""
    first_histogram = seat_histogram(first, stat)
    second_histogram = seat_histogram(second, stat)
    return EnsembleComparison(
        distance=histogram_distance(first_histogram, second_histogram),
        first_range=seat_range(first_histogram),
        second_range=seat_range(second_histogram),
        first_histogram=first_histogram,
        second_histogram=second_histogram,
    )
