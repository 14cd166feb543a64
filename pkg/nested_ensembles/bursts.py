"""
Short bursts: bias a ReCom chain toward extreme seat counts.

Each burst runs ``burst_length`` ReCom steps from the best plan seen so far;
the best plan is only replaced by a strictly higher score, so ties keep the
earliest plan.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

from .elections import Election, Party, seats_won, tally
from .errors import InvalidConfig
from .graph import DualGraph, Plan
from .recom import RecomConfig, check_recom_seed, recom_transition
from .rng import seeded_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BurstConfig:
    inner: RecomConfig
    election: str
    target_party: Party = Party.A
    burst_length: int = 10
    num_bursts: int = 100

    def __post_init__(self) -> None:
        if self.burst_length < 1:
            raise InvalidConfig(f"burst_length must be at least 1, got {self.burst_length}")
        if self.num_bursts < 0:
            raise InvalidConfig(f"num_bursts must be nonnegative, got {self.num_bursts}")


class BurstResult(NamedTuple):
    best_plan: Plan
    trace: tuple[int, ...]


def score(graph: DualGraph, plan: Plan, election: Election, party: Party) -> int:
    return seats_won(tally(graph, plan, election), party)


def run_short_bursts(graph: DualGraph, initial: Plan, config: BurstConfig) -> BurstResult:
    """Best plan found and the running best score after each burst (non-decreasing)"""
    election = graph.election(config.election)
    check_recom_seed(graph, initial, config.inner)
    rng = seeded_rng(config.inner.rng_seed)

    best_plan = initial
    best_score = score(graph, initial, election, config.target_party)
    trace: list[int] = []

    for burst in range(config.num_bursts):
        plan = best_plan
        for _ in range(config.burst_length):
            plan = recom_transition(graph, plan, config.inner, rng)
            value = score(graph, plan, election, config.target_party)
            if value > best_score:
                best_plan, best_score = plan, value
        trace.append(best_score)
        log.debug("Burst %d: best %s seats %d", burst + 1, config.target_party, best_score)

    return BurstResult(best_plan, tuple(trace))
