"""
Swap chain over k:1 nested plans.

The chain runs on a House dual graph whose vertices are House districts. A
step draws two House districts uniformly with replacement and exchanges
their Senate assignments; swaps that disconnect a Senate district are
rejected and redrawn within the same step. Draws landing in one Senate
district (or the same vertex twice) are accepted no-ops, which keeps the
chain lazy.
"""

import logging
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .ensemble import EnsembleRecord, Observer, observe
from .errors import InvalidConfig, InvalidSeed, StuckChain
from .graph import DualGraph, NestingSpec, Plan, VertexId, is_connected, is_k_nested
from .rng import check_seed, seeded_rng

log = logging.getLogger(__name__)

DEFAULT_MAX_REJECTIONS = 100_000


@dataclass(frozen=True)
class SwapConfig:
    steps: int
    rng_seed: int = 0
    max_rejections_per_step: int = DEFAULT_MAX_REJECTIONS
    nesting: NestingSpec = field(default_factory=NestingSpec)

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise InvalidConfig(f"steps must be at least 1, got {self.steps}")
        if self.max_rejections_per_step < 1:
            raise InvalidConfig(f"max_rejections_per_step must be at least 1, got {self.max_rejections_per_step}")
        check_seed(self.rng_seed)


@dataclass
class SwapState:
    graph: DualGraph
    plan: Plan
    rng: random.Random


def propose_pair(state: SwapState) -> tuple[VertexId, VertexId]:
    """Two House districts drawn independently and uniformly (with replacement)"""
    vertices: Sequence[VertexId] = state.graph.vertices
    u = vertices[state.rng.randrange(len(vertices))]
    v = vertices[state.rng.randrange(len(vertices))]
    return u, v


def is_valid_swap(graph: DualGraph, plan: Plan, u: VertexId, v: VertexId) -> bool:
    """True iff exchanging the districts of u and v keeps both districts connected"""
    du, dv = plan.assignment[u], plan.assignment[v]
    if du == dv:
        return True
    gains_v = (plan.districts[du] - {u}) | {v}
    gains_u = (plan.districts[dv] - {v}) | {u}
    return is_connected(graph, gains_v) and is_connected(graph, gains_u)


def swap_step(state: SwapState, max_rejections: int = DEFAULT_MAX_REJECTIONS) -> SwapState:
    for _ in range(max_rejections):
        u, v = propose_pair(state)
        if not is_valid_swap(state.graph, state.plan, u, v):
            continue
        if state.plan.assignment[u] == state.plan.assignment[v]:
            return SwapState(state.graph, state.plan, state.rng)
        return SwapState(state.graph, state.plan.with_swap(u, v), state.rng)
    raise StuckChain(f"No valid swap found in {max_rejections} proposals; the plan may be locked")


def run_swap(
    graph: DualGraph,
    initial: Plan,
    config: SwapConfig,
    observers: Iterable[Observer] = (),
) -> Iterator[EnsembleRecord]:
    """Stream one record per accepted step, deterministic in (graph, initial, config)"""
    graph.check_plan(initial)
    if not is_k_nested(graph, initial, config.nesting):
        raise InvalidSeed(f"Seed plan is not {config.nesting.arity}:1 nested on this graph")
    return _walk(graph, initial, config, tuple(observers))


def _walk(
    graph: DualGraph,
    initial: Plan,
    config: SwapConfig,
    observers: tuple[Observer, ...],
) -> Iterator[EnsembleRecord]:
    state = SwapState(graph, initial, seeded_rng(config.rng_seed))
    log.debug("Swap chain: %d steps, seed %d", config.steps, config.rng_seed)
    for step in range(1, config.steps + 1):
        state = swap_step(state, config.max_rejections_per_step)
        yield observe(step, graph, state.plan, observers)
