"""
ReCom chain over unit-level dual graphs.

A step picks a uniformly random cut edge, merges the two districts it
joins, draws a spanning tree of the merged region (random edge weights
followed by a minimum spanning tree) and cuts one tree edge whose removal
leaves two halves within epsilon of the ideal population. Failed cuts
redraw the tree first and reselect the merge pair after ``pair_attempts``
trees, all within one ``max_tree_attempts`` budget per step.
"""

import logging
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

import networkx as nx

from .ensemble import EnsembleRecord, Observer, observe
from .errors import (
    DegeneratePlan,
    DegeneratePopulation,
    InvalidConfig,
    InvalidSeed,
    InvalidSubset,
    NotConnected,
    StepFailed,
)
from .graph import DistrictId, DualGraph, Edge, Plan, VertexId, cut_edges, is_contiguous_plan, population_deviation
from .rng import check_seed, seeded_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecomConfig:
    steps: int
    num_districts: int
    rng_seed: int = 0
    epsilon: float = 0.05
    max_tree_attempts: int = 1000
    pair_attempts: int = 100

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise InvalidConfig(f"steps must be at least 1, got {self.steps}")
        if self.num_districts < 2:
            raise InvalidConfig(f"ReCom needs at least 2 districts, got {self.num_districts}")
        if not 0 <= self.epsilon < 1:
            raise InvalidConfig(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.max_tree_attempts < 1 or self.pair_attempts < 1:
            raise InvalidConfig("max_tree_attempts and pair_attempts must be at least 1")
        check_seed(self.rng_seed)


def within(population: float, target: float, epsilon: float) -> bool:
    return abs(population - target) / target <= epsilon


def select_merge_pair(graph: DualGraph, plan: Plan, rng: random.Random) -> tuple[DistrictId, DistrictId]:
    """Districts on either side of a uniformly chosen cut edge, smaller id first"""
    if plan.num_districts < 2:
        raise DegeneratePlan("A single-district plan has nothing to merge")
    edges = cut_edges(graph, plan)
    if not edges:
        raise DegeneratePlan("Plan has no cut edges")
    u, v = edges[rng.randrange(len(edges))]
    du, dv = plan.assignment[u], plan.assignment[v]
    return min(du, dv), max(du, dv)


def random_spanning_tree(graph: DualGraph, subset: Iterable[VertexId], rng: random.Random) -> nx.Graph:
    """Minimum spanning tree of the induced subgraph under i.i.d. uniform edge weights"""
    members = set(subset)
    if not members:
        raise InvalidSubset("Cannot span an empty vertex set")
    graph.check_vertices(members)
    members = graph.ordered(members)
    inside = set(members)
    index = graph.index

    weighted = nx.Graph()
    weighted.add_nodes_from(members)
    for u in members:
        for v in graph.network.neighbors(u):
            if v in inside and index[u] < index[v]:
                weighted.add_edge(u, v, weight=rng.random())

    if not nx.is_connected(weighted):
        raise NotConnected(f"Induced subgraph on {len(members)} vertices is not connected")
    return nx.minimum_spanning_tree(weighted, algorithm="kruskal")


def subtree_populations(
    tree: nx.Graph, populations: Mapping[VertexId, int]
) -> tuple[VertexId, dict[VertexId, VertexId], dict[VertexId, int]]:
    """Root the tree at its first node; return (root, parent of each node, population below each node)"""
    root = next(iter(tree.nodes))
    parents = nx.dfs_predecessors(tree, root)
    below = {v: populations[v] for v in tree.nodes}
    for v in nx.dfs_postorder_nodes(tree, root):
        if v != root:
            below[parents[v]] += below[v]
    return root, parents, below


def find_balanced_cut(
    tree: nx.Graph,
    populations: Mapping[VertexId, int],
    ideal: float,
    epsilon: float,
    rng: random.Random,
) -> Edge | None:
    """A uniformly chosen tree edge (parent, child) splitting the tree into two balanced halves, or None"""
    if ideal <= 0:
        raise DegeneratePopulation(f"Ideal district population must be positive, got {ideal}")
    if tree.number_of_nodes() < 2:
        return None
    root, parents, below = subtree_populations(tree, populations)
    total = below[root]
    candidates: list[Edge] = [
        (parents[v], v)
        for v in nx.dfs_preorder_nodes(tree, root)
        if v != root and within(below[v], ideal, epsilon) and within(total - below[v], ideal, epsilon)
    ]
    if not candidates:
        return None
    return candidates[rng.randrange(len(candidates))]


def split_tree(tree: nx.Graph, edge: Edge) -> set[VertexId]:
    """Vertices on the child side of a tree edge"""
    parent, child = edge
    pruned = tree.copy()
    pruned.remove_edge(parent, child)
    return nx.node_connected_component(pruned, child)


def recom_step(
    graph: DualGraph,
    plan: Plan,
    config: RecomConfig,
    rng: random.Random,
    attempts: int | None = None,
) -> Plan:
    """One recombination of a single merge pair; StepFailed if no balanced cut turns up"""
    budget = config.max_tree_attempts if attempts is None else attempts
    tries = min(config.pair_attempts, budget)
    first, second = select_merge_pair(graph, plan, rng)
    region = graph.ordered(plan.districts[first] | plan.districts[second])
    ideal = graph.total_population / plan.num_districts

    for _ in range(tries):
        tree = random_spanning_tree(graph, region, rng)
        edge = find_balanced_cut(tree, graph.population, ideal, config.epsilon, rng)
        if edge is None:
            continue
        side = split_tree(tree, edge)
        return plan.with_districts(
            {
                first: [v for v in region if v in side],
                second: [v for v in region if v not in side],
            }
        )
    raise StepFailed(f"No balanced cut for districts {first} and {second} in {tries} spanning trees", attempts=tries)


def recom_transition(graph: DualGraph, plan: Plan, config: RecomConfig, rng: random.Random) -> Plan:
    """recom_step with merge-pair reselection, bounded by max_tree_attempts trees"""
    remaining = config.max_tree_attempts
    while True:
        try:
            return recom_step(graph, plan, config, rng, attempts=remaining)
        except StepFailed as failure:
            remaining -= failure.attempts
            log.debug("%s; %d tree draws left", failure, remaining)
            if remaining <= 0:
                raise StepFailed(
                    f"No balanced cut found in {config.max_tree_attempts} spanning trees",
                    attempts=config.max_tree_attempts,
                ) from failure


def check_recom_seed(graph: DualGraph, plan: Plan, config: RecomConfig) -> None:
    graph.check_plan(plan)
    if plan.num_districts != config.num_districts:
        raise InvalidSeed(f"Seed plan has {plan.num_districts} districts, config asks for {config.num_districts}")
    if not is_contiguous_plan(graph, plan):
        raise InvalidSeed("Seed plan has a disconnected district")
    deviation = population_deviation(graph, plan)
    if deviation > config.epsilon:
        raise InvalidSeed(f"Seed plan deviates {deviation:.2%} from ideal population (epsilon {config.epsilon:.2%})")


def run_recom(
    graph: DualGraph,
    initial: Plan,
    config: RecomConfig,
    observers: Iterable[Observer] = (),
) -> Iterator[EnsembleRecord]:
    """Stream one record per step, deterministic in (graph, initial, config)"""
    check_recom_seed(graph, initial, config)
    return _walk(graph, initial, config, tuple(observers))


def _walk(
    graph: DualGraph,
    initial: Plan,
    config: RecomConfig,
    observers: tuple[Observer, ...],
) -> Iterator[EnsembleRecord]:
    rng = seeded_rng(config.rng_seed)
    plan = initial
    log.debug("ReCom chain: %d steps, %d districts, epsilon %s", config.steps, config.num_districts, config.epsilon)
    for step in range(1, config.steps + 1):
        plan = recom_transition(graph, plan, config, rng)
        yield observe(step, graph, plan, observers)
