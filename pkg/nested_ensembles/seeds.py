"""
Random seed plans.

Nested seeds grow one k-block at a time from a low-degree unassigned vertex
and restart whenever the leftover vertices can no longer be tiled. Unnested
seeds carve districts off spanning trees one at a time.
"""

import logging
import random
from collections.abc import Mapping

import networkx as nx

from .errors import DegeneratePopulation, InvalidConfig, SeedGenerationFailed
from .graph import DualGraph, NestingSpec, Plan, VertexId
from .recom import random_spanning_tree, split_tree, subtree_populations, within
from .rng import seeded_rng

log = logging.getLogger(__name__)

DEFAULT_MAX_RESTARTS = 1000


def _tileable(graph: DualGraph, remaining: set[VertexId], arity: int) -> bool:
    components = nx.connected_components(graph.network.subgraph(remaining))
    return all(len(component) % arity == 0 for component in components)


def _grow_nesting(graph: DualGraph, arity: int, rng: random.Random) -> Plan | None:
    unassigned = set(graph.vertices)
    blocks: list[list[VertexId]] = []

    while unassigned:
        candidates = graph.ordered(unassigned)
        free_degree = {v: sum(1 for w in graph.network.neighbors(v) if w in unassigned) for v in candidates}
        fewest = min(free_degree.values())
        block = [rng.choice([v for v in candidates if free_degree[v] == fewest])]

        while len(block) < arity:
            frontier: list[VertexId] = []
            for member in block:
                for neighbor in graph.network.neighbors(member):
                    if neighbor in unassigned and neighbor not in block and neighbor not in frontier:
                        frontier.append(neighbor)
            if not frontier:
                return None
            block.append(rng.choice(frontier))

        unassigned.difference_update(block)
        if unassigned and not _tileable(graph, unassigned, arity):
            return None
        blocks.append(block)

    return Plan.from_districts(blocks)


def random_nested_seed(
    graph: DualGraph,
    nesting: NestingSpec,
    rng_seed: int,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> Plan:
    """A k:1 nested plan from seeded greedy growth; deterministic per seed"""
    nesting.num_districts(graph)
    rng = seeded_rng(rng_seed)
    for attempt in range(1, max_restarts + 1):
        plan = _grow_nesting(graph, nesting.arity, rng)
        if plan is not None:
            log.debug("Nested seed found after %d attempt(s)", attempt)
            return plan
    raise SeedGenerationFailed(f"No {nesting.arity}:1 nesting found in {max_restarts} attempts")


def _carve(
    tree: nx.Graph,
    populations: Mapping[VertexId, int],
    ideal: float,
    epsilon: float,
    districts_left: int,
    rng: random.Random,
) -> set[VertexId] | None:
    """One district's worth of tree, leaving a remainder that still fits districts_left - 1 districts"""
    root, parents, below = subtree_populations(tree, populations)
    total = below[root]
    rest_target = ideal * (districts_left - 1)
    options: list[tuple[VertexId, bool]] = []
    for v in nx.dfs_preorder_nodes(tree, root):
        if v == root:
            continue
        if within(below[v], ideal, epsilon) and within(total - below[v], rest_target, epsilon):
            options.append((v, True))
        if within(total - below[v], ideal, epsilon) and within(below[v], rest_target, epsilon):
            options.append((v, False))
    if not options:
        return None
    child, child_side = options[rng.randrange(len(options))]
    side = split_tree(tree, (parents[child], child))
    return side if child_side else set(tree.nodes) - side


def random_recom_seed(
    graph: DualGraph,
    num_districts: int,
    epsilon: float = 0.05,
    rng_seed: int = 0,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> Plan:
    """A contiguous plan within epsilon, built by repeatedly carving a spanning tree"""
    if num_districts < 1:
        raise InvalidConfig(f"num_districts must be positive, got {num_districts}")
    if graph.total_population == 0:
        raise DegeneratePopulation("Total population is zero")
    ideal = graph.total_population / num_districts
    rng = seeded_rng(rng_seed)

    for attempt in range(1, max_restarts + 1):
        remaining = list(graph.vertices)
        districts: list[list[VertexId]] = []
        for placed in range(num_districts - 1):
            tree = random_spanning_tree(graph, remaining, rng)
            side = _carve(tree, graph.population, ideal, epsilon, num_districts - placed, rng)
            if side is None:
                break
            districts.append([v for v in remaining if v in side])
            remaining = [v for v in remaining if v not in side]
        else:
            districts.append(remaining)
            log.debug("Unnested seed found after %d attempt(s)", attempt)
            return Plan.from_districts(districts)
    raise SeedGenerationFailed(
        f"No {num_districts}-district plan within {epsilon:.2%} found in {max_restarts} attempts"
    )
