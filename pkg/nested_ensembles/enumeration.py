"""
Exhaustive enumeration oracles for small instances.

Partitions into connected districts of one exact size are generated by
depth-first search: the smallest unassigned vertex (canonical order) seeds
the next district, connected sets of the required size are grown around it,
and a district is kept only if every leftover component can still be tiled.
Each partition is produced exactly once, already in canonical form.

Vertex sets are bitmasks over the canonical vertex order.
"""

import logging
from collections import deque
from collections.abc import Iterator
from multiprocessing import Pool

from .errors import InvalidConfig, InvalidSeed, NoPartitionExists, TooLarge
from .graph import DualGraph, NestingSpec, Plan, VertexId, is_k_nested, vertex_key
from .swap import is_valid_swap

log = logging.getLogger(__name__)

NESTING_LIMIT = 30
PARTITION_LIMIT = 40

Neighbors = tuple[int, ...]


def _bitmask_graph(graph: DualGraph) -> tuple[list[VertexId], Neighbors]:
    order = sorted(graph.vertices, key=vertex_key)
    position = {v: i for i, v in enumerate(order)}
    neighbors = [0] * len(order)
    for u, v in graph.edges:
        neighbors[position[u]] |= 1 << position[v]
        neighbors[position[v]] |= 1 << position[u]
    return order, tuple(neighbors)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _tileable(neighbors: Neighbors, remaining: int, size: int) -> bool:
    """Every connected component of remaining has a multiple of size vertices"""
    while remaining:
        component = remaining & -remaining
        frontier = component
        while frontier:
            reach = 0
            for i in _bits(frontier):
                reach |= neighbors[i]
            frontier = reach & remaining & ~component
            component |= frontier
        if component.bit_count() % size:
            return False
        remaining &= ~component
    return True


def _connected_sets(neighbors: Neighbors, root: int, allowed: int, size: int) -> Iterator[int]:
    """Connected sets of exactly size vertices containing root, each once"""

    def grow(current: int, count: int, frontier: int, excluded: int) -> Iterator[int]:
        if count == size:
            yield current
            return
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            added = neighbors[low.bit_length() - 1] & allowed & ~current & ~excluded & ~low
            yield from grow(current | low, count + 1, frontier | added, excluded)
            excluded |= low

    root_bit = 1 << root
    yield from grow(root_bit, 1, neighbors[root] & allowed, 0)


def _first_districts(neighbors: Neighbors, allowed: int, size: int) -> Iterator[int]:
    root = (allowed & -allowed).bit_length() - 1
    for district in _connected_sets(neighbors, root, allowed, size):
        rest = allowed & ~district
        if not rest or _tileable(neighbors, rest, size):
            yield district


def _partitions(neighbors: Neighbors, allowed: int, size: int) -> Iterator[tuple[int, ...]]:
    if not allowed:
        yield ()
        return
    if allowed.bit_count() == size:
        # callers only pass leftovers that passed _tileable, so this is one connected block
        yield (allowed,)
        return
    for district in _first_districts(neighbors, allowed, size):
        for rest in _partitions(neighbors, allowed & ~district, size):
            yield (district, *rest)


def _count_partitions(neighbors: Neighbors, allowed: int, size: int) -> int:
    return sum(1 for _ in _partitions(neighbors, allowed, size))


def _check_instance(graph: DualGraph, num_districts: int, size: int, limit: int) -> None:
    if num_districts < 1 or size < 1:
        raise InvalidConfig(f"Need a positive district count and size, got {num_districts} x {size}")
    if len(graph.vertices) > limit:
        raise TooLarge(f"{len(graph.vertices)} vertices exceeds the enumeration limit of {limit}")
    if num_districts * size != len(graph.vertices):
        raise NoPartitionExists(
            f"{num_districts} districts of {size} cannot cover {len(graph.vertices)} vertices exactly"
        )


def iter_balanced_partitions(
    graph: DualGraph,
    num_districts: int,
    size: int,
    limit: int = PARTITION_LIMIT,
) -> Iterator[Plan]:
    """Canonical plans of num_districts connected districts with exactly size vertices each"""
    _check_instance(graph, num_districts, size, limit)
    order, neighbors = _bitmask_graph(graph)
    everything = (1 << len(order)) - 1
    if not _tileable(neighbors, everything, size):
        return iter(())
    return (
        Plan.from_districts([order[i] for i in _bits(mask)] for mask in masks)
        for masks in _partitions(neighbors, everything, size)
    )


def enumerate_balanced_partitions(
    graph: DualGraph,
    num_districts: int,
    size: int,
    limit: int = PARTITION_LIMIT,
) -> set[Plan]:
    return set(iter_balanced_partitions(graph, num_districts, size, limit))


def count_balanced_partitions(
    graph: DualGraph,
    num_districts: int,
    size: int,
    limit: int = PARTITION_LIMIT,
    workers: int = 1,
) -> int:
    """Number of partitions, without materializing plans; optionally split across processes"""
    _check_instance(graph, num_districts, size, limit)
    _, neighbors = _bitmask_graph(graph)
    everything = (1 << len(graph.vertices)) - 1
    if not _tileable(neighbors, everything, size):
        return 0
    if workers <= 1 or num_districts == 1:
        return _count_partitions(neighbors, everything, size)

    leftovers = [everything & ~district for district in _first_districts(neighbors, everything, size)]
    log.debug("Counting %d first-level branches on %d workers", len(leftovers), workers)
    with Pool(workers) as pool:
        counts = pool.starmap(_count_partitions, [(neighbors, rest, size) for rest in leftovers])
    return sum(counts)


def enumerate_nestings(graph: DualGraph, nesting: NestingSpec, limit: int = NESTING_LIMIT) -> set[Plan]:
    """Every k:1 nested plan on a small House dual graph"""
    if len(graph.vertices) > limit:
        raise TooLarge(f"{len(graph.vertices)} vertices exceeds the enumeration limit of {limit}")
    num_districts = nesting.num_districts(graph)
    return enumerate_balanced_partitions(graph, num_districts, nesting.arity, limit)


def swap_reachability(
    graph: DualGraph,
    nesting: NestingSpec,
    start: Plan,
    limit: int = NESTING_LIMIT,
) -> set[Plan]:
    """Canonical plans reachable from start by valid, non-trivial swaps (breadth-first closure)"""
    if len(graph.vertices) > limit:
        raise TooLarge(f"{len(graph.vertices)} vertices exceeds the enumeration limit of {limit}")
    graph.check_plan(start)
    if not is_k_nested(graph, start, nesting):
        raise InvalidSeed(f"Start plan is not {nesting.arity}:1 nested on this graph")

    vertices = graph.vertices
    first = start.canonical()
    reached = {first}
    queue = deque([first])
    while queue:
        plan = queue.popleft()
        for i, u in enumerate(vertices):
            for v in vertices[i + 1 :]:
                if plan.assignment[u] == plan.assignment[v] or not is_valid_swap(graph, plan, u, v):
                    continue
                neighbor = plan.with_swap(u, v).canonical()
                if neighbor not in reached:
                    reached.add(neighbor)
                    queue.append(neighbor)
    return reached
