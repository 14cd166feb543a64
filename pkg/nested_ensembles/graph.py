"""
Dual graphs and districting plans.

A DualGraph is a connected graph of geographic units (precincts, wards, or
House districts) carrying integer populations and two-party election
tallies. A Plan assigns every unit to one of n districts labeled 1..n.
Both are immutable once built; the operations here are pure functions.
"""

import hashlib
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType

import networkx as nx

from .elections import Election
from .errors import (
    DegeneratePopulation,
    DisconnectedGraph,
    DuplicateVertex,
    EmptyDistrict,
    IncompleteElection,
    InvalidConfig,
    InvalidSubset,
    NoNestingExists,
    NotContiguous,
    PlanGraphMismatch,
    SchemaError,
    UnassignedVertex,
    UnknownElection,
    UnknownVertex,
)

VertexId = str | int
DistrictId = int
Edge = tuple[VertexId, VertexId]


def vertex_key(vertex: VertexId) -> tuple[int, int, str]:
    """Canonical vertex order: numeric ids numerically, then everything else as text"""
    text = str(vertex)
    if text.isdigit():
        return (0, int(text), text)
    return (1, 0, text)


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[VertexId, ...]
    population: Mapping[VertexId, int]
    edges: tuple[Edge, ...]
    elections: Mapping[str, Election] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "population", MappingProxyType(dict(self.population)))
        object.__setattr__(self, "edges", tuple((u, v) for u, v in self.edges))
        object.__setattr__(self, "elections", MappingProxyType(dict(self.elections)))
        self._validate()

    def _validate(self) -> None:
        if not self.vertices:
            raise SchemaError("Graph has no vertices")

        seen: set[VertexId] = set()
        for position, vertex in enumerate(self.vertices):
            if vertex in seen:
                raise DuplicateVertex(f"Duplicate vertex id {vertex!r} (vertices[{position}])")
            seen.add(vertex)

        # ids are written and hashed as text, so 1 and "1" would be one unit
        spelled: dict[str, VertexId] = {}
        for vertex in self.vertices:
            other = spelled.setdefault(str(vertex), vertex)
            if other != vertex:
                raise DuplicateVertex(f"Vertex ids {other!r} and {vertex!r} are the same id as text")

        for vertex in self.vertices:
            if vertex not in self.population:
                raise SchemaError(f"Vertex {vertex!r} has no population")
            pop = self.population[vertex]
            if not isinstance(pop, int) or isinstance(pop, bool) or pop < 0:
                raise SchemaError(f"Vertex {vertex!r} population must be a nonnegative integer, got {pop!r}")

        pairs: set[frozenset[VertexId]] = set()
        for position, (u, v) in enumerate(self.edges):
            for endpoint in (u, v):
                if endpoint not in seen:
                    raise UnknownVertex(f"Edge {position} ({u!r}, {v!r}) references undeclared vertex {endpoint!r}")
            if u == v:
                raise SchemaError(f"Edge {position} is a self-loop on {u!r}")
            pair = frozenset((u, v))
            if pair in pairs:
                raise SchemaError(f"Edge {position} ({u!r}, {v!r}) is a duplicate")
            pairs.add(pair)

        for name, election in self.elections.items():
            missing = election.missing(self.vertices)
            if missing:
                raise IncompleteElection(f"Election {name} has no votes for vertex {missing[0]!r}")

        if not nx.is_connected(self.network):
            sizes = sorted((len(c) for c in nx.connected_components(self.network)), reverse=True)
            raise DisconnectedGraph(f"Graph has {len(sizes)} components of sizes {sizes}")

    @cached_property
    def network(self) -> nx.Graph:
        """networkx view of the adjacency, nodes and edges in declaration order"""
        network = nx.Graph()
        network.add_nodes_from(self.vertices)
        network.add_edges_from(self.edges)
        return network

    @cached_property
    def index(self) -> Mapping[VertexId, int]:
        return MappingProxyType({v: i for i, v in enumerate(self.vertices)})

    @property
    def total_population(self) -> int:
        return sum(self.population.values())

    def neighbors(self, vertex: VertexId) -> list[VertexId]:
        return list(self.network.neighbors(vertex))

    def election(self, name: str) -> Election:
        if name not in self.elections:
            available = ", ".join(sorted(self.elections)) or "none"
            raise UnknownElection(f"Unknown election {name!r} (available: {available})")
        return self.elections[name]

    def with_election(self, election: Election) -> "DualGraph":
        return replace(self, elections={**self.elections, election.name: election})

    def ordered(self, vertices: Iterable[VertexId]) -> list[VertexId]:
        """Vertices in declaration order (sets iterate in hash order, which varies per process)"""
        return sorted(vertices, key=self.index.__getitem__)

    def check_vertices(self, vertices: Iterable[VertexId]) -> None:
        for vertex in vertices:
            if vertex not in self.index:
                raise UnknownVertex(f"Unknown vertex {vertex!r}")

    def check_plan(self, plan: "Plan") -> None:
        """Fail unless the plan assigns exactly this graph's vertices"""
        for vertex in plan.assignment:
            if vertex not in self.index:
                raise PlanGraphMismatch(f"Plan assigns vertex {vertex!r} which is not in the graph")
        if len(plan.assignment) != len(self.vertices):
            missing = next(v for v in self.vertices if v not in plan.assignment)
            raise UnassignedVertex(f"Plan does not assign vertex {missing!r}")


@dataclass(frozen=True, eq=False)
class Plan:
    assignment: Mapping[VertexId, DistrictId]
    num_districts: int

    def __post_init__(self) -> None:
        if self.num_districts < 1:
            raise InvalidConfig(f"A plan needs at least one district, got {self.num_districts}")
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))
        used = set(self.assignment.values())
        for district in used:
            if not isinstance(district, int) or not 1 <= district <= self.num_districts:
                raise SchemaError(f"District id {district!r} is outside 1..{self.num_districts}")
        if len(used) != self.num_districts:
            empty = min(set(range(1, self.num_districts + 1)) - used)
            raise EmptyDistrict(f"District {empty} has no vertices")

    @classmethod
    def from_districts(cls, districts: Iterable[Iterable[VertexId]]) -> "Plan":
        """Build a plan from vertex groups, labeled 1..n in the given order"""
        assignment: dict[VertexId, DistrictId] = {}
        count = 0
        for count, members in enumerate(districts, start=1):
            for vertex in members:
                assignment[vertex] = count
        return cls(assignment, count)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Plan):
            return NotImplemented
        return self.num_districts == other.num_districts and dict(self.assignment) == dict(other.assignment)

    def __hash__(self) -> int:
        return hash(frozenset(self.assignment.items()))

    def __repr__(self) -> str:
        groups = "; ".join(
            ",".join(str(v) for v in sorted(members, key=vertex_key)) for _, members in sorted(self.districts.items())
        )
        return f"Plan({groups})"

    @cached_property
    def districts(self) -> Mapping[DistrictId, frozenset[VertexId]]:
        groups: dict[DistrictId, set[VertexId]] = {d: set() for d in range(1, self.num_districts + 1)}
        for vertex, district in self.assignment.items():
            groups[district].add(vertex)
        return MappingProxyType({d: frozenset(members) for d, members in groups.items()})

    def partition(self) -> frozenset[frozenset[VertexId]]:
        """The plan with district labels forgotten"""
        return frozenset(self.districts.values())

    def canonical(self) -> "Plan":
        """Relabel districts 1..n in order of their smallest vertex"""
        ordered = sorted(self.districts.values(), key=lambda members: min(vertex_key(v) for v in members))
        return Plan.from_districts(ordered)

    def digest(self) -> str:
        """Label-independent sha256 of the partition"""
        groups = sorted(sorted((str(v) for v in members), key=vertex_key) for members in self.districts.values())
        return hashlib.sha256(json.dumps(groups, separators=(",", ":")).encode()).hexdigest()

    def with_swap(self, u: VertexId, v: VertexId) -> "Plan":
        """Exchange the district assignments of u and v"""
        assignment = dict(self.assignment)
        assignment[u], assignment[v] = self.assignment[v], self.assignment[u]
        return Plan(assignment, self.num_districts)

    def with_districts(self, updates: Mapping[DistrictId, Iterable[VertexId]]) -> "Plan":
        """Reassign the given districts' members, leaving every other district untouched"""
        assignment = dict(self.assignment)
        for district, members in updates.items():
            for vertex in members:
                assignment[vertex] = district
        return Plan(assignment, self.num_districts)


@dataclass(frozen=True)
class NestingSpec:
    """k:1 nesting: every upper-chamber district is k adjacent lower-chamber units"""

    arity: int = 3

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise InvalidConfig(f"Nesting arity must be at least 1, got {self.arity}")

    def num_districts(self, graph: DualGraph) -> int:
        if len(graph.vertices) % self.arity:
            raise NoNestingExists(f"{len(graph.vertices)} vertices cannot be grouped into blocks of {self.arity}")
        return len(graph.vertices) // self.arity


def is_connected(graph: DualGraph, subset: Iterable[VertexId]) -> bool:
    """True iff the subgraph induced on subset is connected"""
    members = list(subset)
    if not members:
        raise InvalidSubset("Connectivity of an empty vertex set is undefined")
    graph.check_vertices(members)
    if len(members) == 1:
        return True
    return nx.is_connected(graph.network.subgraph(members))


def is_contiguous_plan(graph: DualGraph, plan: Plan) -> bool:
    graph.check_plan(plan)
    return all(is_connected(graph, members) for members in plan.districts.values())


def is_k_nested(graph: DualGraph, plan: Plan, nesting: NestingSpec) -> bool:
    graph.check_plan(plan)
    if any(len(members) != nesting.arity for members in plan.districts.values()):
        return False
    return is_contiguous_plan(graph, plan)


def district_populations(graph: DualGraph, plan: Plan) -> dict[DistrictId, int]:
    return {d: sum(graph.population[v] for v in members) for d, members in plan.districts.items()}


def population_deviation(graph: DualGraph, plan: Plan) -> float:
    """Largest relative distance of any district population from the ideal"""
    graph.check_plan(plan)
    total = graph.total_population
    if total == 0:
        raise DegeneratePopulation("Total population is zero")
    ideal = total / plan.num_districts
    return max(abs(pop - ideal) / ideal for pop in district_populations(graph, plan).values())


def cut_edges(graph: DualGraph, plan: Plan) -> list[Edge]:
    """Edges whose endpoints lie in different districts, in graph edge order"""
    assignment = plan.assignment
    return [(u, v) for u, v in graph.edges if assignment[u] != assignment[v]]


def quotient_graph(graph: DualGraph, plan: Plan) -> DualGraph:
    """Collapse each district to one vertex (e.g. the House dual graph of a House plan).

    Quotient vertices are named "1".."n" after the district ids; populations and
    every election's tallies are summed over members.
    """
    if not is_contiguous_plan(graph, plan):
        raise NotContiguous("Cannot take the quotient by a plan with a disconnected district")

    vertices = tuple(str(d) for d in range(1, plan.num_districts + 1))
    population = {str(d): pop for d, pop in district_populations(graph, plan).items()}

    edges: dict[frozenset[str], Edge] = {}
    for u, v in graph.edges:
        du, dv = plan.assignment[u], plan.assignment[v]
        if du != dv:
            pair = (str(min(du, dv)), str(max(du, dv)))
            edges.setdefault(frozenset(pair), pair)

    elections: dict[str, Election] = {}
    for name, election in graph.elections.items():
        a_votes = dict.fromkeys(vertices, 0)
        b_votes = dict.fromkeys(vertices, 0)
        for vertex in graph.vertices:
            district = str(plan.assignment[vertex])
            a_votes[district] += election.party_a_votes[vertex]
            b_votes[district] += election.party_b_votes[vertex]
        elections[name] = Election(name, a_votes, b_votes)

    return DualGraph(vertices, population, tuple(edges.values()), elections)


def rook_grid(rows: int, cols: int) -> DualGraph:
    """Unit-population rook-adjacency grid with row-major ids "1".."rows*cols" """
    if rows < 1 or cols < 1:
        raise InvalidConfig(f"Grid dimensions must be positive, got {rows}x{cols}")
    vertices = tuple(str(r * cols + c + 1) for r in range(rows) for c in range(cols))
    edges: list[Edge] = []
    for r in range(rows):
        for c in range(cols):
            cell = r * cols + c + 1
            if c + 1 < cols:
                edges.append((str(cell), str(cell + 1)))
            if r + 1 < rows:
                edges.append((str(cell), str(cell + cols)))
    return DualGraph(vertices, dict.fromkeys(vertices, 1), tuple(edges))


def path_graph(length: int) -> DualGraph:
    return rook_grid(1, length)


def complete_graph(size: int) -> DualGraph:
    vertices = tuple(str(i) for i in range(1, size + 1))
    edges = tuple((vertices[i], vertices[j]) for i in range(size) for j in range(i + 1, size))
    return DualGraph(vertices, dict.fromkeys(vertices, 1), edges)
