import networkx as nx
import pytest
from conftest import blocks

from nested_ensembles.elections import Election, Party, random_voter_election
from nested_ensembles.errors import (
    DisconnectedGraph,
    DuplicateVertex,
    EmptyDistrict,
    InvalidSubset,
    NoNestingExists,
    NotContiguous,
    PlanGraphMismatch,
    SchemaError,
    UnassignedVertex,
    UnknownVertex,
)
from nested_ensembles.graph import (
    DualGraph,
    NestingSpec,
    Plan,
    cut_edges,
    district_populations,
    is_connected,
    is_contiguous_plan,
    is_k_nested,
    population_deviation,
    quotient_graph,
    rook_grid,
    vertex_key,
)
from nested_ensembles.seeds import random_recom_seed


class TestDualGraph:
    def test_rook_grid_shape(self, grid3x3):
        assert grid3x3.vertices == tuple(str(i) for i in range(1, 10))
        assert len(grid3x3.edges) == 12
        assert grid3x3.total_population == 9
        assert sorted(grid3x3.neighbors("5"), key=vertex_key) == ["2", "4", "6", "8"]

    def test_duplicate_vertex(self):
        with pytest.raises(DuplicateVertex, match="'a'"):
            DualGraph(("a", "b", "a"), {"a": 1, "b": 1}, (("a", "b"),))

    def test_edge_to_undeclared_vertex(self):
        with pytest.raises(UnknownVertex, match="'z'"):
            DualGraph(("a", "b"), {"a": 1, "b": 1}, (("a", "z"),))

    def test_disconnected_graph_lists_component_sizes(self):
        with pytest.raises(DisconnectedGraph, match=r"\[2, 1\]"):
            DualGraph(("a", "b", "c"), {"a": 1, "b": 1, "c": 1}, (("a", "b"),))

    @pytest.mark.parametrize(
        "edges",
        [(("a", "a"),), (("a", "b"), ("b", "a"))],
        ids=["self-loop", "duplicate"],
    )
    def test_bad_edges(self, edges):
        with pytest.raises(SchemaError):
            DualGraph(("a", "b"), {"a": 1, "b": 1}, edges)

    def test_negative_population(self):
        with pytest.raises(SchemaError, match="population"):
            DualGraph(("a",), {"a": -1}, ())

    def test_single_vertex_graph_is_connected(self):
        graph = DualGraph(("a",), {"a": 4}, ())
        assert is_connected(graph, ["a"])

    def test_ordered_follows_declaration(self):
        graph = DualGraph(("b", "a", "c"), {"a": 1, "b": 1, "c": 1}, (("a", "b"), ("b", "c")))
        assert graph.ordered({"a", "b", "c"}) == ["b", "a", "c"]


class TestPlan:
    def test_empty_district_rejected(self):
        with pytest.raises(EmptyDistrict):
            Plan({"1": 1, "2": 1}, 2)

    def test_district_id_out_of_range(self):
        with pytest.raises(SchemaError):
            Plan({"1": 1, "2": 3}, 2)

    def test_canonical_and_digest_ignore_labels(self, row_plan):
        relabeled = blocks([(7, 8, 9), (1, 2, 3), (4, 5, 6)])
        assert relabeled != row_plan
        assert relabeled.canonical() == row_plan
        assert relabeled.digest() == row_plan.digest()
        assert relabeled.partition() == row_plan.partition()

    def test_digest_distinguishes_partitions(self, row_plan, column_plan):
        assert row_plan.digest() != column_plan.digest()

    def test_with_swap(self, row_plan):
        swapped = row_plan.with_swap("3", "4")
        assert swapped.districts[1] == frozenset({"1", "2", "4"})
        assert swapped.districts[2] == frozenset({"3", "5", "6"})
        assert swapped.with_swap("3", "4") == row_plan

    def test_plan_graph_mismatch(self, grid3x3):
        with pytest.raises(UnassignedVertex, match="'9'"):
            grid3x3.check_plan(blocks([(1, 2, 3), (4, 5, 6), (7, 8)]))
        with pytest.raises(PlanGraphMismatch):
            grid3x3.check_plan(blocks([(1, 2, 3), (4, 5, 6), (7, 8, 9, 10)]))


class TestPredicates:
    def test_is_connected(self, grid3x3):
        assert is_connected(grid3x3, ["1", "2", "5"])
        assert not is_connected(grid3x3, ["1", "3"])

    def test_is_connected_empty(self, grid3x3):
        with pytest.raises(InvalidSubset):
            is_connected(grid3x3, [])

    def test_is_connected_unknown_vertex(self, grid3x3):
        with pytest.raises(UnknownVertex):
            is_connected(grid3x3, ["1", "99"])

    def test_is_k_nested(self, grid3x3, row_plan):
        assert is_k_nested(grid3x3, row_plan, NestingSpec(3))
        scattered = blocks([(1, 3, 5), (2, 4, 6), (7, 8, 9)])
        assert not is_contiguous_plan(grid3x3, scattered)
        assert not is_k_nested(grid3x3, scattered, NestingSpec(3))

    def test_wrong_sizes_are_not_nested(self, grid3x3):
        plan = blocks([(1, 2), (3, 6, 9), (4, 5, 7, 8)])
        assert is_contiguous_plan(grid3x3, plan)
        assert not is_k_nested(grid3x3, plan, NestingSpec(3))

    def test_nesting_arithmetic(self, grid3x3):
        assert NestingSpec(3).num_districts(grid3x3) == 3
        with pytest.raises(NoNestingExists):
            NestingSpec(2).num_districts(grid3x3)

    def test_population_deviation(self, grid3x3):
        plan = blocks([(1, 2), (3, 6, 9), (4, 5, 7, 8)])
        assert district_populations(grid3x3, plan) == {1: 2, 2: 3, 3: 4}
        assert population_deviation(grid3x3, plan) == pytest.approx(1 / 3)

    def test_cut_edges(self, grid3x3, row_plan):
        assert cut_edges(grid3x3, row_plan) == [
            ("1", "4"),
            ("2", "5"),
            ("3", "6"),
            ("4", "7"),
            ("5", "8"),
            ("6", "9"),
        ]


class TestQuotientGraph:
    def test_half_rows_give_a_ladder(self, grid6x6, half_row_plan):
        ladder = quotient_graph(grid6x6, half_row_plan)
        assert ladder.vertices == tuple(str(i) for i in range(1, 13))
        assert len(ladder.edges) == 16
        assert set(ladder.population.values()) == {3}
        assert set(ladder.neighbors("3")) == {"1", "4", "5"}

    def test_elections_are_summed(self, toy_graph, row_plan):
        house = quotient_graph(toy_graph, row_plan)
        election = house.election("TOY")
        assert dict(election.party_a_votes) == {"1": 9, "2": 0, "3": 0}
        assert dict(election.party_b_votes) == {"1": 0, "2": 3, "3": 3}

    def test_rejects_noncontiguous_plan(self, grid3x3):
        with pytest.raises(NotContiguous):
            quotient_graph(grid3x3, blocks([(1, 3, 5), (2, 4, 6), (7, 8, 9)]))

    def test_quotient_is_a_valid_graph(self):
        grid = rook_grid(2, 2).with_election(Election("E", dict.fromkeys("1234", 1), dict.fromkeys("1234", 0)))
        collapsed = quotient_graph(grid, blocks([(1, 2), (3, 4)]))
        assert collapsed.edges == (("1", "2"),)
        assert collapsed.total_population == 4


def test_vertex_key_orders_numbers_numerically():
    assert sorted(["10", "9", "b", "1", "a"], key=vertex_key) == ["1", "9", "10", "a", "b"]


def test_ids_that_collide_as_text_are_rejected():
    with pytest.raises(DuplicateVertex, match="same id as text"):
        DualGraph((1, "1"), {1: 1, "1": 1}, ((1, "1"),))


def test_population_deviation_ignores_district_labels(grid3x3):
    plan = blocks([(1, 2), (3, 6, 9), (4, 5, 7, 8)])
    relabeled = blocks([(4, 5, 7, 8), (1, 2), (3, 6, 9)])
    assert population_deviation(grid3x3, relabeled) == population_deviation(grid3x3, plan)


class TestQuotientProperties:
    def test_row_plan_collapses_to_a_path(self, grid3x3, row_plan):
        collapsed = quotient_graph(grid3x3, row_plan)
        assert collapsed.vertices == ("1", "2", "3")
        assert {frozenset(edge) for edge in collapsed.edges} == {frozenset({"1", "2"}), frozenset({"2", "3"})}

    @pytest.mark.parametrize("rng_seed", range(5))
    def test_conserves_population_and_votes(self, grid6x6, rng_seed):
        voters = grid6x6.with_election(random_voter_election(grid6x6.vertices, "V", rng_seed=rng_seed))
        plan = random_recom_seed(voters, 3, epsilon=0.1, rng_seed=rng_seed)
        collapsed = quotient_graph(voters, plan)
        assert nx.is_connected(collapsed.network)
        assert collapsed.total_population == voters.total_population
        for party in Party:
            before = voters.election("V").votes(party)
            after = collapsed.election("V").votes(party)
            assert sum(after.values()) == sum(before.values())
            for district, members in plan.districts.items():
                assert after[str(district)] == sum(before[v] for v in members)
