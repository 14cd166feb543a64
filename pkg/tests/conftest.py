"""Shared toy instances: rook grids, paths, the triangle and a toy election."""

import json
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path

import pytest

from nested_ensembles.elections import Election
from nested_ensembles.graph import DualGraph, Plan, complete_graph, path_graph, quotient_graph, rook_grid
from nested_ensembles.io import save_graph, save_plan


def blocks(groups: Iterable[Sequence[int]]) -> Plan:
    return Plan.from_districts([[str(v) for v in group] for group in groups])


@pytest.fixture
def grid3x3() -> DualGraph:
    return rook_grid(3, 3)


@pytest.fixture
def grid2x3() -> DualGraph:
    return rook_grid(2, 3)


@pytest.fixture
def grid6x6() -> DualGraph:
    return rook_grid(6, 6)


@pytest.fixture
def path6() -> DualGraph:
    return path_graph(6)


@pytest.fixture
def triangle() -> DualGraph:
    return complete_graph(3)


@pytest.fixture
def row_plan() -> Plan:
    return blocks([(1, 2, 3), (4, 5, 6), (7, 8, 9)])


@pytest.fixture
def column_plan() -> Plan:
    return blocks([(1, 4, 7), (2, 5, 8), (3, 6, 9)])


@pytest.fixture
def toy_graph(grid3x3: DualGraph) -> DualGraph:
    """3x3 grid: the top row votes 3-0 for party a, every other cell 0-1"""
    a_votes = {v: 3 if v in ("1", "2", "3") else 0 for v in grid3x3.vertices}
    b_votes = {v: 0 if v in ("1", "2", "3") else 1 for v in grid3x3.vertices}
    return grid3x3.with_election(Election("TOY", a_votes, b_votes))


@pytest.fixture
def half_row_plan() -> Plan:
    """6x6 House plan: every row split into a left and a right triple"""
    groups = []
    for row in range(6):
        first = row * 6 + 1
        groups.append(range(first, first + 3))
        groups.append(range(first + 3, first + 6))
    return blocks(groups)


@pytest.fixture
def house_graph(grid6x6: DualGraph, half_row_plan: Plan) -> DualGraph:
    """12 House districts forming a 2x6 ladder; left triples lean a (2-1), right triples vote b (0-3)"""
    ladder = quotient_graph(grid6x6, half_row_plan)
    a_votes = {v: 2 if int(v) % 2 else 0 for v in ladder.vertices}
    b_votes = {v: 1 if int(v) % 2 else 3 for v in ladder.vertices}
    return ladder.with_election(Election("TOY", a_votes, b_votes))


@pytest.fixture
def split_graph(grid6x6: DualGraph) -> DualGraph:
    """6x6 grid, one voter per cell: the left three columns vote a, the right three b"""
    left = {v: int((int(v) - 1) % 6 < 3) for v in grid6x6.vertices}
    return grid6x6.with_election(Election("SPLIT", left, {v: 1 - n for v, n in left.items()}))


@pytest.fixture
def row_pair_plan() -> Plan:
    """6x6 plan of three districts, two rows each"""
    return blocks([range(1, 13), range(13, 25), range(25, 37)])


@pytest.fixture
def write_graph(tmp_path: Path) -> Callable[[DualGraph, str], Path]:
    def write(graph: DualGraph, name: str = "graph.json") -> Path:
        path = tmp_path / name
        save_graph(graph, path)
        return path

    return write


@pytest.fixture
def write_plan(tmp_path: Path) -> Callable[[Plan, str], Path]:
    def write(plan: Plan, name: str = "plan.csv") -> Path:
        path = tmp_path / name
        save_plan(plan, path)
        return path

    return write


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[object, str], Path]:
    def write(document: object, name: str = "doc.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write
