"""
File formats.

- Graph: one JSON document
  ``{"vertices": [{"id", "pop", "votes": {ELECTION: {"A", "B"}}}], "edges": [[u, v]]}``.
  Vote columns other than A and B (third parties, write-ins) are dropped.
- Plan: CSV with header ``unit_id,district``.
- Ensemble: JSON lines, one EnsembleRecord per line.
- Tables (histograms, curves, rank summaries): CSV.
- Manifest: JSON next to every output, ``<output>.manifest.json``.

Every write goes to a temporary file in the target directory and is renamed
into place.
"""

import hashlib
import json
import logging
import os
import tempfile
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from datetime import UTC, datetime
from pathlib import Path
from typing import IO, Any

import pandas as pd

from . import __version__
from .elections import Election
from .ensemble import EnsembleRecord
from .errors import DuplicateVertex, EmptyDistrict, SchemaError, UnassignedVertex, UnknownVertex
from .graph import DualGraph, Plan, VertexId, vertex_key

log = logging.getLogger(__name__)

PARTY_COLUMNS = ("A", "B")


@contextmanager
def atomic_write(path: str | Path) -> Iterator[IO[str]]:
    """Write a text file via a sibling temp file renamed into place"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", dir=target.parent, prefix=f".{target.name}.", suffix=".tmp", delete=False, newline="", encoding="utf-8"
    )
    try:
        with handle:
            yield handle
        os.replace(handle.name, target)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as file:
        for chunk in iter(lambda: file.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _is_count(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def parse_graph(document: Any, source: str = "<graph>") -> DualGraph:
    _require(isinstance(document, dict), f"{source}: top level must be an object")
    _require(isinstance(document.get("vertices"), list), f"{source}: 'vertices' must be a list")
    _require(isinstance(document.get("edges"), list), f"{source}: 'edges' must be a list")

    vertices: list[VertexId] = []
    population: dict[VertexId, int] = {}
    votes: dict[str, dict[str, dict[VertexId, int]]] = {}
    seen: set[VertexId] = set()

    for position, entry in enumerate(document["vertices"]):
        where = f"{source}: vertices[{position}]"
        _require(isinstance(entry, dict), f"{where} must be an object")
        vertex = entry.get("id")
        _require(
            isinstance(vertex, str | int) and not isinstance(vertex, bool),
            f"{where}: 'id' must be a string or integer",
        )
        if vertex in seen:
            raise DuplicateVertex(f"{where}: duplicate vertex id {vertex!r}")
        seen.add(vertex)
        _require(_is_count(entry.get("pop")), f"{where} ({vertex!r}): 'pop' must be a nonnegative integer")
        vertices.append(vertex)
        population[vertex] = entry["pop"]

        tallies = entry.get("votes", {})
        _require(isinstance(tallies, dict), f"{where} ({vertex!r}): 'votes' must be an object")
        for name, columns in tallies.items():
            _require(isinstance(columns, dict), f"{where} ({vertex!r}): votes for {name!r} must be an object")
            for party in PARTY_COLUMNS:
                _require(
                    _is_count(columns.get(party)),
                    f"{where} ({vertex!r}): votes[{name!r}][{party!r}] must be a nonnegative integer",
                )
                votes.setdefault(name, {p: {} for p in PARTY_COLUMNS})[party][vertex] = columns[party]
            dropped = set(columns) - set(PARTY_COLUMNS)
            if dropped:
                log.debug("%s: dropping non-two-party columns %s from %s", where, sorted(dropped), name)

    edges: list[tuple[VertexId, VertexId]] = []
    for position, pair in enumerate(document["edges"]):
        where = f"{source}: edges[{position}]"
        _require(isinstance(pair, list) and len(pair) == 2, f"{where} must be a two-element list")
        for endpoint in pair:
            _require(
                isinstance(endpoint, str | int) and not isinstance(endpoint, bool),
                f"{where}: endpoint {endpoint!r} must be a vertex id",
            )
            if endpoint not in seen:
                raise UnknownVertex(f"{where}: undeclared vertex {endpoint!r}")
        edges.append((pair[0], pair[1]))

    elections = {name: Election(name, columns["A"], columns["B"]) for name, columns in votes.items()}
    return DualGraph(tuple(vertices), population, tuple(edges), elections)


def load_graph(path: str | Path) -> DualGraph:
    try:
        with open(path, encoding="utf-8") as file:
            document = json.load(file)
    except json.JSONDecodeError as error:
        raise SchemaError(f"{path}: invalid JSON at line {error.lineno} column {error.colno}: {error.msg}") from error
    except UnicodeDecodeError as error:
        raise SchemaError(f"{path}: not UTF-8 text (byte {error.start})") from error
    return parse_graph(document, str(path))


def graph_document(graph: DualGraph) -> dict[str, Any]:
    vertices = []
    for vertex in graph.vertices:
        entry: dict[str, Any] = {"id": vertex, "pop": graph.population[vertex]}
        if graph.elections:
            entry["votes"] = {
                name: {"A": election.party_a_votes[vertex], "B": election.party_b_votes[vertex]}
                for name, election in graph.elections.items()
            }
        vertices.append(entry)
    return {"vertices": vertices, "edges": [[u, v] for u, v in graph.edges]}


def save_graph(graph: DualGraph, path: str | Path) -> None:
    with atomic_write(path) as file:
        json.dump(graph_document(graph), file, indent=2)
        file.write("\n")


def load_plan(path: str | Path, graph: DualGraph, num_districts: int | None = None) -> Plan:
    """Read a unit_id,district CSV; gaps in district ids are closed up with a warning"""
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise SchemaError(f"{path}: unreadable plan CSV: {error}") from error
    except UnicodeDecodeError as error:
        raise SchemaError(f"{path}: not UTF-8 text (byte {error.start})") from error
    for column in ("unit_id", "district"):
        _require(column in table.columns, f"{path}: missing column {column!r}")

    by_name = {str(v): v for v in graph.vertices}
    raw: dict[VertexId, int] = {}
    for row, (unit, district) in enumerate(zip(table["unit_id"], table["district"], strict=True), start=2):
        if unit not in by_name:
            raise UnknownVertex(f"{path}:{row}: unknown vertex {unit!r}")
        vertex = by_name[unit]
        if vertex in raw:
            raise DuplicateVertex(f"{path}:{row}: vertex {unit!r} assigned twice")
        _require(district.strip().isdigit(), f"{path}:{row}: district {district!r} is not a positive integer")
        raw[vertex] = int(district)

    missing = [v for v in graph.vertices if v not in raw]
    if missing:
        raise UnassignedVertex(f"{path}: vertex {missing[0]!r} is not assigned ({len(missing)} unassigned)")

    labels = sorted(set(raw.values()))
    if num_districts is not None and len(labels) < num_districts:
        raise EmptyDistrict(f"{path}: expected {num_districts} districts, found {len(labels)}")
    if labels != list(range(1, len(labels) + 1)):
        log.warning("%s: district ids %s relabeled to 1..%d", path, labels, len(labels))
    dense = {label: i for i, label in enumerate(labels, start=1)}
    return Plan({v: dense[d] for v, d in raw.items()}, len(labels))


def plan_table(plan: Plan, graph: DualGraph | None = None) -> pd.DataFrame:
    vertices = graph.vertices if graph is not None else sorted(plan.assignment, key=vertex_key)
    return pd.DataFrame({"unit_id": [str(v) for v in vertices], "district": [plan.assignment[v] for v in vertices]})


def save_plan(plan: Plan, path: str | Path, graph: DualGraph | None = None) -> None:
    write_table(plan_table(plan, graph), path)


def write_table(table: pd.DataFrame, path: str | Path) -> None:
    with atomic_write(path) as file:
        table.to_csv(file, index=False, lineterminator="\n")


def write_ensemble(records: Iterable[EnsembleRecord], path: str | Path) -> int:
    count = 0
    with atomic_write(path) as file:
        for record in records:
            file.write(json.dumps(record.to_dict(), separators=(",", ":")))
            file.write("\n")
            count += 1
    return count


def read_ensemble(path: str | Path) -> list[EnsembleRecord]:
    records: list[EnsembleRecord] = []
    try:
        with open(path, encoding="utf-8") as file:
            lines = file.readlines()
    except UnicodeDecodeError as error:
        raise SchemaError(f"{path}: not UTF-8 text (byte {error.start})") from error
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(EnsembleRecord.from_dict(json.loads(line)))
        except json.JSONDecodeError as error:
            raise SchemaError(f"{path}:{line_number}: invalid JSON: {error.msg}") from error
        except SchemaError as error:
            raise SchemaError(f"{path}:{line_number}: {error}") from error
    return records


@dataclass
class RunManifest:
    command: str
    config: dict[str, Any]
    rng_seeds: list[int] = field(default_factory=list)
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    version: str = __version__
    created: str = field(default_factory=lambda: datetime.now(UTC).isoformat(timespec="seconds"))

    def add_input(self, path: str | Path) -> None:
        self.inputs[str(path)] = file_digest(path)

    def write(self, output: str | Path) -> Path:
        """Write alongside output as <output>.manifest.json"""
        self.outputs.append(str(output))
        target = Path(f"{output}.manifest.json")
        with atomic_write(target) as file:
            json.dump(asdict(self), file, indent=2, sort_keys=True)
            file.write("\n")
        return target
