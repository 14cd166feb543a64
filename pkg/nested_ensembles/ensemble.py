"""
Per-step ensemble records and the statistic observers that fill them.
"""

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

from .elections import Election, Party, ranked_shares, seats_won, tally
from .errors import SchemaError
from .graph import DualGraph, Plan, cut_edges

Observer = Callable[[DualGraph, Plan], Mapping[str, Any]]


@dataclass(frozen=True)
class EnsembleRecord:
    step: int
    plan_digest: str
    stats: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "stats", MappingProxyType(dict(self.stats)))

    def stat(self, name: str) -> Any:
        if name not in self.stats:
            available = ", ".join(sorted(self.stats)) or "none"
            raise SchemaError(f"Step {self.step} has no statistic {name!r} (recorded: {available})")
        return self.stats[name]

    @property
    def seats_a(self) -> int:
        return self.stat("seats_a")

    @property
    def ranked_shares_a(self) -> tuple[float, ...]:
        return tuple(self.stat("ranked_shares_a"))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"step": self.step}
        for name, value in self.stats.items():
            data[name] = list(value) if isinstance(value, tuple) else value
        data["plan_digest"] = self.plan_digest
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EnsembleRecord":
        if not isinstance(data, Mapping):
            raise SchemaError(f"Ensemble record must be an object, got {type(data).__name__}")
        if "step" not in data or "plan_digest" not in data:
            raise SchemaError("Ensemble record needs 'step' and 'plan_digest'")
        step = data["step"]
        if not isinstance(step, int) or isinstance(step, bool):
            raise SchemaError(f"Ensemble record step must be an integer, got {step!r}")
        stats = {
            name: tuple(value) if isinstance(value, list) else value
            for name, value in data.items()
            if name not in ("step", "plan_digest")
        }
        return cls(step, str(data["plan_digest"]), stats)


def election_observer(election: Election) -> Observer:
    """Seats for both parties and party a's ranked shares under one election"""

    def observe(graph: DualGraph, plan: Plan) -> dict[str, Any]:
        district_tally = tally(graph, plan, election)
        return {
            "seats_a": seats_won(district_tally, Party.A),
            "seats_b": seats_won(district_tally, Party.B),
            "ranked_shares_a": tuple(ranked_shares(district_tally, Party.A)),
        }

    return observe


def cut_edge_observer(graph: DualGraph, plan: Plan) -> dict[str, Any]:
    return {"cut_edges": len(cut_edges(graph, plan))}


def observe(step: int, graph: DualGraph, plan: Plan, observers: Iterable[Observer]) -> EnsembleRecord:
    stats: dict[str, Any] = {}
    for observer in observers:
        stats.update(observer(graph, plan))
    return EnsembleRecord(step, plan.digest(), stats)
