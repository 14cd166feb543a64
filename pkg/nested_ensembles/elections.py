"""
Two-party election tallies.

Votes are stored as raw per-vertex counts; shares are always derived from the
two-party total, so published shares that do not add up to 100% never need
to be reconciled here.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from types import MappingProxyType
from typing import TYPE_CHECKING

from .errors import DegenerateElection, IncompleteElection, SchemaError, ZeroVoteDistrict
from .rng import seeded_rng

if TYPE_CHECKING:
    from .graph import DistrictId, DualGraph, Plan, VertexId


class Party(StrEnum):
    """Party a is conventionally Democratic, party b Republican"""

    A = "a"
    B = "b"

    @property
    def other(self) -> Party:
        return Party.B if self is Party.A else Party.A


@dataclass(frozen=True)
class Election:
    name: str
    party_a_votes: Mapping[VertexId, int]
    party_b_votes: Mapping[VertexId, int]

    def __post_init__(self) -> None:
        for party, votes in ((Party.A, self.party_a_votes), (Party.B, self.party_b_votes)):
            for vertex, count in votes.items():
                if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                    raise SchemaError(
                        f"Election {self.name}: party {party} votes for vertex {vertex!r} must be a "
                        f"nonnegative integer, got {count!r}"
                    )
        object.__setattr__(self, "party_a_votes", MappingProxyType(dict(self.party_a_votes)))
        object.__setattr__(self, "party_b_votes", MappingProxyType(dict(self.party_b_votes)))

    def votes(self, party: Party) -> Mapping[VertexId, int]:
        return self.party_a_votes if party is Party.A else self.party_b_votes

    def missing(self, vertices: Iterable[VertexId]) -> list[VertexId]:
        """Vertices lacking an entry for either party"""
        return [v for v in vertices if v not in self.party_a_votes or v not in self.party_b_votes]

    def mirrored(self) -> Election:
        """Same contest with the party columns exchanged"""
        return Election(self.name, self.party_b_votes, self.party_a_votes)


@dataclass(frozen=True)
class DistrictTally:
    """Per-district (party a, party b) vote totals"""

    totals: Mapping[DistrictId, tuple[int, int]]

    def __len__(self) -> int:
        return len(self.totals)

    def party_total(self, district: DistrictId, party: Party) -> int:
        a_total, b_total = self.totals[district]
        return a_total if party is Party.A else b_total


def tally(graph: DualGraph, plan: Plan, election: Election) -> DistrictTally:
    """Sum each party's votes per district"""
    missing = election.missing(graph.vertices)
    if missing:
        preview = ", ".join(repr(v) for v in missing[:5])
        raise IncompleteElection(f"Election {election.name} has no votes for {len(missing)} vertices: {preview}")
    graph.check_plan(plan)

    a_totals = dict.fromkeys(range(1, plan.num_districts + 1), 0)
    b_totals = dict.fromkeys(range(1, plan.num_districts + 1), 0)
    for vertex in graph.vertices:
        district = plan.assignment[vertex]
        a_totals[district] += election.party_a_votes[vertex]
        b_totals[district] += election.party_b_votes[vertex]

    return DistrictTally(MappingProxyType({d: (a_totals[d], b_totals[d]) for d in a_totals}))


def seats_won(district_tally: DistrictTally, party: Party) -> int:
    """Districts where the party strictly outpolls the other; ties go to neither"""
    return sum(
        district_tally.party_total(d, party) > district_tally.party_total(d, party.other) for d in district_tally.totals
    )


def ranked_shares(district_tally: DistrictTally, party: Party) -> list[float]:
    """Two-party vote share of each district for the party, ascending"""
    shares: list[float] = []
    for district, (a_total, b_total) in district_tally.totals.items():
        total = a_total + b_total
        if total == 0:
            raise ZeroVoteDistrict(f"District {district} has no two-party votes")
        shares.append(district_tally.party_total(district, party) / total)
    return sorted(shares)


def statewide_share(graph: DualGraph, election: Election, party: Party) -> float:
    missing = election.missing(graph.vertices)
    if missing:
        raise IncompleteElection(f"Election {election.name} has no votes for vertex {missing[0]!r}")
    own = sum(election.votes(party)[v] for v in graph.vertices)
    other = sum(election.votes(party.other)[v] for v in graph.vertices)
    if own + other == 0:
        raise DegenerateElection(f"Election {election.name} has no two-party votes")
    return own / (own + other)


def random_voter_election(
    vertices: Iterable[VertexId],
    name: str,
    rng_seed: int,
    share_a: float = 0.5,
) -> Election:
    """One voter per vertex, each voting for party a with probability share_a.

    Mirrors the toy grid where every cell is a single voter of one of two parties.
    """
    rng = seeded_rng(rng_seed)
    a_votes: dict[VertexId, int] = {}
    b_votes: dict[VertexId, int] = {}
    for vertex in vertices:
        votes_a = rng.random() < share_a
        a_votes[vertex] = int(votes_a)
        b_votes[vertex] = int(not votes_a)
    return Election(name, a_votes, b_votes)
