"""
Exception hierarchy.

Every failure raised by the library is a NestingError carrying a
machine-readable ``category`` that the CLI echoes in ``--json`` mode.
"""

from typing import ClassVar


class NestingError(Exception):
    """Base class for all library errors"""

    category: ClassVar[str] = "error"


# Input data
class SchemaError(NestingError):
    category = "schema-error"


class ConfigError(NestingError):
    category = "config-error"


class InvalidConfig(NestingError):
    category = "invalid-config"


class DuplicateVertex(NestingError):
    category = "duplicate-vertex"


class UnknownVertex(NestingError):
    category = "unknown-vertex"


class DisconnectedGraph(NestingError):
    category = "disconnected-graph"


class InvalidSubset(NestingError):
    category = "invalid-subset"


# Plans
class PlanGraphMismatch(NestingError):
    category = "plan-graph-mismatch"


class UnassignedVertex(PlanGraphMismatch):
    category = "unassigned-vertex"


class EmptyDistrict(NestingError):
    category = "empty-district"


class NotContiguous(NestingError):
    category = "not-contiguous"


class NotConnected(NestingError):
    category = "not-connected"


class DegeneratePopulation(NestingError):
    category = "degenerate-population"


class DegeneratePlan(NestingError):
    category = "degenerate-plan"


# Elections
class UnknownElection(NestingError):
    category = "unknown-election"


class IncompleteElection(NestingError):
    category = "incomplete-election"


class ZeroVoteDistrict(NestingError):
    category = "zero-vote-district"


class DegenerateElection(NestingError):
    category = "degenerate-election"


# Chains
class InvalidSeed(NestingError):
    category = "invalid-seed"


class StuckChain(NestingError):
    category = "stuck-chain"


class StepFailed(NestingError):
    category = "step-failed"

    def __init__(self, message: str, attempts: int = 0) -> None:
        super().__init__(message)
        self.attempts = attempts


class SeedGenerationFailed(NestingError):
    category = "seed-generation-failed"


# Diagnostics
class DegenerateSeries(NestingError):
    category = "degenerate-series"


class SeriesTooShort(NestingError):
    category = "series-too-short"


class EmptyEnsemble(NestingError):
    category = "empty-ensemble"


# Enumeration
class TooLarge(NestingError):
    category = "too-large"


class NoPartitionExists(NestingError):
    category = "no-partition-exists"


class NoNestingExists(NoPartitionExists):
    category = "no-nesting-exists"
