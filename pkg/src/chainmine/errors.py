"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class ChainMineError(Exception):
    """Base class for all package errors."""


# --- graph store ---------------------------------------------------------


class AliasConflict(ChainMineError):
    """An alias is claimed by two live entities (signals a missed merge)."""

    def __init__(self, alias: str, owner_a: str, owner_b: str):
        super().__init__(f"alias {alias!r} owned by both {owner_a} and {owner_b}")
        self.alias = alias
        self.owners = (owner_a, owner_b)


class UnknownEntity(ChainMineError):
    pass


class UnknownRelation(ChainMineError):
    pass


class EndpointKindMismatch(ChainMineError):
    pass


class KindMismatch(ChainMineError):
    pass


class SelfMerge(ChainMineError):
    pass


class AlreadyMerged(ChainMineError):
    pass


class SchemaVersionMismatch(ChainMineError):
    pass


class CorruptSnapshot(ChainMineError):
    pass


# --- harvest --------------------------------------------------------------


class EmptySeedFile(ChainMineError):
    pass


class SeedParseError(ChainMineError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class EmptyTemplateSet(ChainMineError):
    pass


class ProviderError(ChainMineError):
    """External provider failure (network, auth, rate limit)."""

    def __init__(self, message: str, *, retryable: bool = False, status: int | None = None):
        super().__init__(message)
        self.retryable = retryable
        self.status = status


class CassetteMiss(ChainMineError):
    """Replay mode was asked for a request that was never recorded."""


class FetchDenied(ChainMineError):
    pass


class FetchFailed(ChainMineError):
    pass


class TooLarge(ChainMineError):
    pass


class UnsupportedContentType(ChainMineError):
    pass


class EmptyAfterCleaning(ChainMineError):
    pass


class StorageFailure(ChainMineError):
    pass


# --- extraction -----------------------------------------------------------


class ContextBudgetExceeded(ChainMineError):
    pass


class MalformedOutput(ChainMineError):
    """Provider output failed schema validation after all repair retries."""


# --- resolution / review --------------------------------------------------


class UnknownPair(ChainMineError):
    pass


class StaleState(ChainMineError):
    pass


# --- orchestrator ---------------------------------------------------------


class ConfigHashMismatch(ChainMineError):
    pass


class CorruptCheckpoint(ChainMineError):
    pass


class BudgetExhausted(ChainMineError):
    def __init__(self, budget: str):
        super().__init__(f"budget exhausted: {budget}")
        self.budget = budget


# --- analytics ------------------------------------------------------------


class EmptyGraph(ChainMineError):
    pass


class DivisionUndefined(ChainMineError):
    pass


class UnsupportedFormat(ChainMineError):
    pass
