"""Exception types shared across the package.

Grouped by subsystem so the HTTP layer can map them to status codes in
one place.
"""


class MofminerError(Exception):
    """Base class for all package errors."""


# --- processing graph ---------------------------------------------------


class CycleDetected(MofminerError):
    pass


class UnknownDependency(MofminerError):
    pass


class DuplicateNode(MofminerError):
    pass


class ExecutorPanic(MofminerError):
    """Internal invariant violated while executing a graph (a bug, not a
    recoverable node failure)."""


# --- gateway ------------------------------------------------------------


class UnknownTemplate(MofminerError):
    pass


class ProviderUnavailable(MofminerError):
    pass


class FixtureMissing(MofminerError):
    def __init__(self, key: str):
        super().__init__(f"no recorded reply for fixture key {key}")
        self.key = key


class SchemaViolation(MofminerError):
    """Model reply failed schema validation even after the repair retry.

    Carries the raw reply text so callers can degrade gracefully.
    """

    def __init__(self, message: str, raw_text: str = "", response=None):
        super().__init__(message)
        self.raw_text = raw_text
        self.response = response


class UnknownModelPrice(MofminerError):
    pass


# --- ingest -------------------------------------------------------------


class MalformedDoi(MofminerError):
    pass


class NotInCorpus(MofminerError):
    pass


class FetchFailed(MofminerError):
    pass


# --- crystal matching ---------------------------------------------------


class UnparseableFormula(MofminerError):
    pass


class UnparseableNumber(MofminerError):
    pass


class NoComparableFields(MofminerError):
    pass


class EmptyFormula(MofminerError):
    pass


# --- assembly -----------------------------------------------------------


class NoParagraphForCompound(MofminerError):
    pass


class MissingIdentifier(MofminerError):
    pass


# --- dataset ------------------------------------------------------------


class UnreadableFile(MofminerError):
    pass


class UnknownProperty(MofminerError):
    pass


class EmptyStore(MofminerError):
    pass


class MissingCellBlock(MofminerError):
    pass


class MalformedLoop(MofminerError):
    pass


# --- query engine -------------------------------------------------------


class ContextUnavailable(MofminerError):
    pass


class UnknownMaterial(MofminerError):
    pass


# --- evaluation ---------------------------------------------------------


class EmbedderFailure(MofminerError):
    pass


class ZeroMask(MofminerError):
    pass
