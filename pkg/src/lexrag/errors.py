"""Exception types shared across the package.

Every operation raises one of these rather than a bare ValueError so that
callers (service handlers, CLI) can map failures to stable status codes.
"""

from __future__ import annotations


class LexragError(Exception):
    """Base class for all package errors."""


# --- corpus ---------------------------------------------------------------

class CorpusError(LexragError):
    pass


class MissingFieldError(CorpusError):
    def __init__(self, field: str):
        super().__init__(f"missing required field: {field}")
        self.field = field


class EmptyBodyError(CorpusError):
    pass


class InvalidKindError(CorpusError):
    pass


class UserDocWithoutOwnerError(CorpusError):
    pass


class InvalidYearRangeError(CorpusError):
    pass


# --- vector ---------------------------------------------------------------

class VectorError(LexragError):
    pass


class EmptyTextError(VectorError):
    pass


class DimensionMismatchError(VectorError):
    pass


class ZeroVectorError(VectorError):
    pass


class EmptyIndexError(VectorError):
    pass


class CorruptFileError(VectorError):
    pass


class DimensionZeroError(VectorError):
    pass


# --- rerank / answer ------------------------------------------------------

class UnresolvableChunkError(LexragError):
    pass


class EmptyQueryError(LexragError):
    pass


class EmptyContextError(LexragError):
    pass


class MissingAttachmentError(LexragError):
    pass


class ProviderUnavailableError(LexragError):
    """A configured embedding/rerank/generation provider could not be reached."""


# --- feedback ---------------------------------------------------------------

class FeedbackError(LexragError):
    pass


class DuplicateQueryIdError(FeedbackError):
    pass


class UnknownQueryError(FeedbackError):
    pass


class DuplicateVoteError(FeedbackError):
    pass


class ReasonOnUpvoteError(FeedbackError):
    pass


# --- config -----------------------------------------------------------------

class ConfigError(LexragError):
    pass
