"""Streamed answer events.

A stream is zero or more delta/citation events terminated by exactly one
done or error event. Concatenating delta texts yields the answer text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from .citations import Citation

DELTA = "delta"
CITATION = "citation"
DONE = "done"
ERROR = "error"

TERMINAL_KINDS = frozenset({DONE, ERROR})


@dataclass(frozen=True)
class AnswerEvent:
    kind: str
    text: str = ""
    citation: Optional["Citation"] = None
    latency_ms: int = 0
    token_count: int = 0
    message: str = ""

    @classmethod
    def delta(cls, text: str) -> "AnswerEvent":
        return cls(kind=DELTA, text=text)

    @classmethod
    def cite(cls, citation: "Citation") -> "AnswerEvent":
        return cls(kind=CITATION, citation=citation)

    @classmethod
    def done(cls, latency_ms: int, token_count: int) -> "AnswerEvent":
        return cls(kind=DONE, latency_ms=latency_ms, token_count=token_count)

    @classmethod
    def error(cls, message: str) -> "AnswerEvent":
        return cls(kind=ERROR, message=message)

    @property
    def is_terminal(self) -> bool:
        return self.kind in TERMINAL_KINDS
