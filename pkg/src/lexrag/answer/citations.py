"""Citation marker grammar, grounding validation, and violation stripping.

Markers look like ``[[cite:3]]`` and reference context ordinals (the
generator only ever sees numbered passages). Ordinals are positive decimal
integers of at most nine digits; anything else is not a marker and stays in
the text as-is.

Marker spans are character offsets into the answer text they were parsed
from. Resolved passage spans are byte offsets into the source document
body, matching the corpus chunking contract. A marker that cannot be
resolved against the context is reported as a violation and stripped from
the user-facing answer; resolved markers remain in the final text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

from ..corpus.chunking import Chunk
from ..corpus.documents import Document
from ..rerank import ContextSet
from .events import AnswerEvent

CITE_RE = re.compile(r"\[\[cite:(\d{1,9})\]\]")

# Longest proper prefix of a marker: "[[cite:" + up to 9 digits + "]".
_PREFIX_RE = re.compile(r"\[(?:\[(?:c(?:i(?:t(?:e(?::(?:\d{1,9}\]?)?)?)?)?)?)?)?")
_MAX_HOLDBACK = len("[[cite:") + 9 + 1

UNKNOWN_ORDINAL = "unknown_ordinal"
UNKNOWN_CHUNK = "unknown_chunk"
OUTSIDE_CONTEXT = "outside_context"


class CorpusLookup(Protocol):
    def get_chunk(self, chunk_id: str) -> Optional[Chunk]: ...

    def get(self, doc_id: str) -> Optional[Document]: ...


@dataclass(frozen=True)
class CitationMarker:
    """A well-formed marker found in answer text; span is [start, end) chars."""

    start: int
    end: int
    ordinal: int


@dataclass(frozen=True)
class Citation:
    """A marker resolved to its supporting passage."""

    marker_start: int
    marker_end: int
    context_ordinal: int
    chunk_id: str
    doc_id: str
    passage_start: int  # byte offsets into the document body
    passage_end: int


@dataclass(frozen=True)
class GroundingViolation:
    marker_start: int
    marker_end: int
    reason: str


@dataclass(frozen=True)
class GroundingReport:
    total_citations: int
    resolved_count: int
    violations: tuple[GroundingViolation, ...]


def parse_citations(answer_text: str) -> list[CitationMarker]:
    """All well-formed markers in textual order; malformed runs are ignored."""
    markers = []
    for m in CITE_RE.finditer(answer_text):
        ordinal = int(m.group(1))
        if ordinal > 0:
            markers.append(CitationMarker(start=m.start(), end=m.end(), ordinal=ordinal))
    return markers


@dataclass(frozen=True)
class _Target:
    chunk_id: str
    doc_id: str
    passage_start: int
    passage_end: int


class _OrdinalResolver:
    """Resolves context ordinals to passage targets, caching per ordinal."""

    def __init__(self, context: ContextSet, corpus: CorpusLookup):
        self._context = context
        self._corpus = corpus
        self._cache: dict[int, tuple[Optional[_Target], Optional[str]]] = {}

    def resolve(self, ordinal: int) -> tuple[Optional[_Target], Optional[str]]:
        hit = self._cache.get(ordinal)
        if hit is not None:
            return hit
        result = self._resolve(ordinal)
        self._cache[ordinal] = result
        return result

    def _resolve(self, ordinal: int) -> tuple[Optional[_Target], Optional[str]]:
        if not 1 <= ordinal <= len(self._context.items):
            return None, UNKNOWN_ORDINAL
        chunk_id = self._context.items[ordinal - 1].chunk_id
        chunk = self._corpus.get_chunk(chunk_id)
        if chunk is None:
            return None, UNKNOWN_CHUNK
        doc = self._corpus.get(chunk.doc_id)
        if doc is None:
            return None, UNKNOWN_CHUNK
        body = doc.body.encode("utf-8")
        if chunk.end > len(body) or body[chunk.start : chunk.end] != chunk.text.encode("utf-8"):
            return None, OUTSIDE_CONTEXT
        target = _Target(
            chunk_id=chunk.chunk_id,
            doc_id=chunk.doc_id,
            passage_start=chunk.start,
            passage_end=chunk.end,
        )
        return target, None


def validate_grounding(
    markers: Sequence[CitationMarker],
    context: ContextSet,
    corpus: CorpusLookup,
) -> tuple[list[Citation], GroundingReport]:
    """Resolve each marker against the context; unresolvable ones become
    violations. Spans refer to the text the markers were parsed from."""
    resolver = _OrdinalResolver(context, corpus)
    citations: list[Citation] = []
    violations: list[GroundingViolation] = []
    for marker in markers:
        target, reason = resolver.resolve(marker.ordinal)
        if target is None:
            violations.append(
                GroundingViolation(marker_start=marker.start, marker_end=marker.end, reason=reason or "")
            )
        else:
            citations.append(
                Citation(
                    marker_start=marker.start,
                    marker_end=marker.end,
                    context_ordinal=marker.ordinal,
                    chunk_id=target.chunk_id,
                    doc_id=target.doc_id,
                    passage_start=target.passage_start,
                    passage_end=target.passage_end,
                )
            )
    report = GroundingReport(
        total_citations=len(markers),
        resolved_count=len(citations),
        violations=tuple(violations),
    )
    return citations, report


class CitationStreamFilter:
    """Incrementally strips unresolvable markers from a streamed answer.

    Feed raw generation deltas in; get back delta events whose concatenation
    is the final (stripped) answer text, plus a citation event immediately
    after each resolved marker is emitted. Text that could still become a
    marker is held back until it either completes or stops matching the
    grammar.
    """

    def __init__(self, context: ContextSet, corpus: CorpusLookup):
        self._resolver = _OrdinalResolver(context, corpus)
        self._pending = ""
        self._raw_pos = 0  # chars of raw text consumed
        self._out_pos = 0  # chars of final text emitted
        self._citations: list[Citation] = []
        self._violations: list[GroundingViolation] = []

    @property
    def citations(self) -> tuple[Citation, ...]:
        return tuple(self._citations)

    @property
    def violations(self) -> tuple[GroundingViolation, ...]:
        return tuple(self._violations)

    def report(self) -> GroundingReport:
        return GroundingReport(
            total_citations=len(self._citations) + len(self._violations),
            resolved_count=len(self._citations),
            violations=tuple(self._violations),
        )

    def feed(self, delta: str) -> list[AnswerEvent]:
        self._pending += delta
        return self._drain(final=False)

    def finish(self) -> list[AnswerEvent]:
        return self._drain(final=True)

    def _holdback_len(self) -> int:
        pending = self._pending
        start = max(0, len(pending) - _MAX_HOLDBACK)
        for i in range(start, len(pending)):
            if pending[i] == "[" and _PREFIX_RE.fullmatch(pending, i):
                return len(pending) - i
        return 0

    def _drain(self, final: bool) -> list[AnswerEvent]:
        events: list[AnswerEvent] = []
        parts: list[str] = []

        def emit_text(s: str) -> None:
            if s:
                parts.append(s)
                self._out_pos += len(s)
                self._raw_pos += len(s)

        def flush_parts() -> None:
            if parts:
                events.append(AnswerEvent.delta("".join(parts)))
                parts.clear()

        while True:
            m = CITE_RE.search(self._pending)
            if m is None:
                hold = 0 if final else self._holdback_len()
                emit_text(self._pending[: len(self._pending) - hold])
                self._pending = self._pending[len(self._pending) - hold :]
                break

            emit_text(self._pending[: m.start()])
            marker = m.group(0)
            ordinal = int(m.group(1))
            if ordinal == 0:
                emit_text(marker)  # not a well-formed marker; plain text
            else:
                target, reason = self._resolver.resolve(ordinal)
                if target is None:
                    self._violations.append(
                        GroundingViolation(
                            marker_start=self._raw_pos,
                            marker_end=self._raw_pos + len(marker),
                            reason=reason or "",
                        )
                    )
                    self._raw_pos += len(marker)  # consumed, not emitted
                else:
                    marker_start = self._out_pos
                    emit_text(marker)
                    citation = Citation(
                        marker_start=marker_start,
                        marker_end=self._out_pos,
                        context_ordinal=ordinal,
                        chunk_id=target.chunk_id,
                        doc_id=target.doc_id,
                        passage_start=target.passage_start,
                        passage_end=target.passage_end,
                    )
                    self._citations.append(citation)
                    flush_parts()
                    events.append(AnswerEvent.cite(citation))
            self._pending = self._pending[m.end() :]

        flush_parts()
        return events
