"""Group sentences into retrieval chunks of at most five sentences.

Chunks partition the sentence sequence: no overlap, no gaps, and every
chunk except possibly the last holds exactly five sentences, so a document
with n sentences yields ceil(n / 5) chunks.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import CorpusError
from .documents import Document
from .segment import segment_sentences

SENTENCES_PER_CHUNK = 5


@dataclass(frozen=True)
class Chunk:
    """A contiguous run of sentences from one document.

    sentence_range is [first, last); span is [start, end) in UTF-8 bytes of
    the document body; text is the exact covered substring.
    """

    chunk_id: str
    doc_id: str
    first_sentence: int
    last_sentence: int
    start: int
    end: int
    text: str

    @property
    def sentence_count(self) -> int:
        return self.last_sentence - self.first_sentence


def chunk_document(doc: Document) -> list[Chunk]:
    """Chunk a document into consecutive 5-sentence slices.

    Deterministic for a given body. Raises EmptyBodyError when the body
    yields zero sentences.
    """
    sentences = segment_sentences(doc.body)
    body_bytes = doc.body.encode("utf-8")
    chunks: list[Chunk] = []
    for ordinal, first in enumerate(range(0, len(sentences), SENTENCES_PER_CHUNK)):
        group = sentences[first : first + SENTENCES_PER_CHUNK]
        start = group[0].start
        end = group[-1].end
        chunks.append(
            Chunk(
                chunk_id=f"{doc.doc_id}#{ordinal}",
                doc_id=doc.doc_id,
                first_sentence=first,
                last_sentence=first + len(group),
                start=start,
                end=end,
                text=body_bytes[start:end].decode("utf-8"),
            )
        )
    return chunks


def parse_chunk_id(chunk_id: str) -> tuple[str, int]:
    """Split "<doc_id>#<ordinal>" from the right; doc ids may contain '#'."""
    doc_id, sep, ordinal = chunk_id.rpartition("#")
    if not sep or not doc_id:
        raise CorpusError(f"malformed chunk id: {chunk_id!r}")
    try:
        return doc_id, int(ordinal)
    except ValueError:
        raise CorpusError(f"malformed chunk id: {chunk_id!r}") from None
