"""Corpus store: JSONL persistence plus library search, sort, and filters.

The on-disk form is append-style JSON lines, one document per line;
re-ingesting a doc_id appends a new line and the latest line wins at load.
Reads are lock-free; ingestion is serialized through a writer lock.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from ..errors import CorpusError, InvalidYearRangeError
from .chunking import Chunk, chunk_document, parse_chunk_id
from .documents import Document, DocumentKind, document_from_record

SORT_KEYS = ("title", "year", "kind")
SORT_DIRS = ("asc", "desc")


@dataclass(frozen=True)
class LibraryFilter:
    """Search/sort parameters for the library listing.

    text_query matches a case-insensitive substring of title or
    citation_label. Sorting is by sort_key with ties broken by ascending
    doc_id; documents without a year sort after dated ones ascending.
    """

    kind: Optional[DocumentKind] = None
    text_query: Optional[str] = None
    year_range: Optional[tuple[int, int]] = None
    sort_key: str = "title"
    sort_dir: str = "asc"

    def validate(self) -> None:
        if self.year_range is not None:
            lo, hi = self.year_range
            if lo > hi:
                raise InvalidYearRangeError(f"year range {lo}..{hi} has min > max")
        if self.sort_key not in SORT_KEYS:
            raise CorpusError(f"invalid sort key: {self.sort_key!r}")
        if self.sort_dir not in SORT_DIRS:
            raise CorpusError(f"invalid sort direction: {self.sort_dir!r}")


def _matches(doc: Document, flt: LibraryFilter) -> bool:
    if flt.kind is not None and doc.kind is not flt.kind:
        return False
    if flt.text_query:
        needle = flt.text_query.lower()
        if needle not in doc.title.lower() and needle not in doc.citation_label.lower():
            return False
    if flt.year_range is not None:
        lo, hi = flt.year_range
        if doc.year is None or not (lo <= doc.year <= hi):
            return False
    return True


def _sort_value(doc: Document, key: str):
    if key == "title":
        return (doc.title.casefold(),)
    if key == "year":
        return (1, 0) if doc.year is None else (0, doc.year)
    return (doc.kind.value,)


class CorpusStore:
    """In-memory document map backed by an optional JSONL file."""

    def __init__(self, path: Optional[Path | str] = None):
        self._path = Path(path) if path is not None else None
        self._docs: dict[str, Document] = {}
        self._chunk_cache: dict[str, list[Chunk]] = {}
        self._write_lock = threading.Lock()
        if self._path is not None and self._path.exists():
            self._load()

    def _load(self) -> None:
        assert self._path is not None
        with self._path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"corpus file line {lineno}: invalid JSON ({exc})") from None
                doc = document_from_record(record)
                self._docs[doc.doc_id] = doc

    def ingest_document(self, record: Mapping[str, Any]) -> Document:
        """Validate, persist, and index one raw record; last write wins."""
        doc = document_from_record(record)
        with self._write_lock:
            if self._path is not None:
                with self._path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")
            self._docs[doc.doc_id] = doc
            self._chunk_cache.pop(doc.doc_id, None)
        return doc

    def get(self, doc_id: str) -> Optional[Document]:
        return self._docs.get(doc_id)

    def __len__(self) -> int:
        return len(self._docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def documents(self) -> list[Document]:
        return list(self._docs.values())

    def chunks_for(self, doc_id: str) -> list[Chunk]:
        """Chunks of one document, computed on demand and cached."""
        cached = self._chunk_cache.get(doc_id)
        if cached is not None:
            return cached
        doc = self._docs.get(doc_id)
        if doc is None:
            raise CorpusError(f"unknown document: {doc_id!r}")
        chunks = chunk_document(doc)
        self._chunk_cache[doc_id] = chunks
        return chunks

    def all_chunks(self) -> Iterable[Chunk]:
        for doc_id in self._docs:
            yield from self.chunks_for(doc_id)

    def get_chunk(self, chunk_id: str) -> Optional[Chunk]:
        """Resolve a chunk id to its Chunk, or None if it cannot resolve."""
        try:
            doc_id, ordinal = parse_chunk_id(chunk_id)
        except CorpusError:
            return None
        if doc_id not in self._docs:
            return None
        chunks = self.chunks_for(doc_id)
        if not (0 <= ordinal < len(chunks)):
            return None
        return chunks[ordinal]

    def library_search(self, flt: LibraryFilter) -> list[Document]:
        """Documents matching all present filter fields, stably sorted.

        Equivalent to a brute-force filter over every stored document
        followed by a sort on (sort_key, doc_id).
        """
        flt.validate()
        matched = [d for d in self._docs.values() if _matches(d, flt)]
        matched.sort(key=lambda d: d.doc_id)
        matched.sort(key=lambda d: _sort_value(d, flt.sort_key), reverse=flt.sort_dir == "desc")
        return matched
