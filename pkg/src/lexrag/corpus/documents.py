"""Document model and raw-record validation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Optional

from ..errors import (
    CorpusError,
    EmptyBodyError,
    InvalidKindError,
    MissingFieldError,
    UserDocWithoutOwnerError,
)


class DocumentKind(str, Enum):
    CASE = "case"
    LEGISLATION = "legislation"
    USER_DOC = "user_doc"


_REQUIRED_FIELDS = ("doc_id", "kind", "title", "body")


@dataclass(frozen=True)
class Document:
    """A case, piece of legislation, or user-uploaded file."""

    doc_id: str
    kind: DocumentKind
    title: str
    body: str
    citation_label: str = ""
    year: Optional[int] = None
    source: str = ""
    uploaded_by: Optional[str] = None

    def to_record(self) -> dict[str, Any]:
        """Serialize to the JSONL corpus-file schema (all keys present)."""
        return {
            "doc_id": self.doc_id,
            "kind": self.kind.value,
            "title": self.title,
            "citation_label": self.citation_label,
            "year": self.year,
            "body": self.body,
            "source": self.source,
            "uploaded_by": self.uploaded_by,
        }


def document_from_record(record: Mapping[str, Any]) -> Document:
    """Validate a raw corpus record and build a Document.

    Raises MissingFieldError, EmptyBodyError, InvalidKindError, or
    UserDocWithoutOwnerError on contract violations.
    """
    for name in _REQUIRED_FIELDS:
        if record.get(name) is None:
            raise MissingFieldError(name)

    kind_raw = record["kind"]
    try:
        kind = DocumentKind(kind_raw)
    except ValueError:
        raise InvalidKindError(f"invalid document kind: {kind_raw!r}") from None

    body = record["body"]
    if not isinstance(body, str) or not body.strip():
        raise EmptyBodyError("document body is empty")

    uploaded_by = record.get("uploaded_by") or None
    if kind is DocumentKind.USER_DOC and uploaded_by is None:
        raise UserDocWithoutOwnerError("user_doc requires uploaded_by")
    if kind is not DocumentKind.USER_DOC and uploaded_by is not None:
        raise InvalidKindError("uploaded_by is only valid for user_doc")

    year = record.get("year")
    if year is not None and not isinstance(year, int):
        raise CorpusError(f"year must be an integer, got {year!r}")

    return Document(
        doc_id=str(record["doc_id"]),
        kind=kind,
        title=str(record["title"]),
        body=body,
        citation_label=str(record.get("citation_label") or ""),
        year=year,
        source=str(record.get("source") or ""),
        uploaded_by=uploaded_by,
    )
