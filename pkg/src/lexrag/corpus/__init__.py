"""Document ingestion, sentence segmentation, chunking, and library storage."""

from .documents import Document, DocumentKind, document_from_record
from .segment import Sentence, segment_sentences
from .chunking import SENTENCES_PER_CHUNK, Chunk, chunk_document, parse_chunk_id
from .store import CorpusStore, LibraryFilter

__all__ = [
    "Document",
    "DocumentKind",
    "document_from_record",
    "Sentence",
    "segment_sentences",
    "SENTENCES_PER_CHUNK",
    "Chunk",
    "chunk_document",
    "parse_chunk_id",
    "CorpusStore",
    "LibraryFilter",
]
