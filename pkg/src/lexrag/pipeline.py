"""End-to-end ask pipeline shared by the HTTP service and the CLI.

prepare() runs everything up to the prompt (refinement, retrieval,
attachment merge, rerank) so callers can map failures to request errors
before any bytes are streamed; stream() then yields filtered answer events
and fills in the outcome as it goes.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .answer.citations import Citation, CitationStreamFilter, GroundingReport
from .answer.events import AnswerEvent, DELTA, DONE
from .answer.generate import GenerationProvider, generate_stream, magic_query
from .answer.prompts import AskMode, Prompt, build_prompt
from .corpus.documents import Document
from .corpus.store import CorpusStore
from .errors import EmptyContextError, EmptyQueryError, MissingAttachmentError, ProviderUnavailableError
from .rerank import ContextSet, RerankProvider, rerank
from .vector.embedding import EmbeddingProvider, embed
from .vector.index import RetrievalHit, VectorIndex, cosine


@dataclass
class AskOutcome:
    """Filled in while the answer stream is consumed."""

    final_text: str = ""
    citations: tuple[Citation, ...] = ()
    report: GroundingReport = field(default_factory=lambda: GroundingReport(0, 0, ()))
    latency_ms: int = 0
    token_count: int = 0
    error_message: Optional[str] = None


@dataclass
class PreparedAsk:
    query_id: str
    query: str
    refined_query: str
    mode: AskMode
    context: ContextSet
    prompt: Prompt
    attachments: tuple[str, ...]
    outcome: AskOutcome = field(default_factory=AskOutcome)


class AskPipeline:
    def __init__(
        self,
        corpus: CorpusStore,
        index: Optional[VectorIndex],
        embedder: EmbeddingProvider,
        reranker: RerankProvider,
        generator: GenerationProvider,
        pre_rerank_n: int = 100,
        rerank_k: int = 30,
    ):
        self.corpus = corpus
        self.index = index
        self.embedder = embedder
        self.reranker = reranker
        self.generator = generator
        self.pre_rerank_n = pre_rerank_n
        self.rerank_k = rerank_k
        self._attachment_vectors: dict[str, np.ndarray] = {}
        self._attachment_lock = threading.Lock()

    # -- briefcase ----------------------------------------------------------

    def register_user_document(self, doc: Document) -> int:
        """Embed a user document's chunks for later attachment scoring."""
        chunks = self.corpus.chunks_for(doc.doc_id)
        vectors = self.embedder.embed_batch([c.text for c in chunks])
        with self._attachment_lock:
            for chunk, vec in zip(chunks, vectors):
                self._attachment_vectors[chunk.chunk_id] = vec
        return len(chunks)

    def _attachment_candidates(self, query_vec: np.ndarray, doc_ids: Sequence[str]) -> dict[str, float]:
        scores: dict[str, float] = {}
        for doc_id in doc_ids:
            doc = self.corpus.get(doc_id)
            if doc is None:
                raise MissingAttachmentError(f"attachment not found: {doc_id!r}")
            chunks = self.corpus.chunks_for(doc_id)
            missing = [c for c in chunks if c.chunk_id not in self._attachment_vectors]
            if missing:
                vectors = self.embedder.embed_batch([c.text for c in missing])
                with self._attachment_lock:
                    for chunk, vec in zip(missing, vectors):
                        self._attachment_vectors[chunk.chunk_id] = vec
            for chunk in chunks:
                scores[chunk.chunk_id] = cosine(query_vec, self._attachment_vectors[chunk.chunk_id])
        return scores

    # -- ask ----------------------------------------------------------------

    def prepare(
        self,
        query: str,
        mode: AskMode,
        attachments: Sequence[str] = (),
        magic: bool = False,
        query_id: str = "",
    ) -> PreparedAsk:
        if not query or not query.strip():
            raise EmptyQueryError("query must not be empty")
        if mode is AskMode.REVIEW and not attachments:
            raise MissingAttachmentError("review mode requires at least one attachment")

        refined = query
        if magic:
            try:
                refined = magic_query(query, self.generator)
            except ProviderUnavailableError:
                refined = query  # refinement is best-effort

        query_vec = embed(refined, self.embedder)

        by_id: dict[str, float] = {}
        if self.index is not None and len(self.index) > 0:
            for hit in self.index.retrieve(query_vec, self.pre_rerank_n):
                by_id[hit.chunk_id] = hit.score
        if attachments:
            by_id.update(self._attachment_candidates(query_vec, attachments))

        ordered = sorted(by_id.items(), key=lambda kv: (-kv[1], kv[0]))
        candidates = [
            RetrievalHit(chunk_id=cid, score=score, rank=rank)
            for rank, (cid, score) in enumerate(ordered)
        ]

        if candidates:
            context = rerank(
                refined,
                candidates,
                self.corpus.get_chunk,
                self.reranker,
                k=self.rerank_k,
                query_id=query_id,
            )
        else:
            if mode is AskMode.RESEARCH:
                raise EmptyContextError("no context retrieved for research query")
            context = ContextSet(query_id=query_id, items=())

        prompt = build_prompt(refined, mode, context, attached_docs=tuple(attachments) or None)
        return PreparedAsk(
            query_id=query_id,
            query=query,
            refined_query=refined,
            mode=mode,
            context=context,
            prompt=prompt,
            attachments=tuple(attachments),
        )

    def stream(self, prepared: PreparedAsk) -> Iterator[AnswerEvent]:
        """Yield filtered answer events; exactly one terminal event."""
        outcome = prepared.outcome
        flt = CitationStreamFilter(prepared.context, self.corpus)

        def track(events: list[AnswerEvent]) -> Iterator[AnswerEvent]:
            for ev in events:
                if ev.kind == DELTA:
                    outcome.final_text += ev.text
                yield ev

        for ev in generate_stream(prepared.prompt, self.generator):
            if ev.kind == DELTA:
                yield from track(flt.feed(ev.text))
            elif ev.kind == DONE:
                yield from track(flt.finish())
                outcome.citations = flt.citations
                outcome.report = flt.report()
                outcome.latency_ms = ev.latency_ms
                outcome.token_count = ev.token_count
                yield ev
                return
            else:  # error
                yield from track(flt.finish())
                outcome.citations = flt.citations
                outcome.report = flt.report()
                outcome.error_message = ev.message
                yield ev
                return
