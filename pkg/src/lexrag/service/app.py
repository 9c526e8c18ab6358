"""FastAPI application exposing the ask/library/briefcase/feedback/stats API.

The ask stream is newline-delimited JSON: one frame object per line, UTF-8,
LF separators. Every ask request that starts streaming writes exactly one
query-log record, whether the stream ends in done or error.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from fastapi import Depends, FastAPI, HTTPException, Request, Response
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from ..answer.events import AnswerEvent, CITATION, DELTA, DONE
from ..answer.prompts import AskMode
from ..corpus.documents import DocumentKind
from ..corpus.store import CorpusStore, LibraryFilter
from ..errors import (
    ConfigError,
    CorpusError,
    DuplicateVoteError,
    EmptyBodyError,
    EmptyContextError,
    InvalidYearRangeError,
    MissingAttachmentError,
    ProviderUnavailableError,
    ReasonOnUpvoteError,
    UnknownQueryError,
)
from ..feedback.categorize import categorize_query
from ..feedback.log import DownvoteReason, FeedbackLog, QueryRecord, Vote, VoteDirection
from ..feedback.metrics import category_histogram, helpfulness_score, latency_stats, vote_rate
from ..pipeline import AskPipeline, PreparedAsk
from ..vector.disk import load_index
from .config import ServiceConfig, TokenInfo, build_embedder, build_generator, build_reranker


@dataclass
class ServiceState:
    config: ServiceConfig
    corpus: CorpusStore
    pipeline: AskPipeline
    feedback: FeedbackLog


def build_state(config: ServiceConfig) -> ServiceState:
    if not Path(config.corpus_path).exists():
        raise ConfigError(f"corpus file not readable: {config.corpus_path}")
    if not Path(config.index_path).exists():
        raise ConfigError(f"index file not readable: {config.index_path}")

    corpus = CorpusStore(config.corpus_path)
    embedder = build_embedder(config)
    index = load_index(config.index_path, provider_tag=embedder.tag)
    if index.dim != embedder.dim:
        raise ConfigError(
            f"index dim {index.dim} does not match embed provider dim {embedder.dim}"
        )
    pipeline = AskPipeline(
        corpus=corpus,
        index=index,
        embedder=embedder,
        reranker=build_reranker(config),
        generator=build_generator(config),
        pre_rerank_n=config.pre_rerank_n,
        rerank_k=config.rerank_k,
    )
    feedback = FeedbackLog(config.query_log_path or None, config.vote_log_path or None)
    return ServiceState(config=config, corpus=corpus, pipeline=pipeline, feedback=feedback)


class AskRequest(BaseModel):
    query: str = ""
    mode: str = ""
    magic: bool = False
    attachments: list[str] = []


class FeedbackRequest(BaseModel):
    query_id: str
    direction: str
    reason: Optional[str] = None
    free_text: Optional[str] = None


def _doc_summary(doc) -> dict:
    return {
        "doc_id": doc.doc_id,
        "kind": doc.kind.value,
        "title": doc.title,
        "citation_label": doc.citation_label,
        "year": doc.year,
        "source": doc.source,
        "uploaded_by": doc.uploaded_by,
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="lexrag", version="0.1.0")

    def auth(request: Request) -> TokenInfo:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        info = state.config.tokens.get(header[len("Bearer ") :])
        if info is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return info

    def _frame(obj: dict) -> str:
        return json.dumps(obj, ensure_ascii=False) + "\n"

    def _event_frame(ev: AnswerEvent, prepared: PreparedAsk) -> dict:
        if ev.kind == DELTA:
            return {"type": "delta", "text": ev.text}
        if ev.kind == CITATION:
            c = ev.citation
            doc = state.corpus.get(c.doc_id)
            return {
                "type": "citation",
                "ordinal": c.context_ordinal,
                "chunk_id": c.chunk_id,
                "doc_id": c.doc_id,
                "doc_title": doc.title if doc else "",
                "doc_kind": doc.kind.value if doc else "",
                "start": c.passage_start,
                "end": c.passage_end,
                "marker_start": c.marker_start,
                "marker_end": c.marker_end,
            }
        if ev.kind == DONE:
            report = prepared.outcome.report
            return {
                "type": "done",
                "query_id": prepared.query_id,
                "latency_ms": ev.latency_ms,
                "token_count": ev.token_count,
                "grounding": {
                    "total": report.total_citations,
                    "resolved": report.resolved_count,
                    "violations": len(report.violations),
                },
            }
        return {"type": "error", "message": ev.message}

    @app.post("/ask")
    def ask(body: AskRequest, token: TokenInfo = Depends(auth)):
        if not body.query.strip():
            raise HTTPException(status_code=400, detail="query must not be empty")
        try:
            mode = AskMode(body.mode)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"invalid mode: {body.mode!r}") from None

        query_id = uuid.uuid4().hex
        started = time.perf_counter()
        try:
            prepared = state.pipeline.prepare(
                body.query,
                mode,
                attachments=body.attachments,
                magic=body.magic,
                query_id=query_id,
            )
        except (EmptyContextError, MissingAttachmentError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        except ProviderUnavailableError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None

        def frames() -> Iterator[str]:
            try:
                for ev in state.pipeline.stream(prepared):
                    yield _frame(_event_frame(ev, prepared))
            finally:
                outcome = prepared.outcome
                latency = outcome.latency_ms or int((time.perf_counter() - started) * 1000)
                state.feedback.record_query(
                    QueryRecord(
                        query_id=query_id,
                        user_id=token.user_id,
                        mode=mode,
                        text=body.query,
                        timestamp=datetime.now(timezone.utc).isoformat(),
                        latency_ms=latency,
                        category=categorize_query(body.query),
                        grounding_resolved=outcome.report.resolved_count,
                        grounding_violations=len(outcome.report.violations),
                    )
                )

        return StreamingResponse(frames(), media_type="application/x-ndjson")

    @app.get("/library")
    def library(
        request: Request,
        kind: Optional[str] = None,
        q: Optional[str] = None,
        sort: str = "title",
        dir: str = "asc",
        year_min: Optional[int] = None,
        year_max: Optional[int] = None,
        offset: int = 0,
        limit: int = 20,
        token: TokenInfo = Depends(auth),
    ):
        kind_value = None
        if kind is not None:
            try:
                kind_value = DocumentKind(kind)
            except ValueError:
                raise HTTPException(status_code=400, detail=f"invalid kind: {kind!r}") from None
        year_range = None
        if year_min is not None or year_max is not None:
            year_range = (year_min if year_min is not None else -(10**9),
                          year_max if year_max is not None else 10**9)
        flt = LibraryFilter(
            kind=kind_value, text_query=q, year_range=year_range, sort_key=sort, sort_dir=dir
        )
        if offset < 0 or limit < 1:
            raise HTTPException(status_code=400, detail="offset must be >= 0 and limit >= 1")
        try:
            docs = state.corpus.library_search(flt)
        except (InvalidYearRangeError, CorpusError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        page = docs[offset : offset + limit]
        return {
            "items": [_doc_summary(d) for d in page],
            "total": len(docs),
            "offset": offset,
            "limit": limit,
        }

    @app.get("/library/{doc_id}")
    def get_document(doc_id: str, token: TokenInfo = Depends(auth)):
        doc = state.corpus.get(doc_id)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"unknown document: {doc_id!r}")
        summary = _doc_summary(doc)
        summary["body"] = doc.body
        return summary

    @app.post("/briefcase")
    async def briefcase(request: Request, token: TokenInfo = Depends(auth)):
        raw = await request.body()
        if len(raw) > state.config.max_upload_bytes:
            raise HTTPException(status_code=413, detail="upload exceeds the size limit")
        content_type = request.headers.get("content-type", "")
        if "application/json" not in content_type:
            raise HTTPException(status_code=415, detail="expected an application/json payload")
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise HTTPException(status_code=415, detail="payload is not valid UTF-8 JSON") from None
        title = payload.get("title") if isinstance(payload, dict) else None
        text = payload.get("text") if isinstance(payload, dict) else None
        if not isinstance(title, str) or not isinstance(text, str) or not text.strip():
            raise HTTPException(status_code=415, detail="payload must carry text fields title and text")

        doc_id = f"u{uuid.uuid4().hex[:12]}"
        try:
            doc = state.corpus.ingest_document(
                {
                    "doc_id": doc_id,
                    "kind": DocumentKind.USER_DOC.value,
                    "title": title,
                    "body": text,
                    "source": "briefcase",
                    "uploaded_by": token.user_id,
                }
            )
            chunk_count = state.pipeline.register_user_document(doc)
        except EmptyBodyError:
            raise HTTPException(status_code=415, detail="payload text is empty") from None
        except ProviderUnavailableError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None
        return {"doc_id": doc.doc_id, "chunks": chunk_count}

    @app.post("/feedback", status_code=204)
    def feedback(body: FeedbackRequest, token: TokenInfo = Depends(auth)):
        try:
            direction = VoteDirection(body.direction)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"invalid direction: {body.direction!r}") from None
        reason = None
        if body.reason is not None:
            try:
                reason = DownvoteReason(body.reason)
            except ValueError:
                raise HTTPException(status_code=400, detail=f"invalid reason: {body.reason!r}") from None
        vote = Vote(
            query_id=body.query_id,
            user_id=token.user_id,
            direction=direction,
            reason=reason,
            free_text=body.free_text,
        )
        try:
            state.feedback.record_vote(vote)
        except UnknownQueryError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except DuplicateVoteError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        except ReasonOnUpvoteError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return Response(status_code=204)

    @app.get("/stats")
    def stats(token: TokenInfo = Depends(auth)):
        if not token.admin:
            raise HTTPException(status_code=403, detail="admin token required")
        queries = state.feedback.queries()
        votes = state.feedback.votes()
        latency = latency_stats(queries)
        return {
            "helpfulness": helpfulness_score(votes),
            "vote_rate": vote_rate(queries, votes),
            "latency": latency.to_record() if latency else None,
            "query_count": len(queries),
            "category_histogram": category_histogram(queries),
        }

    return app
