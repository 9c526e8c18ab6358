"""Re-order retrieved candidates and cut to the grounding context set.

Two providers ship: a deterministic lexical-overlap scorer usable offline
and as a test oracle, and a remote HTTP cross-encoder client. Ties are
broken by original retrieval score, then ascending chunk_id, so the output
never depends on candidate input order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Sequence

import httpx

from .corpus.chunking import Chunk
from .errors import EmptyQueryError, ProviderUnavailableError, UnresolvableChunkError
from .vector.index import RetrievalHit

DEFAULT_CONTEXT_SIZE = 30

_TOKEN_RE = re.compile(r"[a-z0-9]+")

ChunkLookup = Callable[[str], Optional[Chunk]]


@dataclass(frozen=True)
class ContextItem:
    chunk_id: str
    score: float
    ordinal: int  # 1-based position in the context
    text: str


@dataclass(frozen=True)
class ContextSet:
    """The reranked chunks passed as grounding context for one query."""

    query_id: str
    items: tuple[ContextItem, ...]

    def __len__(self) -> int:
        return len(self.items)

    def ordinals(self) -> range:
        return range(1, len(self.items) + 1)


class RerankProvider(Protocol):
    def score(self, query: str, passages: Sequence[tuple[str, str]]) -> list[float]:
        """Relevance score per (id, text) passage; order-independent."""
        ...


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens; no stemming."""
    return _TOKEN_RE.findall(text.lower())


def lexical_rerank_score(query_text: str, chunk_text: str) -> float:
    """Fraction of the query's unique tokens present in the chunk, in [0, 1]."""
    query_tokens = set(tokenize(query_text))
    if not query_tokens:
        raise EmptyQueryError("query has no scoreable tokens")
    chunk_tokens = set(tokenize(chunk_text))
    return len(query_tokens & chunk_tokens) / len(query_tokens)


class LexicalReranker:
    """Deterministic token-overlap reranker."""

    def score(self, query: str, passages: Sequence[tuple[str, str]]) -> list[float]:
        return [lexical_rerank_score(query, text) for _, text in passages]


class RemoteReranker:
    """HTTP reranker: POST {query, passages:[{id,text}]} -> {scores:[{id,score}]}."""

    def __init__(
        self,
        endpoint: str,
        token: Optional[str] = None,
        timeout: float = 30.0,
        client: Optional[httpx.Client] = None,
    ):
        self.endpoint = endpoint
        self._headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = client or httpx.Client(timeout=timeout)

    def score(self, query: str, passages: Sequence[tuple[str, str]]) -> list[float]:
        body = {"query": query, "passages": [{"id": pid, "text": text} for pid, text in passages]}
        try:
            resp = self._client.post(self.endpoint, json=body, headers=self._headers)
            resp.raise_for_status()
            payload = resp.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ProviderUnavailableError(f"rerank provider failed: {exc}") from exc
        raw = payload.get("scores")
        if not isinstance(raw, list):
            raise ProviderUnavailableError("rerank provider returned a malformed payload")
        by_id = {}
        for entry in raw:
            if not isinstance(entry, dict) or "id" not in entry or "score" not in entry:
                raise ProviderUnavailableError("rerank provider returned a malformed score entry")
            by_id[entry["id"]] = float(entry["score"])
        try:
            return [by_id[pid] for pid, _ in passages]
        except KeyError as exc:
            raise ProviderUnavailableError(f"rerank provider omitted passage {exc}") from None


def rerank(
    query_text: str,
    candidates: Sequence[RetrievalHit],
    chunk_lookup: ChunkLookup,
    provider: RerankProvider,
    k: int = DEFAULT_CONTEXT_SIZE,
    query_id: str = "",
) -> ContextSet:
    """Top min(k, |candidates|) chunks by provider score.

    Ties break by higher retrieval score, then ascending chunk_id, so any
    permutation of the candidate list produces the same ContextSet.
    """
    if not candidates:
        raise ValueError("rerank requires at least one candidate")
    if k < 1:
        raise ValueError("k must be positive")

    chunks: list[Chunk] = []
    for hit in candidates:
        chunk = chunk_lookup(hit.chunk_id)
        if chunk is None:
            raise UnresolvableChunkError(f"candidate chunk not found: {hit.chunk_id!r}")
        chunks.append(chunk)

    scores = provider.score(query_text, [(c.chunk_id, c.text) for c in chunks])
    ranked = sorted(
        zip(candidates, chunks, scores),
        key=lambda t: (-t[2], -t[0].score, t[0].chunk_id),
    )
    items = tuple(
        ContextItem(chunk_id=chunk.chunk_id, score=score, ordinal=pos + 1, text=chunk.text)
        for pos, (_, chunk, score) in enumerate(ranked[: min(k, len(ranked))])
    )
    return ContextSet(query_id=query_id, items=items)
