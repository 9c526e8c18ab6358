"""Exact cosine similarity search over an in-memory vector index.

Retrieval is a full scan, not approximate: every entry is scored with the
same float64 arithmetic as the public cosine() function, then sorted by
(-score, chunk_id). That makes results reproducible and directly checkable
against a brute-force oracle. The index is immutable once built; concurrent
retrievals need no coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import (
    DimensionMismatchError,
    DimensionZeroError,
    EmptyIndexError,
    VectorError,
    ZeroVectorError,
)


@dataclass(frozen=True)
class RetrievalHit:
    chunk_id: str
    score: float
    rank: int


def as_vector(values, dim: Optional[int] = None) -> np.ndarray:
    """Validate and convert to a finite float32 1-D array."""
    arr = np.asarray(values, dtype=np.float32)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise VectorError("embedding must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise VectorError("embedding contains non-finite values")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(f"vector has dim {arr.shape[0]}, expected {dim}")
    return arr


def cosine(a, b) -> float:
    """Cosine similarity dot(a,b) / (|a||b|), in [-1, 1] up to rounding.

    The norm product is evaluated as sqrt(dot(a,a) * dot(b,b)), which keeps
    self-similarity exactly 1.0 in floating point.
    """
    va = as_vector(a)
    vb = as_vector(b)
    if va.shape[0] != vb.shape[0]:
        raise DimensionMismatchError(f"dims differ: {va.shape[0]} vs {vb.shape[0]}")
    a64 = va.astype(np.float64)
    b64 = vb.astype(np.float64)
    sa = float(np.dot(a64, a64))
    sb = float(np.dot(b64, b64))
    if sa == 0.0 or sb == 0.0:
        raise ZeroVectorError("cosine is undefined for an all-zero vector")
    return float(np.dot(a64, b64) / math.sqrt(sa * sb))


class VectorIndex:
    """chunk_id -> embedding map with cached norms for scoring.

    Vectors are stored un-normalized exactly as the provider produced them;
    float64 copies and norms are cached lazily for retrieval.
    """

    def __init__(self, dim: int, provider_tag: str = ""):
        if dim < 1:
            raise DimensionZeroError("index dim must be positive")
        self.dim = dim
        self.provider_tag = provider_tag
        self._ids: list[str] = []
        self._vectors: dict[str, np.ndarray] = {}
        self._cache: Optional[tuple[np.ndarray, np.ndarray]] = None

    def add(self, chunk_id: str, vector) -> None:
        arr = as_vector(vector, dim=self.dim)
        if chunk_id in self._vectors:
            raise VectorError(f"duplicate chunk id in index: {chunk_id!r}")
        if not np.any(arr):
            raise ZeroVectorError(f"all-zero embedding for {chunk_id!r}")
        self._ids.append(chunk_id)
        self._vectors[chunk_id] = arr
        self._cache = None

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, chunk_id: str) -> bool:
        return chunk_id in self._vectors

    def ids(self) -> list[str]:
        return list(self._ids)

    def get(self, chunk_id: str) -> np.ndarray:
        return self._vectors[chunk_id]

    def _scoring_cache(self) -> tuple[np.ndarray, np.ndarray]:
        if self._cache is None:
            matrix = np.stack([self._vectors[i].astype(np.float64) for i in self._ids])
            sq_norms = np.array([float(np.dot(row, row)) for row in matrix])
            self._cache = (matrix, sq_norms)
        return self._cache

    def retrieve(self, query_vec, n: int) -> list[RetrievalHit]:
        """Exact top-n by cosine; ties broken by ascending chunk_id."""
        if n < 1:
            raise VectorError("n must be positive")
        if not self._ids:
            raise EmptyIndexError("cannot retrieve from an empty index")
        q = as_vector(query_vec, dim=self.dim).astype(np.float64)
        sq_q = float(np.dot(q, q))
        if sq_q == 0.0:
            raise ZeroVectorError("query vector is all-zero")
        matrix, sq_norms = self._scoring_cache()
        # Per-row np.dot keeps scores bit-identical to cosine() on the same pair.
        scores = [
            float(np.dot(matrix[i], q) / math.sqrt(sq_norms[i] * sq_q))
            for i in range(len(self._ids))
        ]
        order = sorted(range(len(self._ids)), key=lambda i: (-scores[i], self._ids[i]))
        return [
            RetrievalHit(chunk_id=self._ids[i], score=scores[i], rank=rank)
            for rank, i in enumerate(order[: min(n, len(self._ids))])
        ]


def retrieve_top_n(query_vec, index: VectorIndex, n: int) -> list[RetrievalHit]:
    return index.retrieve(query_vec, n)
