"""Embedding providers: a deterministic local stub and a remote HTTP client.

The stub derives each token's contribution from a SHA-256 expansion, so the
same text always embeds to the same unit vector on any platform, with no
model download and no RNG state.
"""

from __future__ import annotations

import hashlib
import re
import struct
from typing import Optional, Protocol, Sequence

import httpx
import numpy as np

from ..errors import EmptyTextError, ProviderUnavailableError

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmbeddingProvider(Protocol):
    dim: int
    tag: str

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]: ...


def embed(text: str, provider: EmbeddingProvider) -> np.ndarray:
    """Embed one text; identical inputs yield identical vectors."""
    if not text:
        raise EmptyTextError("cannot embed empty text")
    return provider.embed_batch([text])[0]


class HashEmbedder:
    """Deterministic stub embedder: seeded token hashes summed to a unit vector."""

    def __init__(self, dim: int = 64, seed: int = 0):
        if dim < 1:
            raise ValueError("embedding dim must be positive")
        self.dim = dim
        self.seed = seed
        self.tag = f"hash:dim={dim}:seed={seed}"

    def _token_values(self, token: str) -> np.ndarray:
        # Expand SHA-256(seed:token:block) into dim floats in [-1, 1).
        out = np.empty(self.dim, dtype=np.float64)
        blocks = -(-self.dim // 8)
        pos = 0
        for block in range(blocks):
            digest = hashlib.sha256(f"{self.seed}:{token}:{block}".encode("utf-8")).digest()
            words = struct.unpack("<8I", digest)
            for w in words:
                if pos == self.dim:
                    break
                out[pos] = (w / 2147483648.0) - 1.0
                pos += 1
        return out

    def embed_one(self, text: str) -> np.ndarray:
        if not text:
            raise EmptyTextError("cannot embed empty text")
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            tokens = [text]  # punctuation-only input still embeds deterministically
        acc = np.zeros(self.dim, dtype=np.float64)
        for token in tokens:
            acc += self._token_values(token)
        norm = float(np.linalg.norm(acc))
        if norm == 0.0:
            acc = self._token_values("\x00" + text)
            norm = float(np.linalg.norm(acc))
        return (acc / norm).astype(np.float32)

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed_one(t) for t in texts]


class RemoteEmbedder:
    """HTTP embedding client: POST {"texts": [...]} -> {"vectors": [[...]]}."""

    def __init__(
        self,
        endpoint: str,
        dim: int,
        token: Optional[str] = None,
        timeout: float = 30.0,
        client: Optional[httpx.Client] = None,
    ):
        if dim < 1:
            raise ValueError("embedding dim must be positive")
        self.endpoint = endpoint
        self.dim = dim
        self.tag = f"remote:{endpoint}"
        self._headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = client or httpx.Client(timeout=timeout)

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        if any(not t for t in texts):
            raise EmptyTextError("cannot embed empty text")
        try:
            resp = self._client.post(self.endpoint, json={"texts": list(texts)}, headers=self._headers)
            resp.raise_for_status()
            payload = resp.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ProviderUnavailableError(f"embedding provider failed: {exc}") from exc
        vectors = payload.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProviderUnavailableError("embedding provider returned a malformed payload")
        out: list[np.ndarray] = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=np.float32)
            if arr.ndim != 1 or arr.shape[0] != self.dim or not np.all(np.isfinite(arr)):
                raise ProviderUnavailableError(
                    f"embedding provider returned a vector of dim {arr.shape}, expected {self.dim}"
                )
            out.append(arr)
        return out
