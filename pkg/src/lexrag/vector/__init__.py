"""Embedding providers, exact cosine retrieval, and index persistence."""

from .embedding import EmbeddingProvider, HashEmbedder, RemoteEmbedder, embed
from .index import RetrievalHit, VectorIndex, as_vector, cosine, retrieve_top_n
from .disk import load_index, save_index

__all__ = [
    "EmbeddingProvider",
    "HashEmbedder",
    "RemoteEmbedder",
    "embed",
    "RetrievalHit",
    "VectorIndex",
    "as_vector",
    "cosine",
    "retrieve_top_n",
    "load_index",
    "save_index",
]
