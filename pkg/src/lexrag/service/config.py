"""Service configuration: a single JSON document.

Environment variables are consulted only for provider credentials, via the
credential_env name configured per provider.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..answer.generate import RemoteGenerator, StubGenerator
from ..errors import ConfigError
from ..rerank import LexicalReranker, RemoteReranker
from ..vector.embedding import HashEmbedder, RemoteEmbedder

_PROVIDER_TYPES = ("stub", "remote")


@dataclass(frozen=True)
class ProviderSettings:
    type: str = "stub"
    endpoint: str = ""
    credential_env: str = ""
    dim: int = 64  # embedding providers only
    seed: int = 0  # stub embedder only
    delta_size: int = 32  # stub generator only

    def validate(self, role: str) -> None:
        if self.type not in _PROVIDER_TYPES:
            raise ConfigError(f"{role} provider type must be one of {_PROVIDER_TYPES}, got {self.type!r}")
        if self.type == "remote" and not self.endpoint:
            raise ConfigError(f"{role} provider is remote but has no endpoint")

    def credential(self) -> Optional[str]:
        if not self.credential_env:
            return None
        value = os.environ.get(self.credential_env)
        if value is None:
            raise ConfigError(f"credential env var {self.credential_env} is not set")
        return value


@dataclass(frozen=True)
class TokenInfo:
    user_id: str
    admin: bool = False


@dataclass(frozen=True)
class ServiceConfig:
    corpus_path: str
    index_path: str
    pre_rerank_n: int = 100
    rerank_k: int = 30
    listen: str = "127.0.0.1:8000"
    max_upload_bytes: int = 1 << 20
    embed: ProviderSettings = field(default_factory=ProviderSettings)
    rerank: ProviderSettings = field(default_factory=ProviderSettings)
    generate: ProviderSettings = field(default_factory=ProviderSettings)
    tokens: dict[str, TokenInfo] = field(default_factory=dict)
    query_log_path: str = ""
    vote_log_path: str = ""

    def validate(self) -> None:
        if self.rerank_k < 1:
            raise ConfigError("rerank_k must be at least 1")
        if self.pre_rerank_n < self.rerank_k:
            raise ConfigError("pre_rerank_n must be >= rerank_k")
        self.embed.validate("embed")
        self.rerank.validate("rerank")
        self.generate.validate("generate")


def _provider_settings(raw: dict, role: str) -> ProviderSettings:
    known = {"type", "endpoint", "credential_env", "dim", "seed", "delta_size"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown keys in {role} provider config: {sorted(unknown)}")
    return ProviderSettings(**raw)


def load_config(path: Path | str) -> ServiceConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    for required in ("corpus_path", "index_path"):
        if not raw.get(required):
            raise ConfigError(f"config is missing {required}")

    providers = raw.get("providers", {})
    auth = raw.get("auth", {})
    tokens = {}
    for token, info in (auth.get("tokens") or {}).items():
        tokens[token] = TokenInfo(user_id=info["user_id"], admin=bool(info.get("admin", False)))

    # Paths are resolved relative to the config file's directory.
    base = path.parent

    def _resolve(p: str) -> str:
        return str((base / p).resolve()) if p and not Path(p).is_absolute() else p

    config = ServiceConfig(
        corpus_path=_resolve(raw["corpus_path"]),
        index_path=_resolve(raw["index_path"]),
        pre_rerank_n=int(raw.get("pre_rerank_n", 100)),
        rerank_k=int(raw.get("rerank_k", 30)),
        listen=raw.get("listen", "127.0.0.1:8000"),
        max_upload_bytes=int(raw.get("max_upload_bytes", 1 << 20)),
        embed=_provider_settings(providers.get("embed", {}), "embed"),
        rerank=_provider_settings(providers.get("rerank", {}), "rerank"),
        generate=_provider_settings(providers.get("generate", {}), "generate"),
        tokens=tokens,
        query_log_path=_resolve(raw.get("query_log_path", "")),
        vote_log_path=_resolve(raw.get("vote_log_path", "")),
    )
    config.validate()
    return config


def build_embedder(config: ServiceConfig):
    s = config.embed
    if s.type == "stub":
        return HashEmbedder(dim=s.dim, seed=s.seed)
    return RemoteEmbedder(endpoint=s.endpoint, dim=s.dim, token=s.credential())


def build_reranker(config: ServiceConfig):
    s = config.rerank
    if s.type == "stub":
        return LexicalReranker()
    return RemoteReranker(endpoint=s.endpoint, token=s.credential())


def build_generator(config: ServiceConfig):
    s = config.generate
    if s.type == "stub":
        return StubGenerator(delta_size=s.delta_size)
    return RemoteGenerator(endpoint=s.endpoint, token=s.credential())
