"""Append-only JSONL logs for queries and votes.

Appends are serialized through a writer lock and flushed per record, with
an fsync every FSYNC_EVERY appends and on close. A crash can leave at most
one partial trailing line, which the loader drops, so a reload always
yields a prefix of the logical log.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Optional

from ..answer.prompts import AskMode
from ..errors import (
    DuplicateQueryIdError,
    DuplicateVoteError,
    FeedbackError,
    ReasonOnUpvoteError,
    UnknownQueryError,
)
from .categorize import QueryCategory

FSYNC_EVERY = 100


class VoteDirection(str, Enum):
    UP = "up"
    DOWN = "down"


class DownvoteReason(str, Enum):
    NOT_SPECIFIC = "not_specific"
    LACKED_AUTHORITIES = "lacked_authorities"
    INCORRECT_OR_MISLEADING = "incorrect_or_misleading"
    TOO_SIMPLISTIC = "too_simplistic"
    OVERCOMPLICATED = "overcomplicated"
    OUTDATED = "outdated"
    OTHER = "other"


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    user_id: str
    mode: AskMode
    text: str
    timestamp: str  # ISO-8601 UTC
    latency_ms: int
    category: QueryCategory
    grounding_resolved: int = 0
    grounding_violations: int = 0

    def __post_init__(self):
        if self.latency_ms < 0:
            raise FeedbackError("latency_ms must be non-negative")

    def to_record(self) -> dict:
        return {
            "query_id": self.query_id,
            "user_id": self.user_id,
            "mode": self.mode.value,
            "text": self.text,
            "timestamp": self.timestamp,
            "latency_ms": self.latency_ms,
            "category": self.category.value,
            "grounding": {
                "resolved": self.grounding_resolved,
                "violations": self.grounding_violations,
            },
        }

    @classmethod
    def from_record(cls, record: dict) -> "QueryRecord":
        grounding = record.get("grounding") or {}
        return cls(
            query_id=record["query_id"],
            user_id=record["user_id"],
            mode=AskMode(record["mode"]),
            text=record["text"],
            timestamp=record["timestamp"],
            latency_ms=int(record["latency_ms"]),
            category=QueryCategory(record["category"]),
            grounding_resolved=int(grounding.get("resolved", 0)),
            grounding_violations=int(grounding.get("violations", 0)),
        )


@dataclass(frozen=True)
class Vote:
    query_id: str
    user_id: str
    direction: VoteDirection
    reason: Optional[DownvoteReason] = None
    free_text: Optional[str] = None

    def to_record(self) -> dict:
        return {
            "query_id": self.query_id,
            "user_id": self.user_id,
            "direction": self.direction.value,
            "reason": self.reason.value if self.reason else None,
            "free_text": self.free_text,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Vote":
        reason = record.get("reason")
        return cls(
            query_id=record["query_id"],
            user_id=record["user_id"],
            direction=VoteDirection(record["direction"]),
            reason=DownvoteReason(reason) if reason else None,
            free_text=record.get("free_text"),
        )


def _read_jsonl(path: Path) -> list[dict]:
    """Parse a JSONL file, dropping a partial trailing line left by a crash."""
    records: list[dict] = []
    raw_lines = path.read_bytes().split(b"\n")
    for i, raw in enumerate(raw_lines):
        if not raw.strip():
            continue
        try:
            records.append(json.loads(raw.decode("utf-8")))
        except (json.JSONDecodeError, UnicodeDecodeError):
            if i == len(raw_lines) - 1:
                break  # torn final line: ignore
            raise FeedbackError(f"{path}: corrupt log line {i + 1}") from None
    return records


class _AppendFile:
    def __init__(self, path: Path):
        self._path = path
        self._fh: Optional[IO[str]] = None
        self._since_sync = 0

    def append(self, record: dict) -> None:
        if self._fh is None:
            self._fh = self._path.open("a", encoding="utf-8")
        self._fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._fh.flush()
        self._since_sync += 1
        if self._since_sync >= FSYNC_EVERY:
            import os

            os.fsync(self._fh.fileno())
            self._since_sync = 0

    def close(self) -> None:
        if self._fh is not None:
            import os

            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._fh.close()
            self._fh = None


class FeedbackLog:
    """In-memory view over the query and vote logs, with durable appends."""

    def __init__(self, query_path: Optional[Path | str] = None, vote_path: Optional[Path | str] = None):
        self._lock = threading.Lock()
        self._queries: dict[str, QueryRecord] = {}
        self._votes: list[Vote] = []
        self._vote_keys: set[tuple[str, str]] = set()
        self._query_file = _AppendFile(Path(query_path)) if query_path else None
        self._vote_file = _AppendFile(Path(vote_path)) if vote_path else None
        if query_path and Path(query_path).exists():
            for record in _read_jsonl(Path(query_path)):
                self._add_query(QueryRecord.from_record(record))
        if vote_path and Path(vote_path).exists():
            for record in _read_jsonl(Path(vote_path)):
                self._add_vote(Vote.from_record(record))

    def _add_query(self, record: QueryRecord) -> None:
        if record.query_id in self._queries:
            raise DuplicateQueryIdError(f"duplicate query id: {record.query_id!r}")
        self._queries[record.query_id] = record

    def _add_vote(self, vote: Vote) -> None:
        if vote.query_id not in self._queries:
            raise UnknownQueryError(f"vote references unknown query: {vote.query_id!r}")
        key = (vote.query_id, vote.user_id)
        if key in self._vote_keys:
            raise DuplicateVoteError(f"user {vote.user_id!r} already voted on {vote.query_id!r}")
        if vote.direction is VoteDirection.UP and vote.reason is not None:
            raise ReasonOnUpvoteError("reason is only valid on downvotes")
        self._votes.append(vote)
        self._vote_keys.add(key)

    def record_query(self, record: QueryRecord) -> None:
        with self._lock:
            self._add_query(record)
            if self._query_file:
                self._query_file.append(record.to_record())

    def record_vote(self, vote: Vote) -> None:
        with self._lock:
            self._add_vote(vote)
            if self._vote_file:
                self._vote_file.append(vote.to_record())

    def queries(self) -> list[QueryRecord]:
        return list(self._queries.values())

    def votes(self) -> list[Vote]:
        return list(self._votes)

    def votes_for(self, query_id: str) -> list[Vote]:
        return [v for v in self._votes if v.query_id == query_id]

    @property
    def query_count(self) -> int:
        return len(self._queries)

    def close(self) -> None:
        if self._query_file:
            self._query_file.close()
        if self._vote_file:
            self._vote_file.close()
