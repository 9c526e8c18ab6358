"""Query logging, votes, usage metrics, and query categorization."""

from .log import DownvoteReason, FeedbackLog, QueryRecord, Vote, VoteDirection
from .metrics import (
    LatencyStats,
    category_histogram,
    helpfulness_score,
    latency_stats,
    vote_rate,
)
from .categorize import QueryCategory, categorize_query, DEFAULT_RULES

__all__ = [
    "DownvoteReason",
    "FeedbackLog",
    "QueryRecord",
    "Vote",
    "VoteDirection",
    "LatencyStats",
    "category_histogram",
    "helpfulness_score",
    "latency_stats",
    "vote_rate",
    "QueryCategory",
    "categorize_query",
    "DEFAULT_RULES",
]
