"""Usage metrics over the query and vote logs.

Percentages round half-up to one decimal place; latency seconds round to
two. All functions return None instead of a fake zero when there is no
data to aggregate.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

from .log import QueryRecord, Vote, VoteDirection


def _round_half_up(value: Decimal, places: str) -> float:
    return float(value.quantize(Decimal(places), rounding=ROUND_HALF_UP))


def helpfulness_score(votes: Sequence[Vote]) -> Optional[float]:
    """100 * upvotes / (upvotes + downvotes), one decimal; None with no votes."""
    if not votes:
        return None
    up = sum(1 for v in votes if v.direction is VoteDirection.UP)
    return _round_half_up(Decimal(100 * up) / Decimal(len(votes)), "0.1")


def vote_rate(queries: Sequence[QueryRecord], votes: Sequence[Vote]) -> Optional[float]:
    """Percentage of queries that received at least one vote."""
    if not queries:
        return None
    voted = len({v.query_id for v in votes})
    return _round_half_up(Decimal(100 * voted) / Decimal(len(queries)), "0.1")


@dataclass(frozen=True)
class LatencyStats:
    mean_s: float
    p50_s: float
    p95_s: float
    count: int

    def to_record(self) -> dict:
        return {"mean_s": self.mean_s, "p50_s": self.p50_s, "p95_s": self.p95_s, "count": self.count}


def _nearest_rank(sorted_ms: list[int], percentile: int) -> int:
    rank = max(1, math.ceil(percentile / 100 * len(sorted_ms)))
    return sorted_ms[rank - 1]


def latency_stats(queries: Sequence[QueryRecord]) -> Optional[LatencyStats]:
    """Mean and nearest-rank percentiles of latency in seconds."""
    if not queries:
        return None
    values = sorted(q.latency_ms for q in queries)
    mean = Decimal(sum(values)) / (Decimal(len(values)) * 1000)
    return LatencyStats(
        mean_s=_round_half_up(mean, "0.01"),
        p50_s=_round_half_up(Decimal(_nearest_rank(values, 50)) / 1000, "0.01"),
        p95_s=_round_half_up(Decimal(_nearest_rank(values, 95)) / 1000, "0.01"),
        count=len(values),
    )


def category_histogram(queries: Sequence[QueryRecord]) -> dict[str, int]:
    counts = Counter(q.category.value for q in queries)
    return dict(sorted(counts.items()))
