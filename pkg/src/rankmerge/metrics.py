"""Retrieval metrics over the human-derived answer's rank and dense relevance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .dataset import Dataset
from .errors import UnknownQuestionError, ValidationError
from .rankings import RankVector

DEFAULT_RECALL_KS: tuple[int, ...] = (1, 5, 10)


def _check_ranks(human_ranks: Sequence[int]) -> None:
    if len(human_ranks) == 0:
        raise ValidationError("no ranks given")
    for r in human_ranks:
        if r < 1:
            raise ValidationError(f"rank must be >= 1, got {r}")


def mrr(human_ranks: Sequence[int]) -> float:
    """Mean of ``1/r`` over questions.

    >>> mrr([1, 2, 4])
    0.5833333333333334
    """
    _check_ranks(human_ranks)
    return sum(1.0 / r for r in human_ranks) / len(human_ranks)


def recall_at_k(human_ranks: Sequence[int], k: int) -> float:
    if k < 1:
        raise ValidationError("k must be >= 1")
    _check_ranks(human_ranks)
    return sum(1 for r in human_ranks if r <= k) / len(human_ranks)


def mean_rank(human_ranks: Sequence[int]) -> float:
    _check_ranks(human_ranks)
    return sum(human_ranks) / len(human_ranks)


def _dcg(gains: Sequence[float]) -> float:
    total = 0.0
    for i, s in enumerate(gains, start=1):
        total += s / math.log2(i + 1)
    return total


def ndcg_question(predicted: RankVector, relevance: Sequence[float]) -> float:
    """NDCG cut at K, the number of candidates with positive relevance.

    DCG sums ``relevance / log2(position + 1)`` over the first K predicted
    positions; the ideal DCG does the same over relevance sorted
    descending.  Returns 0.0 when no candidate is relevant.
    """
    if len(relevance) != predicted.n:
        raise ValidationError(f"relevance length {len(relevance)} != ranking length {predicted.n}")
    for x in relevance:
        if not (0.0 <= x <= 1.0):
            raise ValidationError(f"relevance entry outside [0,1]: {x!r}")
    k = sum(1 for x in relevance if x > 0)
    if k == 0:
        return 0.0
    order = predicted.order
    dcg = _dcg([relevance[c] for c in order[:k]])
    idcg = _dcg(sorted(relevance, reverse=True)[:k])
    return dcg / idcg


@dataclass
class MetricsReport:
    mrr: float
    recall_at: dict[int, float]
    mean_rank: float
    d: int
    ndcg: float | None = None
    avg_mrr_set_size: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"mrr": self.mrr}
        for k, v in self.recall_at.items():
            out[f"r@{k}"] = v
        out["mean_rank"] = self.mean_rank
        out["ndcg"] = self.ndcg
        out["avg_set_size"] = self.avg_mrr_set_size
        out["d"] = self.d
        return out

    def as_table(self) -> str:
        rows = []
        for key, value in self.to_dict().items():
            if value is None:
                continue
            text = str(value) if isinstance(value, int) else f"{value:.6f}"
            rows.append((key, text))
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def human_ranks(rankings: Mapping[str, RankVector], ds: Dataset) -> list[int]:
    out = []
    for q in ds:
        try:
            rv = rankings[q.question_id]
        except KeyError:
            raise UnknownQuestionError(q.question_id, "rankings (coverage gap)") from None
        if rv.n != q.candidate_count:
            raise ValidationError(
                f"question {q.question_id!r}: ranking has {rv.n} entries for {q.candidate_count} candidates"
            )
        out.append(rv.ranks[q.gt_index])
    return out


def evaluate(
    rankings: Mapping[str, RankVector],
    ds: Dataset,
    *,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
    mrr_set_sizes: Mapping[str, int] | None = None,
) -> MetricsReport:
    """Score one ranking per question against ``ds``.

    Sums run left to right in dataset order, so results are reproducible
    bit for bit.

    NDCG is averaged over questions that carry relevance and omitted when
    none do.  With ``ndcg_skip_empty`` questions whose relevance is all
    zero are left out of the average instead of counting as 0.
    """
    if ds.d == 0:
        raise ValidationError("dataset is empty")
    ranks = human_ranks(rankings, ds)
    ks = sorted(set(int(k) for k in recall_ks))
    ndcgs = []
    for q in ds:
        if q.relevance is None:
            continue
        if ndcg_skip_empty and not any(x > 0 for x in q.relevance):
            continue
        ndcgs.append(ndcg_question(rankings[q.question_id], q.relevance))
    avg_size = None
    if mrr_set_sizes is not None:
        avg_size = sum(mrr_set_sizes[q.question_id] for q in ds) / ds.d
    return MetricsReport(
        mrr=mrr(ranks),
        recall_at={k: recall_at_k(ranks, k) for k in ks},
        mean_rank=mean_rank(ranks),
        d=ds.d,
        ndcg=sum(ndcgs) / len(ndcgs) if ndcgs else None,
        avg_mrr_set_size=avg_size,
    )
