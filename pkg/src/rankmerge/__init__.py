"""Two-step rank ensemble of MRR- and NDCG-optimized rankers, plus retrieval metrics."""

from .dataset import Dataset, QuestionRecord, dumps_dataset, load_dataset, validate_run_against_dataset
from .ensemble import (
    EnsembleConfig,
    MergedRanking,
    Provenance,
    high_certainty_set,
    mrr_candidate_set,
    mrr_step_rank,
    naive_blend,
    ndcg_agreement_set,
    ndcg_step_key,
    top_answers_set,
    two_step_rank,
)
from .errors import RankMergeError, RankProductOverflow, UnknownModelError, UnknownQuestionError, ValidationError
from .metrics import MetricsReport, evaluate, mean_rank, mrr, ndcg_question, recall_at_k
from .rankings import ModelRun, RankVector, dumps_run, load_run, scores_to_ranks, top_n

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EnsembleConfig",
    "MergedRanking",
    "MetricsReport",
    "ModelRun",
    "Provenance",
    "QuestionRecord",
    "RankMergeError",
    "RankProductOverflow",
    "RankVector",
    "UnknownModelError",
    "UnknownQuestionError",
    "ValidationError",
    "dumps_dataset",
    "dumps_run",
    "evaluate",
    "high_certainty_set",
    "load_dataset",
    "load_run",
    "mean_rank",
    "mrr",
    "mrr_candidate_set",
    "mrr_step_rank",
    "naive_blend",
    "ndcg_agreement_set",
    "ndcg_question",
    "ndcg_step_key",
    "recall_at_k",
    "scores_to_ranks",
    "top_answers_set",
    "top_n",
    "two_step_rank",
    "validate_run_against_dataset",
]
