"""Seeded synthetic corpora with controllable MRR- and NDCG-model quality.

Stands in for real model outputs when exercising the ensemble end to end.
Per question:

* the human answer gets relevance 1 and a random subset of other
  candidates gets relevance in {1/3, 2/3, 1};
* each MRR model puts the human answer first with probability
  ``mrr_fidelity``, otherwise at a geometrically distributed depth, and
  orders the other candidates by a weak relevance signal plus noise;
* the NDCG model scores ``f * relevance + (1 - f) * gaussian_noise`` with
  ``f = ndcg_fidelity``, so it knows which answers are acceptable but not
  which one the human gave.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, QuestionRecord
from .errors import ValidationError
from .rankings import ModelRun

RELEVANCE_LEVELS = (1.0 / 3.0, 2.0 / 3.0, 1.0)
# Cap on extra relevant candidates per question, and the weight of the
# relevance signal inside MRR-model scores.
MAX_EXTRA_RELEVANT = 12
MRR_RELEVANCE_WEIGHT = 0.25
# Success probability of the geometric depth for a missed human answer.
MISS_DEPTH_P = 0.3


@dataclass(frozen=True)
class SynthSpec:
    d: int
    n: int
    n_m: int
    mrr_fidelity: float
    ndcg_fidelity: float
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("d", "n", "n_m"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ValidationError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("mrr_fidelity", "ndcg_fidelity"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must lie in [0, 1], got {v!r}")
        if not isinstance(self.seed, int) or not (-(2**63) <= self.seed < 2**64):
            raise ValidationError("seed must be a 64-bit integer")


def mrr_model_id(i: int) -> str:
    return f"mrr{i + 1}"


NDCG_MODEL_ID = "ndcg"


def generate_synthetic(spec: SynthSpec) -> tuple[Dataset, list[ModelRun]]:
    """Return the dataset and ``n_m`` MRR runs followed by one NDCG run, all score-kind.

    Bit-identical for identical ``spec``.
    """
    rng = np.random.default_rng(spec.seed % 2**64)
    n = spec.n
    width = len(str(spec.d - 1))
    questions: list[QuestionRecord] = []
    mrr_scores: list[dict[str, tuple[float, ...]]] = [{} for _ in range(spec.n_m)]
    ndcg_scores: dict[str, tuple[float, ...]] = {}
    levels = np.array(RELEVANCE_LEVELS)

    for qi in range(spec.d):
        qid = f"q{qi:0{width}d}"
        gt = int(rng.integers(n))
        rel = np.zeros(n)
        others = np.array([c for c in range(n) if c != gt], dtype=np.int64)
        n_extra = int(rng.integers(0, min(n - 1, MAX_EXTRA_RELEVANT) + 1))
        if n_extra:
            picked = rng.choice(others, size=n_extra, replace=False)
            rel[picked] = levels[rng.integers(0, len(levels), size=n_extra)]
        rel[gt] = 1.0
        questions.append(QuestionRecord(qid, n, gt, tuple(float(x) for x in rel)))

        for m in range(spec.n_m):
            signal = MRR_RELEVANCE_WEIGHT * rel[others] + rng.random(n - 1)
            ranked_others = others[np.argsort(-signal, kind="stable")]
            if rng.random() < spec.mrr_fidelity:
                depth = 0
            else:
                depth = min(n - 1, int(rng.geometric(MISS_DEPTH_P)))
            placed = np.insert(ranked_others, depth, gt)
            scores = np.empty(n)
            scores[placed] = (n - np.arange(n)) / n
            mrr_scores[m][qid] = tuple(float(x) for x in scores)

        f = spec.ndcg_fidelity
        noise = rng.standard_normal(n)
        ndcg_scores[qid] = tuple(float(x) for x in f * rel + (1.0 - f) * noise)

    runs = [ModelRun(mrr_model_id(m), "scores", mrr_scores[m]) for m in range(spec.n_m)]
    runs.append(ModelRun(NDCG_MODEL_ID, "scores", ndcg_scores))
    return Dataset(tuple(questions)), runs
