"""Two-step rank ensemble of MRR-optimized models and one NDCG-optimized model.

Step one collects a small candidate set per question, the union of

* ``H``: candidates inside the top-``rho_h`` of *every* MRR model,
* ``T``: candidates inside the top-``rho_t`` of *any* MRR model,
* ``N``: candidates inside the NDCG model's top-``rho_nn`` that also sit
  inside some MRR model's top-``rho_nm``,

and orders it by the product of the candidate's MRR-model ranks.  Step
two orders every other candidate by ``r_ndcg ** p * r_primary`` and
appends it.  Ties in either step fall back to the primary MRR model's
rank, then the candidate index.

Only ranks are consumed, so any score-emitting model can participate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .errors import RankProductOverflow, ValidationError
from .rankings import ModelRun, RankVector, get_run, scores_to_ranks, top_n

INT64_MAX = 2**63 - 1


class Provenance(str, Enum):
    H = "H"
    T = "T"
    N = "N"
    REMAINDER = "R"

    def __str__(self) -> str:
        return self.value


def _nonneg_int(name: str, value: Any) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{name}: nonnegative integer required")
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int) or value < 0:
        raise ValidationError(f"{name}: nonnegative integer required, got {value!r}")
    return value


@dataclass(frozen=True)
class EnsembleConfig:
    """Hyperparameters and model roles for the two-step ensemble.

    Defaults are the tuned values ``rho_h=3, rho_t=1, rho_nn=5, rho_nm=10,
    p=3``.  ``primary_mrr_model`` defaults to the first MRR model.
    """

    mrr_model_ids: tuple[str, ...]
    ndcg_model_id: str
    primary_mrr_model: str | None = None
    rho_h: int = 3
    rho_t: int = 1
    rho_nn: int = 5
    rho_nm: int = 10
    p: float = 3.0
    enable_H: bool = True
    enable_T: bool = True
    enable_N: bool = True

    def __post_init__(self) -> None:
        ids = tuple(self.mrr_model_ids)
        if not ids:
            raise ValidationError("at least one MRR model is required")
        if len(set(ids)) != len(ids):
            raise ValidationError("mrr_model_ids contains duplicates")
        object.__setattr__(self, "mrr_model_ids", ids)
        primary = self.primary_mrr_model if self.primary_mrr_model is not None else ids[0]
        if primary not in ids:
            raise ValidationError(f"primary MRR model {primary!r} is not among the MRR models {list(ids)}")
        object.__setattr__(self, "primary_mrr_model", primary)
        for name in ("rho_h", "rho_t", "rho_nn", "rho_nm"):
            object.__setattr__(self, name, _nonneg_int(name, getattr(self, name)))
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p) or p <= 0:
            raise ValidationError(f"p: positive real required, got {p!r}")
        object.__setattr__(self, "p", float(p))

    @property
    def n_m(self) -> int:
        return len(self.mrr_model_ids)

    @property
    def any_subset_enabled(self) -> bool:
        return self.enable_H or self.enable_T or self.enable_N

    def model_ids(self) -> list[str]:
        ids = list(self.mrr_model_ids)
        if self.ndcg_model_id not in ids:
            ids.append(self.ndcg_model_id)
        return ids


@dataclass(frozen=True)
class MergedRanking:
    """Final ordering for one question.

    ``order[0]`` is the candidate placed first.  ``provenance[c]`` tags
    candidate ``c`` with the highest-priority subset it belongs to
    (H over T over N), or ``REMAINDER``.
    """

    question_id: str
    order: tuple[int, ...]
    provenance: tuple[Provenance, ...]
    mrr_set_size: int = field(init=False)

    def __post_init__(self) -> None:
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValidationError(f"question {self.question_id!r}: merged order is not a permutation")
        if len(self.provenance) != n:
            raise ValidationError(f"question {self.question_id!r}: provenance length mismatch")
        size = sum(1 for tag in self.provenance if tag is not Provenance.REMAINDER)
        if any(self.provenance[c] is Provenance.REMAINDER for c in self.order[:size]):
            raise ValidationError(f"question {self.question_id!r}: remainder candidate ahead of the MRR set")
        object.__setattr__(self, "mrr_set_size", size)

    @property
    def rank_vector(self) -> RankVector:
        return RankVector.from_order(self.order)

    @property
    def mrr_set(self) -> tuple[int, ...]:
        return self.order[: self.mrr_set_size]

    def to_record(self) -> dict[str, Any]:
        return {
            "question_id": self.question_id,
            "order": list(self.order),
            "provenance": [tag.value for tag in self.provenance],
        }


# -- step one: candidate subsets ---------------------------------------------


def high_certainty_set(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str) -> frozenset[int]:
    """Candidates every MRR model places within its top ``rho_h``."""
    tops = [top_n(runs, m, config.rho_h, question_id) for m in config.mrr_model_ids]
    if not config.enable_H:
        return frozenset()
    return frozenset.intersection(*tops)


def top_answers_set(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str) -> frozenset[int]:
    """Candidates some MRR model places within its top ``rho_t``."""
    tops = [top_n(runs, m, config.rho_t, question_id) for m in config.mrr_model_ids]
    if not config.enable_T:
        return frozenset()
    return frozenset().union(*tops)


def ndcg_agreement_set(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str) -> frozenset[int]:
    """NDCG-model top-``rho_nn`` candidates that some MRR model also has in its top ``rho_nm``."""
    ndcg_top = top_n(runs, config.ndcg_model_id, config.rho_nn, question_id)
    mrr_tops = [top_n(runs, m, config.rho_nm, question_id) for m in config.mrr_model_ids]
    if not config.enable_N:
        return frozenset()
    return ndcg_top & frozenset().union(*mrr_tops)


def mrr_candidate_set(
    runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str
) -> dict[int, Provenance]:
    """Union of the enabled subsets, each member tagged with its highest-priority subset.

    Returned in ascending candidate order.
    """
    h = high_certainty_set(runs, config, question_id)
    t = top_answers_set(runs, config, question_id)
    nq = ndcg_agreement_set(runs, config, question_id)
    tags: dict[int, Provenance] = {}
    for cand in sorted(h | t | nq):
        if cand in h:
            tags[cand] = Provenance.H
        elif cand in t:
            tags[cand] = Provenance.T
        else:
            tags[cand] = Provenance.N
    return tags


# -- ordering keys --------------------------------------------------------------


def _rank_product(ranks: Iterable[int]) -> int:
    product = 1
    for r in ranks:
        product *= r
        if product > INT64_MAX:
            raise RankProductOverflow("rank product exceeds 64-bit range; too many MRR models or candidates")
    return product


def mrr_step_rank(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str, candidate: int) -> int:
    """Product of the candidate's ranks across all MRR models (exact integer)."""
    ranks = []
    for m in config.mrr_model_ids:
        rv = get_run(runs, m).rank_vector(question_id)
        if not 0 <= candidate < rv.n:
            raise ValidationError(f"candidate {candidate} out of range for question {question_id!r}")
        ranks.append(rv.ranks[candidate])
    return _rank_product(ranks)


def _ndcg_key_exact(r_ndcg: int, r_primary: int, p: float) -> int | float:
    # Integral exponents stay in exact integer arithmetic so large ranks
    # never collapse into spurious float ties.
    if p.is_integer():
        return r_ndcg ** int(p) * r_primary
    return r_ndcg**p * r_primary


def ndcg_step_key(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str, candidate: int) -> float:
    """``r_ndcg ** p * r_primary`` on full-list ranks; smaller is better."""
    nv = get_run(runs, config.ndcg_model_id).rank_vector(question_id)
    pv = get_run(runs, config.primary_mrr_model).rank_vector(question_id)  # type: ignore[arg-type]
    if not 0 <= candidate < nv.n:
        raise ValidationError(f"candidate {candidate} out of range for question {question_id!r}")
    return float(_ndcg_key_exact(nv.ranks[candidate], pv.ranks[candidate], config.p))


# -- full ranking -----------------------------------------------------------------


def two_step_rank(runs: Mapping[str, ModelRun], config: EnsembleConfig, question_id: str) -> MergedRanking:
    mrr_ranks = [get_run(runs, m).rank_vector(question_id).ranks for m in config.mrr_model_ids]
    primary = get_run(runs, config.primary_mrr_model).rank_vector(question_id).ranks  # type: ignore[arg-type]
    ndcg = get_run(runs, config.ndcg_model_id).rank_vector(question_id).ranks
    n = len(primary)
    if any(len(r) != n for r in mrr_ranks) or len(ndcg) != n:
        raise ValidationError(f"question {question_id!r}: runs disagree on the candidate count")

    tags = mrr_candidate_set(runs, config, question_id)
    first = sorted(tags, key=lambda c: (_rank_product(r[c] for r in mrr_ranks), primary[c], c))
    rest = sorted(
        (c for c in range(n) if c not in tags),
        key=lambda c: (_ndcg_key_exact(ndcg[c], primary[c], config.p), primary[c], c),
    )
    provenance = tuple(tags.get(c, Provenance.REMAINDER) for c in range(n))
    return MergedRanking(question_id, tuple(first + rest), provenance)


def naive_blend(mrr_run: ModelRun, ndcg_run: ModelRun, alpha: float, question_id: str) -> RankVector:
    """Rank ``alpha * S_mrr + (1 - alpha) * S_ndcg``; both runs must carry scores."""
    if not (0.0 <= alpha <= 1.0):
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha!r}")
    s_m = mrr_run.scores(question_id)
    s_n = ndcg_run.scores(question_id)
    if len(s_m) != len(s_n):
        raise ValidationError(f"question {question_id!r}: score vectors differ in length")
    return scores_to_ranks([alpha * a + (1.0 - alpha) * b for a, b in zip(s_m, s_n)])


# -- batch helpers ------------------------------------------------------------------


def _map(fn, items: Sequence[str], threads: int) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def ensemble_all(
    runs: Mapping[str, ModelRun], config: EnsembleConfig, question_ids: Sequence[str], threads: int = 1
) -> list[MergedRanking]:
    """:func:`two_step_rank` for every question, in the given order."""
    return _map(lambda q: two_step_rank(runs, config, q), question_ids, threads)


def blend_all(
    mrr_run: ModelRun, ndcg_run: ModelRun, alpha: float, question_ids: Sequence[str], threads: int = 1
) -> dict[str, RankVector]:
    ranked = _map(lambda q: naive_blend(mrr_run, ndcg_run, alpha, q), question_ids, threads)
    return dict(zip(question_ids, ranked))
