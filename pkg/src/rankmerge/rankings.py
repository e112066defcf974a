"""Model runs, rank vectors and the top-n operator.

A *run* is one model's output over every question: either raw scores
(higher is better) or 1-based rank vectors.  Everything downstream works
on ranks; scores are converted once, lazily, with ties broken by
ascending candidate index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import UnknownModelError, UnknownQuestionError, ValidationError
from .jsonl import Source, dumps_record, read_records, source_name

Kind = Literal["scores", "ranks"]
KINDS: tuple[str, ...] = ("scores", "ranks")


@dataclass(frozen=True)
class RankVector:
    """1-based ranks indexed by candidate: ``ranks[c]`` is the position of candidate ``c``."""

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.ranks)
        if n == 0:
            raise ValidationError("rank vector is empty")
        if sorted(self.ranks) != list(range(1, n + 1)):
            raise ValidationError(f"ranks are not a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.ranks)

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Candidate indices from best (rank 1) to worst."""
        order = [0] * len(self.ranks)
        for cand, r in enumerate(self.ranks):
            order[r - 1] = cand
        return tuple(order)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "RankVector":
        """Inverse of :attr:`order`; ``order`` must be a permutation of ``0..n-1``."""
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ValidationError(f"order is not a permutation of 0..{n - 1}")
        ranks = [0] * n
        for pos, cand in enumerate(order):
            ranks[cand] = pos + 1
        return cls(tuple(ranks))


def scores_to_ranks(scores: Sequence[float]) -> RankVector:
    """Rank candidates by descending score; equal scores go to the lower index first.

    >>> scores_to_ranks([0.9, 0.1, 0.5]).ranks
    (1, 3, 2)
    >>> scores_to_ranks([0.5, 0.5]).ranks
    (1, 2)
    """
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("scores must be a non-empty vector")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("scores contain non-finite values")
    # Stable sort on the negated scores keeps ascending index among ties.
    order = np.argsort(-arr, kind="stable")
    ranks = np.empty(arr.size, dtype=np.int64)
    ranks[order] = np.arange(1, arr.size + 1)
    return RankVector(tuple(int(r) for r in ranks))


@dataclass(frozen=True)
class ModelRun:
    """One model's per-question output.

    ``per_question`` maps question_id to a score vector (``kind="scores"``)
    or a 1-based rank vector (``kind="ranks"``).  Insertion order is kept.
    """

    model_id: str
    kind: Kind
    per_question: Mapping[str, tuple[float, ...] | tuple[int, ...]]
    _cache: dict[str, RankVector] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"run kind must be one of {KINDS}, got {self.kind!r}")
        frozen = {}
        for qid, vec in self.per_question.items():
            vec = tuple(vec)
            if self.kind == "ranks":
                if not all(isinstance(r, (int, np.integer)) or float(r).is_integer() for r in vec):
                    raise ValidationError(f"model {self.model_id!r}, question {qid!r}: ranks must be integers")
                vec = tuple(int(r) for r in vec)
                try:
                    self._cache[qid] = RankVector(vec)
                except ValidationError as exc:
                    raise ValidationError(f"model {self.model_id!r}, question {qid!r}: {exc}") from None
            else:
                if not vec or not all(math.isfinite(x) for x in vec):
                    raise ValidationError(
                        f"model {self.model_id!r}, question {qid!r}: scores must be non-empty and finite"
                    )
            frozen[qid] = vec
        object.__setattr__(self, "per_question", frozen)

    def __contains__(self, question_id: str) -> bool:
        return question_id in self.per_question

    @property
    def question_ids(self) -> list[str]:
        return list(self.per_question)

    def rank_vector(self, question_id: str) -> RankVector:
        try:
            return self._cache[question_id]
        except KeyError:
            pass
        try:
            vec = self.per_question[question_id]
        except KeyError:
            raise UnknownQuestionError(question_id, f"run {self.model_id!r}") from None
        rv = scores_to_ranks(vec)
        self._cache[question_id] = rv
        return rv

    def scores(self, question_id: str) -> tuple[float, ...]:
        if self.kind != "scores":
            raise ValidationError(f"run {self.model_id!r} carries ranks, scores required")
        try:
            return self.per_question[question_id]  # type: ignore[return-value]
        except KeyError:
            raise UnknownQuestionError(question_id, f"run {self.model_id!r}") from None

    def tie_fraction(self) -> float:
        """Fraction of questions whose score vector contains at least one tie (0 for rank runs)."""
        if self.kind == "ranks" or not self.per_question:
            return 0.0
        tied = sum(1 for vec in self.per_question.values() if len(set(vec)) < len(vec))
        return tied / len(self.per_question)


def get_run(runs: Mapping[str, ModelRun], model_id: str) -> ModelRun:
    try:
        return runs[model_id]
    except KeyError:
        raise UnknownModelError(model_id) from None


def top_n(runs: Mapping[str, ModelRun], model_id: str, n: int, question_id: str) -> frozenset[int]:
    """Candidates at ranks ``1..n`` under ``model_id`` for one question.

    ``n`` larger than the candidate count is clamped.
    """
    if n < 0:
        raise ValidationError("n must be nonnegative")
    order = get_run(runs, model_id).rank_vector(question_id).order
    return frozenset(order[:n])


def runs_by_id(runs: Iterable[ModelRun]) -> dict[str, ModelRun]:
    out: dict[str, ModelRun] = {}
    for run in runs:
        if run.model_id in out:
            raise ValidationError(f"duplicate model_id {run.model_id!r}")
        out[run.model_id] = run
    return out


# -- prediction files ------------------------------------------------------


def load_run(source: Source) -> ModelRun:
    """Read a prediction file.

    The first record is a header ``{"model_id": ..., "kind": "scores"|"ranks"}``;
    each following record is ``{"question_id": ..., "scores": [...]}`` or
    ``{"question_id": ..., "ranks": [...]}`` matching the header kind.
    """
    name = source_name(source)
    model_id: str | None = None
    kind: str | None = None
    per_question: dict[str, tuple] = {}
    for lineno, rec in read_records(source):
        if model_id is None:
            if "question_id" in rec:
                raise ValidationError("missing run header (model_id, kind)", line=lineno, source=name)
            model_id, kind = rec.get("model_id"), rec.get("kind")
            if not isinstance(model_id, str) or not model_id:
                raise ValidationError("header model_id must be a non-empty string", line=lineno, source=name)
            if kind not in KINDS:
                raise ValidationError(f"header kind must be one of {KINDS}", line=lineno, source=name)
            continue
        qid = rec.get("question_id")
        if not isinstance(qid, str):
            raise ValidationError("question_id must be a string", line=lineno, source=name)
        present = [k for k in KINDS if k in rec]
        if len(present) != 1:
            raise ValidationError("record needs exactly one of 'scores' or 'ranks'", line=lineno, source=name)
        if present[0] != kind:
            raise ValidationError(
                f"mixed kinds: header declares {kind!r} but record carries {present[0]!r}",
                line=lineno,
                source=name,
            )
        if qid in per_question:
            raise ValidationError(f"duplicate question_id {qid!r}", line=lineno, source=name)
        vec = rec[kind]
        if not isinstance(vec, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in vec
        ):
            raise ValidationError(f"{kind} must be an array of numbers", line=lineno, source=name)
        try:
            ModelRun("_", kind, {qid: tuple(vec)})  # type: ignore[arg-type]
        except ValidationError as exc:
            raise ValidationError(exc.message.replace("model '_', ", ""), line=lineno, source=name) from None
        per_question[qid] = tuple(vec)
    if model_id is None:
        raise ValidationError("empty prediction file (no header)", source=name)
    return ModelRun(model_id, kind, per_question)  # type: ignore[arg-type]


def dumps_run(run: ModelRun) -> str:
    lines = [dumps_record({"model_id": run.model_id, "kind": run.kind})]
    for qid, vec in run.per_question.items():
        lines.append(dumps_record({"question_id": qid, run.kind: list(vec)}))
    return "\n".join(lines) + "\n"
