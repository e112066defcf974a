"""Evaluation corpus: questions, candidate counts, sparse and dense annotations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .errors import UnknownQuestionError, ValidationError
from .jsonl import Source, dumps_record, read_records, source_name
from .rankings import ModelRun


@dataclass(frozen=True)
class QuestionRecord:
    """One question.

    Candidates are identified by position ``0..candidate_count-1``.
    ``relevance[c]`` is the fraction of annotators who marked candidate
    ``c`` correct; ``candidates`` holds optional display strings.
    """

    question_id: str
    candidate_count: int
    gt_index: int
    relevance: tuple[float, ...] | None = None
    candidates: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.question_id, str):
            raise ValidationError("question_id must be a string")
        if isinstance(self.candidate_count, bool) or not isinstance(self.candidate_count, int):
            raise ValidationError("candidate_count must be an integer")
        if self.candidate_count < 1:
            raise ValidationError("candidate_count must be >= 1")
        if isinstance(self.gt_index, bool) or not isinstance(self.gt_index, int):
            raise ValidationError("gt_index must be an integer")
        if not 0 <= self.gt_index < self.candidate_count:
            raise ValidationError(
                f"gt_index out of range: {self.gt_index} not in [0, {self.candidate_count})"
            )
        if self.relevance is not None:
            rel = tuple(float(x) for x in self.relevance)
            if len(rel) != self.candidate_count:
                raise ValidationError(
                    f"relevance length mismatch: {len(rel)} != candidate_count {self.candidate_count}"
                )
            for x in rel:
                if not (math.isfinite(x) and 0.0 <= x <= 1.0):
                    raise ValidationError(f"relevance entry outside [0,1]: {x!r}")
            object.__setattr__(self, "relevance", rel)
        if self.candidates is not None:
            cands = tuple(self.candidates)
            if len(cands) != self.candidate_count or not all(isinstance(c, str) for c in cands):
                raise ValidationError("candidates must be candidate_count strings")
            object.__setattr__(self, "candidates", cands)

    def label(self, candidate: int) -> str:
        if self.candidates is not None:
            return self.candidates[candidate]
        return f"#{candidate}"

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "question_id": self.question_id,
            "candidate_count": self.candidate_count,
            "gt_index": self.gt_index,
        }
        if self.relevance is not None:
            rec["relevance"] = list(self.relevance)
        if self.candidates is not None:
            rec["candidates"] = list(self.candidates)
        return rec


@dataclass(frozen=True)
class Dataset:
    questions: tuple[QuestionRecord, ...]
    _index: dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        qs = tuple(self.questions)
        object.__setattr__(self, "questions", qs)
        for i, q in enumerate(qs):
            if q.question_id in self._index:
                raise ValidationError(f"duplicate question_id {q.question_id!r}")
            self._index[q.question_id] = i

    @property
    def d(self) -> int:
        return len(self.questions)

    def __len__(self) -> int:
        return len(self.questions)

    def __iter__(self) -> Iterator[QuestionRecord]:
        return iter(self.questions)

    def __contains__(self, question_id: object) -> bool:
        return question_id in self._index

    def __getitem__(self, question_id: str) -> QuestionRecord:
        try:
            return self.questions[self._index[question_id]]
        except KeyError:
            raise UnknownQuestionError(question_id, "dataset") from None

    @property
    def question_ids(self) -> list[str]:
        return [q.question_id for q in self.questions]

    @property
    def has_relevance(self) -> bool:
        return any(q.relevance is not None for q in self.questions)


_REQUIRED = ("question_id", "candidate_count", "gt_index")
_OPTIONAL = ("relevance", "candidates")


def load_dataset(source: Source) -> Dataset:
    """Parse an annotation file (one JSON object per line) into a :class:`Dataset`.

    Errors carry the offending line number.
    """
    name = source_name(source)
    questions: list[QuestionRecord] = []
    seen: set[str] = set()
    for lineno, rec in read_records(source):
        missing = [k for k in _REQUIRED if k not in rec]
        if missing:
            raise ValidationError(f"malformed record: missing {', '.join(missing)}", line=lineno, source=name)
        unknown = sorted(set(rec) - set(_REQUIRED) - set(_OPTIONAL))
        if unknown:
            raise ValidationError(f"malformed record: unknown keys {unknown}", line=lineno, source=name)
        rel = rec.get("relevance")
        if rel is not None and (
            not isinstance(rel, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in rel)
        ):
            raise ValidationError("malformed record: relevance must be an array of numbers", line=lineno, source=name)
        cands = rec.get("candidates")
        if cands is not None and not isinstance(cands, list):
            raise ValidationError("malformed record: candidates must be an array of strings", line=lineno, source=name)
        try:
            q = QuestionRecord(
                question_id=rec["question_id"],
                candidate_count=rec["candidate_count"],
                gt_index=rec["gt_index"],
                relevance=tuple(rel) if rel is not None else None,
                candidates=tuple(cands) if cands is not None else None,
            )
        except ValidationError as exc:
            raise ValidationError(exc.message, line=lineno, source=name) from None
        if q.question_id in seen:
            raise ValidationError(f"duplicate question_id {q.question_id!r}", line=lineno, source=name)
        seen.add(q.question_id)
        questions.append(q)
    return Dataset(tuple(questions))


def dumps_dataset(ds: Dataset) -> str:
    return "".join(dumps_record(q.to_record()) + "\n" for q in ds)


def validate_run_against_dataset(run: ModelRun, ds: Dataset) -> None:
    """Raise :class:`ValidationError` unless ``run`` covers exactly the dataset's questions
    with one correctly sized vector each."""
    for q in ds:
        if q.question_id not in run:
            raise ValidationError(f"run {run.model_id!r} is missing question {q.question_id!r}")
        got = len(run.per_question[q.question_id])
        if got != q.candidate_count:
            raise ValidationError(
                f"run {run.model_id!r}, question {q.question_id!r}: length mismatch "
                f"({got} values for {q.candidate_count} candidates)"
            )
    extra = [qid for qid in run.per_question if qid not in ds]
    if extra:
        raise ValidationError(f"run {run.model_id!r} has extra question {extra[0]!r} not in dataset")


def validate_runs(runs: Sequence[ModelRun], ds: Dataset) -> None:
    for run in runs:
        validate_run_against_dataset(run, ds)
