"""Exception hierarchy shared by every rankmerge module."""

from __future__ import annotations


class RankMergeError(Exception):
    """Base class for all errors raised by rankmerge."""


class ValidationError(RankMergeError, ValueError):
    """Input data violates a documented invariant.

    ``line`` is the 1-based line number in the source file, when known.
    """

    def __init__(self, message: str, *, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        prefix = ""
        if source is not None:
            prefix = f"{source}:"
        if line is not None:
            prefix = f"{prefix}{line}: " if prefix else f"line {line}: "
        elif prefix:
            prefix += " "
        super().__init__(prefix + message)
        self.message = message


class UnknownQuestionError(ValidationError):
    def __init__(self, question_id: str, where: str = ""):
        self.question_id = question_id
        suffix = f" in {where}" if where else ""
        super().__init__(f"unknown question_id {question_id!r}{suffix}")


class UnknownModelError(ValidationError):
    def __init__(self, model_id: str):
        self.model_id = model_id
        super().__init__(f"unknown model_id {model_id!r}")


class RankProductOverflow(RankMergeError, OverflowError):
    """Rank product exceeded signed 64-bit range; the configuration is too extreme."""
