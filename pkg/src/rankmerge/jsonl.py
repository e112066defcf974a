"""Newline-delimited JSON reading and atomic writing."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import IO, Any, Iterable, Iterator, Union

from .errors import ValidationError

Source = Union[str, os.PathLike, IO[bytes], IO[str], Iterable[str]]


def source_name(source: Source) -> str | None:
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    name = getattr(source, "name", None)
    return name if isinstance(name, str) else None


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, (str, os.PathLike)):
        path = Path(source)
        try:
            fh = path.open("r", encoding="utf-8", newline="\n")
        except FileNotFoundError:
            raise ValidationError(f"file not found: {path}") from None
        except OSError as exc:
            raise ValidationError(f"cannot open {path}: {exc.strerror}") from None
        with fh:
            yield from fh
        return
    if hasattr(source, "read"):
        data = source.read()  # type: ignore[union-attr]
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        # Not splitlines(): JSON strings may hold raw U+0085 / U+2028.
        yield from data.split("\n")
        return
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line


def read_records(source: Source) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield ``(line_number, record)`` for each non-blank line.

    Every record must be a JSON object; anything else raises
    :class:`ValidationError` carrying the 1-based line number.
    """
    name = source_name(source)
    for lineno, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed record: {exc.msg}", line=lineno, source=name) from None
        if not isinstance(obj, dict):
            raise ValidationError("malformed record: expected a JSON object", line=lineno, source=name)
        yield lineno, obj


def dumps_record(record: dict[str, Any]) -> str:
    # Key order is the caller's insertion order; no sort so output stays readable.
    return json.dumps(record, ensure_ascii=False, separators=(", ", ": "))


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
