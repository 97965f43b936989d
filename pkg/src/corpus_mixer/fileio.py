"""Small file helpers: atomic writes and JSONL streaming."""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from .errors import MalformedRecord


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write text via a temp file + rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_json(path: str | Path, obj: Any, *, indent: int = 2) -> None:
    atomic_write_text(path, json.dumps(obj, indent=indent, sort_keys=True) + "\n")


def atomic_write_jsonl(path: str | Path, rows: Iterable[dict[str, Any]]) -> None:
    text = "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
    atomic_write_text(path, text)


def iter_jsonl(path: str | Path, *, skip_malformed: bool = False) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (line_number, object) pairs from a JSONL file.

    Malformed lines raise MalformedRecord unless skip_malformed is set,
    in which case they are silently dropped (callers count them via the
    line-number gaps if they care).
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                if skip_malformed:
                    continue
                raise MalformedRecord(f"invalid JSON ({exc.msg})", line_num, str(path)) from exc
            if not isinstance(obj, dict):
                if skip_malformed:
                    continue
                raise MalformedRecord("expected a JSON object", line_num, str(path))
            yield line_num, obj
