"""Plain-text set files.

Line 1 is ``dim <n>``; every further line holds one point in ``0x``-prefixed
hexadecimal.  ``#`` starts a comment (whole line or trailing); blank lines are
ignored.  Readers reject out-of-range values and duplicates, reporting the
offending line number.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import TextIO

from .core import PointSet
from .errors import SetFileError

__all__ = ["read_set", "read_set_text", "write_set", "format_set"]


def _strip(line: str) -> str:
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return line.strip()


def read_set_text(text: str) -> PointSet:
    return _read(io.StringIO(text))


def read_set(path: str | Path) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return _read(fh)


def _read(fh: TextIO) -> PointSet:
    dim: int | None = None
    values: list[int] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(fh, start=1):
        line = _strip(raw)
        if not line:
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim":
                raise SetFileError("expected 'dim <n>' header", lineno)
            try:
                dim = int(parts[1])
            except ValueError:
                raise SetFileError(f"bad dimension {parts[1]!r}", lineno) from None
            if not 1 <= dim <= 64:
                raise SetFileError(f"dimension {dim} not in 1..64", lineno)
            continue
        if not line.lower().startswith("0x"):
            raise SetFileError(f"expected 0x-prefixed point, got {line!r}", lineno)
        try:
            v = int(line, 16)
        except ValueError:
            raise SetFileError(f"bad hexadecimal point {line!r}", lineno) from None
        if v >> dim:
            raise SetFileError(f"point {line} out of range for dim {dim}", lineno)
        if v in seen:
            raise SetFileError(f"duplicate point {line}", lineno)
        seen.add(v)
        values.append(v)
    if dim is None:
        raise SetFileError("missing 'dim <n>' header", 1)
    return PointSet.from_iterable(dim, values)


def format_set(a: PointSet) -> str:
    lines = [f"dim {a.ambient_dim}"]
    lines.extend(f"0x{v:x}" for v in a.values)
    return "\n".join(lines) + "\n"


def write_set(path: str | Path, a: PointSet) -> None:
    Path(path).write_text(format_set(a), encoding="utf-8")
