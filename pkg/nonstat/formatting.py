"""Renderers for the table, json and csv output formats."""
from __future__ import annotations

import csv
import io
import json
from enum import Enum
from typing import Any, List, Optional, Sequence

from .utils import flatten


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"


def format_number(value: Optional[float]) -> str:
    """Six significant digits for humans; ``-`` for an absent value."""
    if value is None:
        return "-"
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def render_json(payload: Any) -> str:
    """Stable key order and shortest round-trip floats, so equal reports are byte-equal."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)


def render_csv(payload: Any) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in flatten(payload):
        writer.writerow([key, "" if value is None else (repr(value) if isinstance(value, float) else value)])
    return buffer.getvalue().rstrip("\n")


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells: List[List[str]] = [list(headers)]
    for row in rows:
        cells.append([cell if isinstance(cell, str) else format_number(cell) for cell in row])
    widths = [max(len(line[index]) for line in cells) for index in range(len(headers))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)
