"""Aligned columnar samples: ingestion, validation and marginal summaries."""
from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import BinaryIO, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DataError,
    DuplicateColumn,
    EmptyInput,
    InsufficientSamples,
    InvalidColumnName,
    InvalidDelimiter,
    InvalidEncoding,
    MalformedCsv,
    NonFiniteValue,
    NonNumericCell,
    RaggedRows,
    UnknownColumn,
)
from .expr import IDENTIFIER

logger = logging.getLogger(__name__)

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NON_FINITE_TOKENS = {"nan", "inf", "infinity"}


@dataclass(frozen=True)
class MarginalStats:
    """Per-column summary.

    ``variance`` is ``None`` for n < 2 and when it exceeds the double range;
    ``mode`` is ``None`` when no value repeats.
    """

    n: int
    mean: float
    variance: Optional[float]
    median: float
    mode: Optional[float]
    minimum: float
    maximum: float

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "median": self.median,
            "mode": self.mode,
            "min": self.minimum,
            "max": self.maximum,
        }


@dataclass(frozen=True)
class Dataset:
    """Named, equal-length, read-only float64 columns."""

    columns: Mapping[str, np.ndarray]
    n_rows: int

    @classmethod
    def from_columns(cls, columns: Mapping[str, Iterable[float]]) -> "Dataset":
        if not columns:
            raise EmptyInput()
        frozen: Dict[str, np.ndarray] = {}
        n_rows: Optional[int] = None
        for name, values in columns.items():
            if not isinstance(name, str) or not IDENTIFIER.fullmatch(name):
                raise InvalidColumnName(str(name))
            array = np.array(list(values), dtype=np.float64)
            if array.ndim != 1:
                raise DataError(f"column '{name}' must be one-dimensional")
            if n_rows is None:
                n_rows = array.size
            elif array.size != n_rows:
                raise DataError(f"column '{name}' has {array.size} rows, expected {n_rows}")
            bad = np.flatnonzero(~np.isfinite(array))
            if bad.size:
                raise NonFiniteValue(int(bad[0]) + 1, name)
            array.setflags(write=False)
            frozen[name] = array
        if not n_rows:
            raise EmptyInput()
        return cls(MappingProxyType(frozen), n_rows)

    @property
    def names(self) -> List[str]:
        return list(self.columns)

    def __contains__(self, name: object) -> bool:
        return name in self.columns

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise UnknownColumn(name) from None


# ---------------------------------------------------------------------------
# Ingestion


def _parse_cell(token: str, line: int, column: str) -> float:
    cell = token.strip()
    if _DECIMAL.fullmatch(cell):
        value = float(cell)
        if not math.isfinite(value):
            raise NonFiniteValue(line, column)
        return value
    if cell.lstrip("+-").lower() in _NON_FINITE_TOKENS:
        raise NonFiniteValue(line, column)
    raise NonNumericCell(line, column, cell)


def _read_header(row: List[str]) -> List[str]:
    names = [cell.strip() for cell in row]
    seen: set[str] = set()
    for name in names:
        if not IDENTIFIER.fullmatch(name):
            raise InvalidColumnName(name)
        if name in seen:
            raise DuplicateColumn(name)
        seen.add(name)
    return names


def _decoded_lines(stream: BinaryIO) -> Iterator[str]:
    for number, raw in enumerate(stream, start=1):
        try:
            yield raw.decode("utf-8-sig" if number == 1 else "utf-8")
        except UnicodeDecodeError as exc:
            raise InvalidEncoding(number, exc.start) from None


def load_csv(stream: BinaryIO, *, delimiter: str = ",", header: bool = True) -> Dataset:
    """Read a UTF-8 CSV byte stream. No quoting: cells may not contain the delimiter."""
    if len(delimiter) != 1 or delimiter in '\r\n"':
        raise InvalidDelimiter(delimiter)
    names: Optional[List[str]] = None
    values: List[List[float]] = []
    reader = csv.reader(_decoded_lines(stream), delimiter=delimiter, quoting=csv.QUOTE_NONE)
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedCsv(reader.line_num, str(exc)) from None
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        line = reader.line_num
        if names is None:
            names = _read_header(row) if header else [f"c{i}" for i in range(1, len(row) + 1)]
            values = [[] for _ in names]
            if header:
                continue
        if len(row) != len(names):
            raise RaggedRows(line, len(names), len(row))
        for index, (name, token) in enumerate(zip(names, row)):
            values[index].append(_parse_cell(token, line, name))
    if names is None or not values[0]:
        raise EmptyInput()
    logger.info("loaded %d rows x %d columns", len(values[0]), len(names))
    return Dataset.from_columns(dict(zip(names, values)))


def read_csv(path: Path | str, *, delimiter: str = ",", header: bool = True) -> Dataset:
    with open(path, "rb") as handle:
        return load_csv(handle, delimiter=delimiter, header=header)


# ---------------------------------------------------------------------------
# Marginal statistics


def _ascending(values: Sequence[float] | np.ndarray) -> np.ndarray:
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if ordered.ndim != 1 or ordered.size == 0:
        raise InsufficientSamples(1, 0)
    return ordered


def _running_mean(ordered: List[float]) -> float:
    mean = 0.0
    for count, value in enumerate(ordered, start=1):
        mean += (value - mean) / count
    if not math.isfinite(mean):
        # a difference overflowed; the mean itself lies between min and max
        return 2.0 * _running_mean([value / 2.0 for value in ordered])
    return mean


def _midpoint(low: float, high: float) -> float:
    middle = (low + high) / 2
    return middle if math.isfinite(middle) else low / 2 + high / 2


def _variance_about(ordered: List[float], mean: float) -> Optional[float]:
    if len(ordered) < 2:
        return None
    total = 0.0
    for value in ordered:
        deviation = mean - value
        total += deviation * deviation
    variance = total / (len(ordered) - 1)
    # beyond double range: reported as absent rather than inf
    return variance if math.isfinite(variance) else None


def _exact_mode(ordered: np.ndarray) -> Optional[float]:
    # duplicates are counted on the bit pattern, so -0.0 and 0.0 differ
    patterns, counts = np.unique(ordered.view(np.uint64), return_counts=True)
    top = counts.max()
    if top < 2:
        return None
    return float(patterns[counts == top].view(np.float64).min())


def sample_mean(values: Sequence[float] | np.ndarray) -> float:
    """Mean of ``values``, accumulated over the ascending sample."""
    return _running_mean(_ascending(values).tolist())


def sample_variance(values: Sequence[float] | np.ndarray) -> Optional[float]:
    """Unbiased variance (denominator n - 1); ``None`` for a single value or when it overflows."""
    ordered = _ascending(values).tolist()
    return _variance_about(ordered, _running_mean(ordered))


def summarize(values: Sequence[float] | np.ndarray) -> MarginalStats:
    ordered = _ascending(values)
    as_list = ordered.tolist()
    n = len(as_list)
    mean = _running_mean(as_list)
    middle = n // 2
    median = as_list[middle] if n % 2 else _midpoint(as_list[middle - 1], as_list[middle])
    return MarginalStats(
        n=n,
        mean=mean,
        variance=_variance_about(as_list, mean),
        median=median,
        mode=_exact_mode(ordered),
        minimum=as_list[0],
        maximum=as_list[-1],
    )


def column_stats(d: Dataset, name: str) -> MarginalStats:
    return summarize(d.column(name))
