"""Classical statistics of composed samples and a mergeable streaming accumulator."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .dataset import Dataset, MarginalStats, sample_mean, sample_variance, summarize
from .errors import InsufficientSamples, NonFiniteResult, UnboundVariable
from .expr import Expr, evaluate_columns, pretty_print, variables
from .substitution import StatKind

logger = logging.getLogger(__name__)


def composite_samples(e: Expr, d: Dataset) -> np.ndarray:
    """Evaluate ``e`` on every row of ``d``; element j uses row j of each column."""
    names = variables(e)
    for name in names:
        if name not in d:
            raise UnboundVariable(name)
    samples = evaluate_columns(e, {name: d.column(name) for name in names}, d.n_rows)
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise NonFiniteResult(int(bad[0]))
    samples.setflags(write=False)
    return samples


def composite_mean(e: Expr, d: Dataset) -> float:
    return sample_mean(composite_samples(e, d))


def composite_variance(e: Expr, d: Dataset) -> float:
    if d.n_rows < 2:
        raise InsufficientSamples(2, d.n_rows)
    variance = sample_variance(composite_samples(e, d))
    if variance is None:
        raise NonFiniteResult(None, f"variance of expression '{pretty_print(e)}'")
    return variance


def composite_stats(e: Expr, d: Dataset) -> MarginalStats:
    """Full marginal summary of the composed sample."""
    return summarize(composite_samples(e, d))


def composite_median(e: Expr, d: Dataset) -> float:
    return composite_stats(e, d).median


def composite_mode(e: Expr, d: Dataset) -> float:
    return composite_statistic(e, d, StatKind.MODE)


def composite_statistic(e: Expr, d: Dataset, kind: StatKind) -> float:
    if kind is StatKind.MEAN:
        return composite_mean(e, d)
    if kind is StatKind.VARIANCE:
        return composite_variance(e, d)
    return kind.select(composite_stats(e, d), pretty_print(e), "expression")


def covariance(d: Dataset, a: str, b: str) -> float:
    """Sample covariance with denominator N - 1."""
    left = d.column(a)
    right = d.column(b)
    if d.n_rows < 2:
        raise InsufficientSamples(2, d.n_rows)
    left_mean = sample_mean(left)
    right_mean = sample_mean(right)
    # sum over rows ordered by (a, b) so the result ignores row order
    order = np.lexsort((right, left))
    total = 0.0
    for x, y in zip(left[order].tolist(), right[order].tolist()):
        total += (x - left_mean) * (y - right_mean)
    result = total / (d.n_rows - 1)
    if not math.isfinite(result):
        raise NonFiniteResult(None, f"covariance of '{a}' and '{b}'")
    return result


# ---------------------------------------------------------------------------
# Streaming


@dataclass(frozen=True)
class StreamingSummary:
    n: int
    mean: Optional[float] = None
    variance: Optional[float] = None


@dataclass(frozen=True)
class StreamingAccumulator:
    """One-pass mean and sum of squared deviations (``m2``) of a stream.

    Values are accumulated relative to ``shift`` (the first value seen) so
    large common offsets do not cost precision. Instances are immutable;
    ``update`` and ``merge`` return new accumulators.
    """

    count: int = 0
    shift: float = 0.0
    shifted_mean: float = 0.0
    m2: float = 0.0
    minimum: float = math.inf
    maximum: float = -math.inf

    @property
    def running_mean(self) -> float:
        return self.shift + self.shifted_mean

    def update(self, value: float) -> "StreamingAccumulator":
        return self.update_many((value,))

    def update_many(self, values: Iterable[float]) -> "StreamingAccumulator":
        count, shift, mean, m2 = self.count, self.shift, self.shifted_mean, self.m2
        low, high = self.minimum, self.maximum
        for value in values:
            value = float(value)
            if count == 0:
                shift = value
            count += 1
            delta = (value - shift) - mean
            mean += delta / count
            m2 += delta * ((value - shift) - mean)
            low = min(low, value)
            high = max(high, value)
        return StreamingAccumulator(count, shift, mean, m2, low, high)

    def merge(self, other: "StreamingAccumulator") -> "StreamingAccumulator":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        combined = self.count + other.count
        delta = (other.shift - self.shift) + other.shifted_mean - self.shifted_mean
        return StreamingAccumulator(
            combined,
            self.shift,
            self.shifted_mean + delta * other.count / combined,
            self.m2 + other.m2 + delta * delta * self.count * other.count / combined,
            min(self.minimum, other.minimum),
            max(self.maximum, other.maximum),
        )

    def finalize(self) -> StreamingSummary:
        if self.count == 0:
            return StreamingSummary(0)
        if self.count == 1:
            return StreamingSummary(1, self.running_mean)
        return StreamingSummary(self.count, self.running_mean, max(self.m2, 0.0) / (self.count - 1))


def acc_new() -> StreamingAccumulator:
    return StreamingAccumulator()


def acc_update(acc: StreamingAccumulator, value: float) -> StreamingAccumulator:
    return acc.update(value)


def acc_merge(a: StreamingAccumulator, b: StreamingAccumulator) -> StreamingAccumulator:
    return a.merge(b)


def acc_finalize(acc: StreamingAccumulator) -> StreamingSummary:
    return acc.finalize()
