"""Substitution statistics: evaluate the expression once on per-column marginals."""
from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Dict

from .dataset import Dataset, MarginalStats, column_stats
from .errors import InsufficientSamples, NonFiniteResult, UnboundVariable, UndefinedMode
from .expr import Expr, evaluate, variables

logger = logging.getLogger(__name__)


class StatKind(str, Enum):
    MEAN = "mean"
    VARIANCE = "variance"
    MEDIAN = "median"
    MODE = "mode"

    def select(self, stats: MarginalStats, source: str, subject: str = "column") -> float:
        """Pick this kind's field from ``stats``; ``subject`` and ``source`` name the sample in errors."""
        if self is StatKind.MEAN:
            return stats.mean
        if self is StatKind.VARIANCE:
            if stats.n < 2:
                raise InsufficientSamples(2, stats.n)
            if stats.variance is None:
                raise NonFiniteResult(None, f"variance of {subject} '{source}'")
            return stats.variance
        if self is StatKind.MEDIAN:
            return stats.median
        if stats.mode is None:
            raise UndefinedMode(source, subject)
        return stats.mode


def chen_statistic(e: Expr, d: Dataset, kind: StatKind) -> float:
    """Replace every variable occurrence by its column's ``kind`` statistic and evaluate.

    Constants are left untouched, so ``3 * x`` under VARIANCE gives ``3 * Var(x)``.
    """
    kind = StatKind(kind)
    if kind is StatKind.VARIANCE and d.n_rows < 2:
        raise InsufficientSamples(2, d.n_rows)
    bindings: Dict[str, float] = {}
    for name in variables(e):
        if name not in d:
            raise UnboundVariable(name)
        bindings[name] = kind.select(column_stats(d, name), name)
    value = evaluate(e, bindings)
    if not math.isfinite(value):
        raise NonFiniteResult(None)
    logger.debug("substituted %s %s -> %r", kind.value, bindings, value)
    return value


def chen_mean(e: Expr, d: Dataset) -> float:
    return chen_statistic(e, d, StatKind.MEAN)


def chen_variance(e: Expr, d: Dataset) -> float:
    return chen_statistic(e, d, StatKind.VARIANCE)


def chen_median(e: Expr, d: Dataset) -> float:
    return chen_statistic(e, d, StatKind.MEDIAN)


def chen_mode(e: Expr, d: Dataset) -> float:
    return chen_statistic(e, d, StatKind.MODE)
