"""Side-by-side classical vs. substitution statistics and the product-gap identity."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from .classical import composite_mean, composite_statistic, covariance
from .dataset import Dataset
from .errors import NonFiniteResult, UnboundVariable, UndefinedStatistic
from .expr import Binary, BinaryOp, Expr, Variable, is_variable_product, pretty_print, variables
from .substitution import StatKind, chen_mean, chen_statistic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StatComparison:
    classical: Optional[float] = None
    chen: Optional[float] = None
    abs_gap: Optional[float] = None
    rel_gap: Optional[float] = None

    @classmethod
    def between(cls, classical: Optional[float], chen: Optional[float]) -> "StatComparison":
        if classical is None or chen is None:
            return cls(classical, chen)
        gap = abs(classical - chen)
        if not math.isfinite(gap):
            return cls(classical, chen)
        return cls(classical, chen, gap, gap / max(1.0, abs(classical)))

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {
            "classical": self.classical,
            "chen": self.chen,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
        }


@dataclass(frozen=True)
class ProductGap:
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class ProductDecomposition:
    covariance_term: float
    identity_residual: float


@dataclass(frozen=True)
class ComparisonReport:
    expression: str
    n_rows: int
    statistics: Mapping[StatKind, StatComparison]
    product_decomposition: Optional[ProductDecomposition] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        decomposition = None
        if self.product_decomposition is not None:
            decomposition = {
                "covariance_term": self.product_decomposition.covariance_term,
                "identity_residual": self.product_decomposition.identity_residual,
            }
        return {
            "expression": self.expression,
            "n_rows": self.n_rows,
            "statistics": {kind.value: self.statistics[kind].to_dict() for kind in StatKind},
            "product_decomposition": decomposition,
            "warnings": list(self.warnings),
        }


def _attempt(compute: Callable[[], float], label: str, warnings: List[str]) -> Optional[float]:
    try:
        return compute()
    except UndefinedStatistic as exc:
        logger.info("skipping %s: %s", label, exc)
        warnings.append(f"{label} omitted: {exc}")
        return None


def product_gap_identity(d: Dataset, a: str, b: str) -> ProductGap:
    """Check mean(a*b) - mean(a)*mean(b) against ((N-1)/N) * cov(a, b)."""
    d.column(a)
    d.column(b)
    product = Binary(BinaryOp.MUL, Variable(a), Variable(b))
    lhs = composite_mean(product, d) - chen_mean(product, d)
    rhs = (d.n_rows - 1) / d.n_rows * covariance(d, a, b) if d.n_rows >= 2 else 0.0
    residual = abs(lhs - rhs)
    if not math.isfinite(residual):
        raise NonFiniteResult(None, f"product gap of '{a}' and '{b}'")
    return ProductGap(lhs, rhs, residual)


def jensen_gap(e: Expr, d: Dataset) -> float:
    """Signed classical-minus-substitution mean; non-negative for convex ``e`` of one column."""
    return composite_mean(e, d) - chen_mean(e, d)


def compare(e: Expr, d: Dataset) -> ComparisonReport:
    """Fill every statistic kind computable on ``d``; undefined ones become warnings."""
    for name in variables(e):
        if name not in d:
            raise UnboundVariable(name)
    warnings: List[str] = []
    statistics: Dict[StatKind, StatComparison] = {}
    for kind in StatKind:
        classical = _attempt(lambda: composite_statistic(e, d, kind), f"classical {kind.value}", warnings)
        chen = _attempt(lambda: chen_statistic(e, d, kind), f"chen {kind.value}", warnings)
        if kind is StatKind.VARIANCE and chen is not None and chen < 0:
            warnings.append(f"chen variance is negative ({chen!r}); reported as-is")
        comparison = StatComparison.between(classical, chen)
        if classical is not None and chen is not None and comparison.abs_gap is None:
            warnings.append(f"{kind.value} gap omitted: outside the double range")
        statistics[kind] = comparison

    decomposition = None
    if is_variable_product(e):
        assert isinstance(e, Binary) and isinstance(e.left, Variable) and isinstance(e.right, Variable)
        try:
            gap = product_gap_identity(d, e.left.name, e.right.name)
        except UndefinedStatistic as exc:
            warnings.append(f"product decomposition omitted: {exc}")
        else:
            decomposition = ProductDecomposition(gap.rhs, gap.residual / max(1.0, abs(gap.lhs)))

    return ComparisonReport(
        expression=pretty_print(e),
        n_rows=d.n_rows,
        statistics=statistics,
        product_decomposition=decomposition,
        warnings=tuple(warnings),
    )
