"""Continuous uniform distribution."""
from __future__ import annotations

import math
from typing import List, Mapping

from ..rng import Xorshift64Star
from .base import Distribution


class UniformDistribution(Distribution):
    """uniform(a, b): one generator output per value."""

    name = "uniform"

    def __init__(self, low: float, high: float) -> None:
        self.low = float(low)
        self.high = float(high)

    def sample(self, rng: Xorshift64Star, n: int, drawn: Mapping[str, List[float]]) -> List[float]:
        return [rng.uniform(self.low, self.high) for _ in range(n)]

    def describe(self) -> str:
        return f"{self.name}({self.low!r}, {self.high!r})"

    def problems(self) -> List[str]:
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            return [f"{self.describe()}: bounds must be finite"]
        if not self.high > self.low:
            return [f"{self.describe()}: upper bound must exceed lower bound"]
        if not math.isfinite(self.high - self.low):
            return [f"{self.describe()}: range exceeds the double range"]
        return []
