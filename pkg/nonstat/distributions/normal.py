"""Normal distribution sampled with Box-Muller."""
from __future__ import annotations

import math
from typing import List, Mapping

from ..rng import Xorshift64Star
from .base import Distribution


class NormalDistribution(Distribution):
    """normal(mu, sigma). Values come in pairs; an odd ``n`` discards the last one."""

    name = "normal"

    def __init__(self, mu: float, sigma: float) -> None:
        self.mu = float(mu)
        self.sigma = float(sigma)

    def sample(self, rng: Xorshift64Star, n: int, drawn: Mapping[str, List[float]]) -> List[float]:
        values: List[float] = []
        for _ in range((n + 1) // 2):
            values.extend(rng.normal_pair(self.mu, self.sigma))
        return values[:n]

    def describe(self) -> str:
        return f"{self.name}({self.mu!r}, {self.sigma!r})"

    def problems(self) -> List[str]:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            return [f"{self.describe()}: parameters must be finite"]
        if not self.sigma > 0:
            return [f"{self.describe()}: sigma must be positive"]
        # Box-Muller draws stay within 9 sigma of mu
        if not math.isfinite(abs(self.mu) + 9.0 * self.sigma):
            return [f"{self.describe()}: draws would exceed the double range"]
        return []
