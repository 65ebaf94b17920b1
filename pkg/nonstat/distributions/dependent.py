"""Perfectly dependent variable: reuse another variable's draws."""
from __future__ import annotations

from typing import List, Mapping

from ..expr import IDENTIFIER
from ..rng import Xorshift64Star
from .base import Distribution


class CopyDistribution(Distribution):
    """copy(x): consumes no generator output."""

    name = "copy"

    def __init__(self, source: str) -> None:
        self.source = str(source)
        self.depends_on = self.source

    def sample(self, rng: Xorshift64Star, n: int, drawn: Mapping[str, List[float]]) -> List[float]:
        return list(drawn[self.source])

    def describe(self) -> str:
        return f"{self.name}({self.source})"

    def problems(self) -> List[str]:
        if not IDENTIFIER.fullmatch(self.source):
            return [f"{self.describe()}: source must be a variable name"]
        return []
