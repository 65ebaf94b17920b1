"""Base class for Monte Carlo sampling distributions."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import List, Mapping, Optional

from ..rng import Xorshift64Star


class Distribution(ABC):
    """A per-variable sampling law used by the Monte Carlo harness."""

    name: str = ""
    # variable this one is derived from, if any
    depends_on: Optional[str] = None

    @abstractmethod
    def sample(self, rng: Xorshift64Star, n: int, drawn: Mapping[str, List[float]]) -> List[float]:
        """Draw ``n`` values; ``drawn`` holds the variables sampled earlier in the replication."""

    @abstractmethod
    def describe(self) -> str:
        """Canonical text form, e.g. ``uniform(0.0, 1.0)``."""

    def problems(self) -> List[str]:
        """Parameter violations, empty when the distribution is usable."""
        return []

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.describe()}>"
