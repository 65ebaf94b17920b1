"""Deterministic 64-bit generator with splittable per-replication seeding.

The generator is xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D).
Child seeds are ``hash64(seed ^ index)`` where ``hash64`` is the SplitMix64
finalizer applied to ``value + 0x9E3779B97F4A7C15``. Everything is plain
integer arithmetic masked to 64 bits so the streams are reproducible in any
language.
"""
from __future__ import annotations

import math
from typing import Tuple

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_XORSHIFT_MULTIPLIER = 0x2545F4914F6CDD1D
_UNIT = 2.0**-53


def hash64(value: int) -> int:
    z = (value + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def split_seed(seed: int, index: int) -> int:
    """Child seed for replication ``index``; independent of execution order."""
    return hash64((seed ^ index) & MASK64)


class Xorshift64Star:
    """xorshift64* generator. ``draws`` counts 64-bit outputs consumed so far."""

    def __init__(self, seed: int) -> None:
        # a zero state would stay zero forever
        self._state = (seed & MASK64) or GOLDEN_GAMMA
        self.draws = 0

    @classmethod
    def for_replication(cls, seed: int, index: int) -> "Xorshift64Star":
        return cls(split_seed(seed, index))

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        self.draws += 1
        return (x * _XORSHIFT_MULTIPLIER) & MASK64

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of one output."""
        return (self.next_u64() >> 11) * _UNIT

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def normal_pair(self, mu: float, sigma: float) -> Tuple[float, float]:
        """Box-Muller on exactly two outputs."""
        u1 = 1.0 - self.random()
        u2 = self.random()
        radius = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        return mu + sigma * radius * math.cos(theta), mu + sigma * radius * math.sin(theta)
