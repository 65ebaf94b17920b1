"""Distribution factory for the Monte Carlo harness."""
from __future__ import annotations

import re
from typing import Dict, List, Type

from ..errors import InvalidSpec
from .base import Distribution
from .dependent import CopyDistribution
from .normal import NormalDistribution
from .uniform import UniformDistribution

DISTRIBUTION_REGISTRY: Dict[str, Type[Distribution]] = {
    cls.name: cls for cls in (UniformDistribution, NormalDistribution, CopyDistribution)
}

DISTRIBUTION_ARITY: Dict[str, int] = {
    "uniform": 2,
    "normal": 2,
    "copy": 1,
}

_CALL_PATTERN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*")


def list_distributions() -> list[str]:
    """Return the available distribution identifiers."""
    return sorted(DISTRIBUTION_REGISTRY.keys())


def create_distribution(name: str, *params: str | float) -> Distribution:
    """Instantiate a distribution by name; numeric parameters may be given as text."""
    key = name.lower()
    if key not in DISTRIBUTION_REGISTRY:
        raise InvalidSpec([f"unsupported distribution '{name}'. Available: {', '.join(list_distributions())}"])
    if len(params) != DISTRIBUTION_ARITY[key]:
        raise InvalidSpec([f"{key} takes {DISTRIBUTION_ARITY[key]} parameter(s), got {len(params)}"])
    if key == "copy":
        return CopyDistribution(str(params[0]).strip())
    try:
        numbers = [float(param) for param in params]
    except ValueError:
        raise InvalidSpec([f"{key} parameters must be numbers, got {', '.join(map(str, params))}"]) from None
    return DISTRIBUTION_REGISTRY[key](*numbers)


def parse_distribution(text: str) -> Distribution:
    """Parse ``uniform(0, 1)``, ``normal(0, 2.5)`` or ``copy(x)``."""
    match = _CALL_PATTERN.fullmatch(str(text))
    if match is None:
        raise InvalidSpec([f"cannot parse distribution {text!r}; expected name(param, ...)"])
    name, arguments = match.groups()
    params: List[str] = [part.strip() for part in arguments.split(",")] if arguments.strip() else []
    return create_distribution(name, *params)


__all__ = [
    "CopyDistribution",
    "Distribution",
    "NormalDistribution",
    "UniformDistribution",
    "create_distribution",
    "list_distributions",
    "parse_distribution",
]
