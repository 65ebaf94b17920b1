"""Utility helpers for CLI paths, seeds and flat output."""
from __future__ import annotations

import os
from typing import Any, Iterator, Mapping, Optional, Tuple

from dotenv import load_dotenv

from .errors import InvalidSpec

SEED_ENV = "NONSTAT_SEED"


def clean_path(path: str) -> str:
    """Normalise shell provided paths, removing quotes and escaped spaces."""
    normalised = path.strip("'\"")
    normalised = normalised.replace("\\ ", " ")
    normalised = normalised.replace("\\'", "'")
    return normalised


def load_environment() -> None:
    """Read a ``.env`` file from the working directory without overriding the real environment."""
    load_dotenv(dotenv_path=os.path.join(os.getcwd(), ".env"), override=False)


def resolve_seed(flag: Optional[int], file_value: Any = None) -> Any:
    """Seed precedence: explicit flag, then ``NONSTAT_SEED``, then the spec file, then 0."""
    if flag is not None:
        return flag
    env_value = os.getenv(SEED_ENV)
    if env_value is not None and env_value.strip():
        try:
            return int(env_value.strip(), 0)
        except ValueError:
            raise InvalidSpec([f"{SEED_ENV}: expected an integer, got {env_value!r}"]) from None
    if file_value is not None:
        return file_value
    return 0


def flatten(payload: Any, prefix: str = "") -> Iterator[Tuple[str, Any]]:
    """Yield ``(dotted.key, scalar)`` pairs; lists are indexed, keys sorted."""
    if isinstance(payload, Mapping):
        for key in sorted(payload):
            yield from flatten(payload[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(payload, (list, tuple)):
        for index, item in enumerate(payload):
            yield from flatten(item, f"{prefix}.{index}" if prefix else str(index))
    else:
        yield prefix, payload
