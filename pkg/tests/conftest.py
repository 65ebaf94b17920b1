from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from nonstat.dataset import Dataset  # noqa: E402


@pytest.fixture
def d1() -> Dataset:
    return Dataset.from_columns({"x": [1.0, 2.0, 3.0], "y": [4.0, 5.0, 6.0]})


@pytest.fixture
def d2() -> Dataset:
    return Dataset.from_columns({"x": [0.0, math.pi / 2, math.pi]})


@pytest.fixture
def d1_csv(tmp_path) -> Path:
    path = tmp_path / "d1.csv"
    path.write_text("x,y\n1,4\n2,5\n3,6\n", encoding="utf-8")
    return path
