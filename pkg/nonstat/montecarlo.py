"""Seeded Monte Carlo harness comparing classical and substitution statistics."""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from .classical import StreamingAccumulator, composite_mean, composite_variance
from .dataset import Dataset
from .distributions import Distribution, parse_distribution
from .errors import ExprSyntaxError, InvalidSpec, NonFiniteResult
from .expr import IDENTIFIER, Expr, parse, variables
from .rng import MASK64, Xorshift64Star, split_seed
from .substitution import chen_mean, chen_variance

logger = logging.getLogger(__name__)

_KEY_ALIASES = {
    "n_samples": "n",
    "n_replications": "r",
    "expression": "expr",
}


@dataclass(frozen=True)
class MCSpec:
    seed: int
    n_samples: int
    n_replications: int
    distributions: Mapping[str, Distribution]
    expression: str

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "MCSpec":
        """Build a spec from flat ``seed/n/r/dist.<var>/expr`` keys (a nested ``dist`` map also works)."""
        problems: List[str] = []
        values: Dict[str, Any] = {}
        distributions: Dict[str, Distribution] = {}
        for key, value in raw.items():
            key = _KEY_ALIASES.get(str(key).strip(), str(key).strip())
            if key == "dist" and isinstance(value, Mapping):
                entries = [(str(name), text) for name, text in value.items()]
            elif key.startswith("dist."):
                entries = [(key[len("dist."):], value)]
            elif key in ("seed", "n", "r", "expr"):
                values[key] = value
                continue
            else:
                problems.append(f"{key}: unknown key")
                continue
            for name, text in entries:
                try:
                    distributions[name] = parse_distribution(str(text))
                except InvalidSpec as exc:
                    problems.extend(f"dist.{name}: {problem}" for problem in exc.problems)

        seed = _as_int("seed", values.get("seed", 0), problems)
        n_samples = _as_int("n", values.get("n"), problems)
        n_replications = _as_int("r", values.get("r", 1), problems)
        expression = values.get("expr")
        if expression is None:
            problems.append("expr: missing")
        if problems:
            raise InvalidSpec(problems)
        return cls(
            seed=seed & MASK64,
            n_samples=n_samples,
            n_replications=n_replications,
            distributions=dict(sorted(distributions.items())),
            expression=str(expression),
        )

    def validate(self) -> Expr:
        """Check every invariant and return the parsed expression."""
        problems: List[str] = []
        if self.n_samples < 2:
            problems.append(f"n: must be at least 2, got {self.n_samples}")
        if self.n_replications < 1:
            problems.append(f"r: must be at least 1, got {self.n_replications}")
        for name, distribution in self.distributions.items():
            if not IDENTIFIER.fullmatch(name):
                problems.append(f"dist.{name}: not a valid variable name")
                continue
            problems.extend(f"dist.{name}: {problem}" for problem in distribution.problems())
            source = distribution.depends_on
            if source is not None:
                upstream = self.distributions.get(source)
                if upstream is None:
                    problems.append(f"dist.{name}: copies undeclared variable '{source}'")
                elif upstream.depends_on is not None:
                    problems.append(f"dist.{name}: copies '{source}', which is itself a copy")
        tree: Optional[Expr] = None
        try:
            tree = parse(self.expression)
        except ExprSyntaxError as exc:
            problems.append(f"expr: {exc}")
        else:
            missing = [name for name in variables(tree) if name not in self.distributions]
            if missing:
                problems.append(f"expr: no distribution for {', '.join(missing)}")
        if problems:
            raise InvalidSpec(problems)
        assert tree is not None
        return tree

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "n_samples": self.n_samples,
            "n_replications": self.n_replications,
            "distributions": {name: dist.describe() for name, dist in self.distributions.items()},
            "expression": self.expression,
        }


def _as_int(key: str, value: Any, problems: List[str]) -> int:
    if value is None:
        problems.append(f"{key}: missing")
        return 0
    if isinstance(value, bool):
        problems.append(f"{key}: expected an integer, got {value!r}")
        return 0
    if isinstance(value, float) and value.is_integer():
        return int(value)
    try:
        return int(str(value).strip())
    except ValueError:
        problems.append(f"{key}: expected an integer, got {value!r}")
        return 0


def parse_key_value(text: str) -> Dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    raw: Dict[str, str] = {}
    problems: List[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, separator, value = stripped.partition("=")
        if not separator:
            problems.append(f"line {number}: expected 'key = value'")
            continue
        raw[key.strip()] = value.strip()
    if problems:
        raise InvalidSpec(problems)
    return raw


def read_spec_file(path: Path | str) -> Dict[str, Any]:
    """Load raw spec keys from a key=value, JSON or YAML file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            loaded = yaml.safe_load(text)
        elif path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
            loaded = json.loads(text)
        else:
            return parse_key_value(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InvalidSpec([f"{path.name}: {exc}"]) from None
    if not isinstance(loaded, dict):
        raise InvalidSpec([f"{path.name}: expected a flat mapping of spec keys"])
    return loaded


# ---------------------------------------------------------------------------
# Running


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    seed: int
    classical_mean: float
    chen_mean: float
    mean_gap: float
    classical_variance: float
    chen_variance: float
    variance_gap: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "seed": self.seed,
            "classical_mean": self.classical_mean,
            "chen_mean": self.chen_mean,
            "mean_gap": self.mean_gap,
            "classical_variance": self.classical_variance,
            "chen_variance": self.chen_variance,
            "variance_gap": self.variance_gap,
        }


@dataclass(frozen=True)
class GapSummary:
    mean: float
    std: Optional[float]
    minimum: float
    maximum: float

    @classmethod
    def of(cls, gaps: List[float]) -> "GapSummary":
        summary = StreamingAccumulator().update_many(gaps)
        final = summary.finalize()
        assert final.mean is not None
        if not math.isfinite(final.mean):
            raise NonFiniteResult(None, "mean of the replication gaps")
        std = None
        if final.variance is not None and math.isfinite(final.variance):
            std = math.sqrt(final.variance)
        return cls(final.mean, std, summary.minimum, summary.maximum)

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {"mean": self.mean, "std": self.std, "min": self.minimum, "max": self.maximum}


@dataclass(frozen=True)
class MCReport:
    spec: MCSpec
    replications: Tuple[ReplicationResult, ...]
    mean_gap: GapSummary
    variance_gap: GapSummary

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "replications": [result.to_dict() for result in self.replications],
            "aggregate": {
                "mean_gap": self.mean_gap.to_dict(),
                "variance_gap": self.variance_gap.to_dict(),
            },
        }


def sample_dataset(spec: MCSpec, rng: Xorshift64Star) -> Dataset:
    """Draw every declared variable: independent ones in name order, then copies."""
    drawn: Dict[str, List[float]] = {}
    ordered = sorted(spec.distributions.items(), key=lambda item: (item[1].depends_on is not None, item[0]))
    for name, distribution in ordered:
        drawn[name] = distribution.sample(rng, spec.n_samples, drawn)
    return Dataset.from_columns(dict(sorted(drawn.items())))


def run_replication(spec: MCSpec, tree: Expr, index: int) -> ReplicationResult:
    child_seed = split_seed(spec.seed, index)
    data = sample_dataset(spec, Xorshift64Star.for_replication(spec.seed, index))
    classical_mean = composite_mean(tree, data)
    substituted_mean = chen_mean(tree, data)
    classical_variance = composite_variance(tree, data)
    substituted_variance = chen_variance(tree, data)
    mean_gap = classical_mean - substituted_mean
    variance_gap = classical_variance - substituted_variance
    for quantity, gap in (("mean gap", mean_gap), ("variance gap", variance_gap)):
        if not math.isfinite(gap):
            raise NonFiniteResult(None, f"{quantity} of replication {index}")
    logger.debug("replication %d done (seed %d)", index, child_seed)
    return ReplicationResult(
        index=index,
        seed=child_seed,
        classical_mean=classical_mean,
        chen_mean=substituted_mean,
        mean_gap=mean_gap,
        classical_variance=classical_variance,
        chen_variance=substituted_variance,
        variance_gap=variance_gap,
    )


def monte_carlo_compare(spec: MCSpec, *, max_workers: int = 1) -> MCReport:
    """Run every replication (possibly concurrently) and aggregate in index order."""
    tree = spec.validate()
    workers = max(1, max_workers)
    logger.info(
        "running %d replication(s) of n=%d for %s on %d worker(s)",
        spec.n_replications,
        spec.n_samples,
        spec.expression,
        workers,
    )
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(run_replication, spec, tree, index) for index in range(spec.n_replications)]
        results = sorted((future.result() for future in futures), key=lambda result: result.index)
    return MCReport(
        spec=spec,
        replications=tuple(results),
        mean_gap=GapSummary.of([result.mean_gap for result in results]),
        variance_gap=GapSummary.of([result.variance_gap for result in results]),
    )
