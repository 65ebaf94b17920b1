"""Classical vs. substitution statistics of nonlinear expressions over sampled variables."""

from .classical import composite_mean, composite_variance
from .cli import run_cli
from .compare import compare, product_gap_identity
from .dataset import Dataset, column_stats, load_csv
from .expr import evaluate, parse, pretty_print, variables
from .montecarlo import MCSpec, monte_carlo_compare
from .substitution import StatKind, chen_mean, chen_statistic, chen_variance

__all__ = [
    "Dataset",
    "MCSpec",
    "StatKind",
    "chen_mean",
    "chen_statistic",
    "chen_variance",
    "column_stats",
    "compare",
    "composite_mean",
    "composite_variance",
    "evaluate",
    "load_csv",
    "monte_carlo_compare",
    "parse",
    "pretty_print",
    "product_gap_identity",
    "run_cli",
    "variables",
]
