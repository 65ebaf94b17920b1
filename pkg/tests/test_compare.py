from __future__ import annotations

import math
import random

import pytest

from nonstat.compare import StatComparison, compare, jensen_gap, product_gap_identity
from nonstat.dataset import Dataset
from nonstat.errors import UnboundVariable, UnknownColumn
from nonstat.expr import parse
from nonstat.substitution import StatKind


def test_product_report(d1):
    report = compare(parse("x*y"), d1)
    mean = report.statistics[StatKind.MEAN]
    assert mean.classical == pytest.approx(32 / 3, abs=1e-12)
    assert mean.chen == 10.0
    assert mean.abs_gap == pytest.approx(2 / 3, abs=1e-12)
    assert mean.rel_gap == pytest.approx((2 / 3) / (32 / 3), abs=1e-12)

    variance = report.statistics[StatKind.VARIANCE]
    assert variance.classical == pytest.approx(444 / 9, abs=1e-9)
    assert variance.chen == 1.0

    assert report.expression == "x * y"
    assert report.n_rows == 3
    assert report.product_decomposition is not None
    assert report.product_decomposition.covariance_term == pytest.approx(2 / 3, abs=1e-12)
    assert report.product_decomposition.identity_residual <= 1e-10


def test_identity_expression_has_no_gaps(d1):
    report = compare(parse("x"), d1)
    for kind in (StatKind.MEAN, StatKind.VARIANCE, StatKind.MEDIAN):
        assert report.statistics[kind].abs_gap == 0.0
    assert report.statistics[StatKind.MODE] == StatComparison()
    assert any("mode" in warning for warning in report.warnings)
    assert report.product_decomposition is None


def test_sine_report(d2):
    report = compare(parse("sin(x)"), d2)
    mean = report.statistics[StatKind.MEAN]
    assert mean.classical == pytest.approx(1 / 3, abs=1e-12)
    assert mean.chen == pytest.approx(1.0, abs=1e-15)
    assert report.statistics[StatKind.VARIANCE].chen == pytest.approx(0.6243, abs=1e-4)


def test_negative_substituted_variance_is_reported_with_a_warning():
    data = Dataset.from_columns({"x": [0.0, 2.5, 5.0]})
    report = compare(parse("sin(x)"), data)
    assert report.statistics[StatKind.VARIANCE].chen < 0
    assert any("negative" in warning for warning in report.warnings)


def test_gap_beyond_double_range_is_omitted():
    comparison = StatComparison.between(1.7e308, -1.7e308)
    assert (comparison.classical, comparison.chen) == (1.7e308, -1.7e308)
    assert comparison.abs_gap is None
    assert comparison.rel_gap is None


def test_variance_beyond_double_range_becomes_a_warning():
    report = compare(parse("x"), Dataset.from_columns({"x": [-1e308, 1e308]}))
    assert report.statistics[StatKind.MEAN].abs_gap == 0.0
    assert report.statistics[StatKind.VARIANCE] == StatComparison()
    assert any("double range" in warning for warning in report.warnings)


def test_single_row_keeps_the_mean():
    data = Dataset.from_columns({"x": [2.0], "y": [3.0]})
    report = compare(parse("x*y"), data)
    assert report.statistics[StatKind.MEAN].abs_gap == 0.0
    assert report.statistics[StatKind.VARIANCE] == StatComparison()
    assert report.warnings


def test_report_dict_lists_every_kind(d1):
    payload = compare(parse("x*y"), d1).to_dict()
    assert list(payload["statistics"]) == ["mean", "variance", "median", "mode"]
    assert payload["statistics"]["mode"]["classical"] is None
    assert set(payload["product_decomposition"]) == {"covariance_term", "identity_residual"}


def test_compare_rejects_unknown_variables(d1):
    with pytest.raises(UnboundVariable):
        compare(parse("x*z"), d1)


def test_product_gap_small_dataset(d1):
    gap = product_gap_identity(d1, "x", "y")
    assert gap.lhs == pytest.approx(2 / 3, abs=1e-12)
    assert gap.rhs == pytest.approx(2 / 3, abs=1e-12)
    assert gap.residual <= 1e-12


def test_product_gap_uncorrelated_columns():
    data = Dataset.from_columns({"a": [1.0, 2.0, 3.0], "b": [1.0, -2.0, 1.0]})
    gap = product_gap_identity(data, "a", "b")
    assert gap.lhs == pytest.approx(0.0, abs=1e-12)
    assert gap.rhs == 0.0


def test_product_gap_constant_column_is_exactly_zero():
    data = Dataset.from_columns({"a": [2.0, 2.0, 2.0], "b": [1.0, 5.0, 7.0]})
    gap = product_gap_identity(data, "a", "b")
    assert gap.lhs == 0.0
    assert gap.rhs == 0.0


def test_product_gap_single_row():
    data = Dataset.from_columns({"a": [2.0], "b": [3.0]})
    gap = product_gap_identity(data, "a", "b")
    assert gap.lhs == 0.0
    assert gap.rhs == 0.0


def test_product_gap_unknown_column(d1):
    with pytest.raises(UnknownColumn):
        product_gap_identity(d1, "x", "w")


def test_product_gap_identity_holds_on_random_data():
    rng = random.Random(99)
    for _ in range(500):
        n = rng.choice([2, 3, 10, rng.randint(2, 10_000)])
        a = [rng.uniform(-1e6, 1e6) for _ in range(n)]
        b = [rng.uniform(-1e6, 1e6) for _ in range(n)]
        gap = product_gap_identity(Dataset.from_columns({"a": a, "b": b}), "a", "b")
        assert gap.residual <= 1e-10 * max(1.0, abs(gap.lhs))


def test_jensen_gap_sign():
    data = Dataset.from_columns({"x": [0.0, 1.0, 2.0, 3.5]})
    assert jensen_gap(parse("exp(x)"), data) > 0
    assert jensen_gap(parse("x^2"), data) > 0
    assert jensen_gap(parse("-exp(x)"), data) < 0
    expected = (1 + math.e + math.e**2 + math.exp(3.5)) / 4 - math.exp(1.625)
    assert jensen_gap(parse("exp(x)"), data) == pytest.approx(expected, rel=1e-12)


def test_jensen_gap_is_positive_for_exp_on_random_columns():
    rng = random.Random(31)
    for _ in range(100):
        values = [rng.uniform(-5, 5) for _ in range(rng.randint(2, 40))]
        if len(set(values)) == 1:
            continue
        assert jensen_gap(parse("exp(x)"), Dataset.from_columns({"x": values})) > 0
    constant = Dataset.from_columns({"x": [0.75] * 9})
    assert jensen_gap(parse("exp(x)"), constant) == pytest.approx(0.0, abs=1e-15)
