import numpy as np
import pytest

from diagnostics.association import association_report
from errors.errors import ArgumentError, DegenerateDataError, DimensionError


def test_perfect_line():
    x = np.arange(10.0)
    report = association_report(x, 2.0 * x + 1.0)
    assert report.pearson_r == pytest.approx(1.0)
    assert report.slope == pytest.approx(2.0)
    assert report.intercept == pytest.approx(1.0)


def test_decreasing_line():
    x = np.linspace(-1.0, 1.0, 7)
    report = association_report(x, -2.0 * x + 3.0)
    assert report.pearson_r == pytest.approx(-1.0)
    assert report.slope == pytest.approx(-2.0)


def test_correlation_is_affine_invariant(rng):
    x = rng.normal(size=100)
    y = x + rng.normal(size=100)
    base = association_report(x, y)
    moved = association_report(3.0 * x - 7.0, 0.5 * y + 2.0)
    assert moved.pearson_r == pytest.approx(base.pearson_r, abs=1e-12)


def test_constant_input():
    with pytest.raises(DegenerateDataError):
        association_report(np.ones(5), np.arange(5.0))


def test_too_few_pairs():
    with pytest.raises(ArgumentError):
        association_report([1.0, 2.0], [1.0, 3.0])


def test_length_mismatch():
    with pytest.raises(DimensionError):
        association_report([1.0, 2.0, 3.0], [1.0, 2.0])
