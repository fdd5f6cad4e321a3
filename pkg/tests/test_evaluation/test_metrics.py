"""
Unit tests for the summary statistics of sweep results.

Tests cover:
- Mean, sample standard deviation, min, max, count
- Confidence interval of the mean
- Edge cases (single value, identical values, empty input)
"""

import math

import pytest

from ellipsoid_distance.evaluation.metrics import Statistics, calculate_statistics


class TestMetrics:
    """Test suite for calculate_statistics."""

    def test_iteration_counts(self):
        """Statistics of a sample of iteration counts."""
        iterations = [120, 95, 143, 101, 88]

        stats = calculate_statistics(iterations)

        assert isinstance(stats, Statistics)
        assert stats.count == 5
        assert stats.mean == pytest.approx(109.4)
        assert stats.min == 88
        assert stats.max == 143
        assert stats.std > 0

    def test_sample_std(self):
        """The standard deviation uses the n - 1 denominator."""
        stats = calculate_statistics([2, 4, 6, 8])

        # variance = (9 + 1 + 1 + 9) / 3
        assert stats.mean == 5.0
        assert stats.std == pytest.approx(math.sqrt(20 / 3))

    def test_confidence_interval(self):
        """mean +- 1.96 std / sqrt(n)."""
        stats = calculate_statistics([1, 2, 3, 4, 5])

        margin = 1.96 * math.sqrt(2.5) / math.sqrt(5)
        lower, upper = stats.confidence_interval_95
        assert lower == pytest.approx(3.0 - margin)
        assert upper == pytest.approx(3.0 + margin)

    def test_interval_narrows_with_samples(self):
        """More samples of similar spread give a narrower interval."""
        small = calculate_statistics([100, 110, 105])
        large = calculate_statistics([100, 110, 105, 102, 108, 107, 103, 111, 104, 106])

        def width(s):
            return s.confidence_interval_95[1] - s.confidence_interval_95[0]

        assert width(large) < width(small)

    def test_single_value(self):
        """One value: zero spread, degenerate interval."""
        stats = calculate_statistics([42])

        assert stats.count == 1
        assert stats.std == 0.0
        assert stats.confidence_interval_95 == (42.0, 42.0)

    def test_identical_values(self):
        """Identical values: zero spread."""
        stats = calculate_statistics([7] * 50)

        assert stats.std == 0.0
        assert stats.confidence_interval_95 == (7.0, 7.0)

    def test_wall_times(self):
        """Float samples return plain floats."""
        stats = calculate_statistics([0.0123, 0.0456, 0.0089])

        assert isinstance(stats.mean, float)
        assert isinstance(stats.std, float)
        assert stats.min == 0.0089

    def test_to_dict(self):
        """to_dict is JSON-friendly."""
        stats = calculate_statistics([1, 3])

        data = stats.to_dict()

        assert data["count"] == 2
        assert data["mean"] == 2.0
        assert isinstance(data["confidence_interval_95"], list)

    def test_empty_list_raises_error(self):
        """An empty sample is an error."""
        with pytest.raises(ValueError, match="empty"):
            calculate_statistics([])
