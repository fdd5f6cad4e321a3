"""
Unit tests for boundary range queries, containment and intersection points.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ellipsoid_distance.geometry import (
    Ellipsoid,
    boundary_intersection,
    boundary_quadratic_range,
    constraint_value,
    is_contained,
)


def ball(center, radius: float = 1.0) -> Ellipsoid:
    center = np.asarray(center, dtype=float)
    return Ellipsoid.from_arrays(np.eye(center.size) / radius**2, center)


def grid_range(e1: Ellipsoid, e2: Ellipsoid, n: int = 20000):
    """Brute-force range over a dense angular grid (2-D only)."""
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    s1 = np.linalg.cholesky(np.linalg.inv(e1.q.entries))
    points = e1.z + (s1 @ np.vstack([np.cos(t), np.sin(t)])).T
    values = [constraint_value(e2, p) for p in points]
    return min(values), max(values)


class TestBoundaryQuadraticRange:
    """Test suite for boundary_quadratic_range."""

    def test_offset_unit_circles(self):
        """Unit circles at 0 and (1, 0): values range over [0, 4]."""
        r = boundary_quadratic_range(ball([0.0, 0.0]), ball([1.0, 0.0]))

        assert r.min_value == pytest.approx(0.0, abs=1e-12)
        assert r.max_value == pytest.approx(4.0)
        assert_allclose(r.x_min, [1.0, 0.0], atol=1e-8)
        assert_allclose(r.x_max, [-1.0, 0.0], atol=1e-8)

    def test_disjoint_circles(self):
        """Unit circles 10 apart: values range over [81, 121]."""
        r = boundary_quadratic_range(ball([0.0, 0.0]), ball([10.0, 0.0]))

        assert r.min_value == pytest.approx(81.0)
        assert r.max_value == pytest.approx(121.0)

    def test_concentric_hard_case(self):
        """Concentric pair where the linear term vanishes."""
        e1 = ball([0.0, 0.0])
        e2 = Ellipsoid.from_arrays(np.diag([0.25, 1.0]), [0.0, 0.0])

        r = boundary_quadratic_range(e1, e2)

        assert r.min_value == pytest.approx(0.25)
        assert r.max_value == pytest.approx(1.0)

    def test_matches_angular_grid(self):
        """Random 2-D pairs agree with a dense grid."""
        rng = np.random.Generator(np.random.PCG64(17))
        for _ in range(20):
            a1, a2 = rng.uniform(-2, 2, size=(2, 2, 2))
            e1 = Ellipsoid.from_arrays(a1.T @ a1 + 0.2 * np.eye(2), rng.uniform(-1, 1, size=2))
            e2 = Ellipsoid.from_arrays(a2.T @ a2 + 0.2 * np.eye(2), rng.uniform(-1, 1, size=2))

            r = boundary_quadratic_range(e1, e2)
            lo, hi = grid_range(e1, e2)

            assert r.min_value <= lo + 1e-9
            assert r.max_value >= hi - 1e-9
            assert r.min_value == pytest.approx(lo, rel=1e-3, abs=1e-6)
            assert r.max_value == pytest.approx(hi, rel=1e-3, abs=1e-6)

    def test_extreme_points_on_boundary(self):
        """Reported extreme points lie on the first boundary."""
        e1 = Ellipsoid.from_arrays([[2.0, 0.3], [0.3, 1.0]], [0.2, -0.1])
        e2 = Ellipsoid.from_arrays(np.diag([0.5, 3.0]), [1.0, 1.0])

        r = boundary_quadratic_range(e1, e2)

        assert constraint_value(e1, r.x_min) == pytest.approx(1.0)
        assert constraint_value(e1, r.x_max) == pytest.approx(1.0)
        assert constraint_value(e2, r.x_min) == pytest.approx(r.min_value)


class TestContainment:
    """Test suite for is_contained."""

    def test_nested_balls(self):
        """A unit ball at 0.5 e1 lies inside the radius-3 ball at 0."""
        inner = ball([0.5, 0.0, 0.0])
        outer = ball([0.0, 0.0, 0.0], 3.0)

        assert is_contained(inner, outer)
        assert not is_contained(outer, inner)

    def test_overlapping(self):
        """Overlapping circles are not nested."""
        assert not is_contained(ball([0.0, 0.0]), ball([1.0, 0.0]))


class TestBoundaryIntersection:
    """Test suite for boundary_intersection."""

    def test_intersecting_circles(self):
        """Unit circles at 0 and (1, 0) meet at (0.5, +-sqrt(3)/2)."""
        e1, e2 = ball([0.0, 0.0]), ball([1.0, 0.0])

        point = boundary_intersection(e1, e2)

        assert point is not None
        assert point[0] == pytest.approx(0.5, abs=1e-10)
        assert abs(point[1]) == pytest.approx(np.sqrt(3.0) / 2.0, abs=1e-10)

    def test_point_on_both_boundaries(self):
        """Intersection points of general ellipsoids lie on both boundaries."""
        e1 = Ellipsoid.from_arrays([[1.0, 0.1], [0.1, 1.2]], [0.0, 0.0])
        e2 = Ellipsoid.from_arrays(np.diag([4.0, 0.25]), [0.3, 0.1])

        point = boundary_intersection(e1, e2)

        assert point is not None
        assert constraint_value(e1, point) == pytest.approx(1.0, abs=1e-10)
        assert constraint_value(e2, point) == pytest.approx(1.0, abs=1e-9)

    def test_disjoint(self):
        """Separated circles have no common boundary point."""
        assert boundary_intersection(ball([0.0, 0.0]), ball([10.0, 0.0])) is None

    def test_nested(self):
        """Strictly nested balls have no common boundary point."""
        assert boundary_intersection(ball([0.0, 0.0]), ball([0.0, 0.0], 3.0)) is None
