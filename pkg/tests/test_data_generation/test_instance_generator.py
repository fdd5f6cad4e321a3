"""
Unit tests for the instance generators and the analytic catalog.

Tests cover:
- Reproducibility and the documented draw order
- Value ranges of both protocols
- Catalog distances
- InstanceSpec labels and validation
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from ellipsoid_distance.data_generation import (
    ANALYTIC_CATALOG,
    InstanceGenerator,
    InstanceSpec,
    Protocol,
    analytic_instance,
    gen_convex,
    gen_nonconvex,
)
from ellipsoid_distance.exceptions import UnknownInstanceName, UnsupportedDimension
from ellipsoid_distance.geometry import constraint_value


class TestConvexProtocol:
    """Test suite for gen_convex."""

    def test_reproducible(self):
        """Same (d, seed) gives identical instances."""
        a1, a2 = gen_convex(5, 42)
        b1, b2 = gen_convex(5, 42)

        assert_array_equal(a1.q.entries, b1.q.entries)
        assert_array_equal(a2.z, b2.z)

    def test_seeds_differ(self):
        """Different seeds give different instances."""
        a1, _ = gen_convex(3, 0)
        b1, _ = gen_convex(3, 1)

        assert not np.array_equal(a1.z, b1.z)

    def test_draw_order(self):
        """A1, A2, z1, z2 from one PCG64 stream."""
        d, seed = 4, 123
        rng = np.random.Generator(np.random.PCG64(seed))
        a1 = rng.uniform(-10, 10, size=(d, d))
        a2 = rng.uniform(-10, 10, size=(d, d))
        z1 = rng.uniform(-10, 10, size=d)
        z2 = rng.uniform(-10, 10, size=d)

        e1, e2 = gen_convex(d, seed)

        assert_allclose(e1.q.entries, a1.T @ a1, rtol=1e-12)
        assert_allclose(e2.q.entries, a2.T @ a2, rtol=1e-12)
        assert_array_equal(e1.z, z1)
        assert_array_equal(e2.z, z2)

    def test_centers_in_range(self):
        """Centers lie in [-10, 10]^d."""
        for seed in range(20):
            e1, e2 = gen_convex(6, seed)
            assert np.all(np.abs(e1.z) <= 10.0)
            assert np.all(np.abs(e2.z) <= 10.0)


class TestNonconvexProtocol:
    """Test suite for gen_nonconvex."""

    def test_draw_order(self):
        """A, diag(Q2), z1, z2 from one PCG64 stream."""
        d, seed = 3, 7
        rng = np.random.Generator(np.random.PCG64(seed))
        a = rng.uniform(-100, 100, size=(d, d))
        diagonal = rng.uniform(0.1, 0.6, size=d)
        z1 = rng.uniform(-0.05, 0.05, size=d)
        z2 = rng.uniform(-0.05, 0.05, size=d)

        e1, e2 = gen_nonconvex(d, seed)

        assert_allclose(e1.q.entries, a.T @ a, rtol=1e-12)
        assert_array_equal(e2.q.entries, np.diag(diagonal))
        assert_array_equal(e1.z, z1)
        assert_array_equal(e2.z, z2)

    def test_ranges(self):
        """diag(Q2) in [0.1, 0.6] and centers within 0.05 of the origin."""
        for seed in range(20):
            e1, e2 = gen_nonconvex(5, seed)
            diagonal = np.diag(e2.q.entries)
            assert np.all((diagonal >= 0.1) & (diagonal <= 0.6))
            assert_array_equal(e2.q.entries, np.diag(diagonal))
            assert np.all(np.abs(e1.z) <= 0.05) and np.all(np.abs(e2.z) <= 0.05)

    def test_small_inside_large(self):
        """The first ellipsoid contains its center and sits inside the second."""
        e1, e2 = gen_nonconvex(4, 3)

        assert constraint_value(e2, e1.z) < 1.0

    def test_generator_object(self):
        """InstanceGenerator draws consecutive instances from one stream."""
        gen = InstanceGenerator(seed=5)

        first = gen.nonconvex(2)
        second = gen.nonconvex(2)

        assert not np.array_equal(first[0].z, second[0].z)
        assert_array_equal(first[0].z, gen_nonconvex(2, 5)[0].z)

    def test_dimension_too_small(self):
        """d = 1 is rejected."""
        with pytest.raises(UnsupportedDimension):
            gen_nonconvex(1, 0)
        with pytest.raises(UnsupportedDimension):
            gen_convex(1, 0)


class TestAnalyticCatalog:
    """Test suite for the analytic catalog."""

    @pytest.mark.parametrize(
        "name,convex,boundary",
        [
            ("disjoint_spheres", 8.0, 8.0),
            ("concentric_spheres", 0.0, 2.0),
            ("intersecting_circles", 0.0, 0.0),
            ("nested_offset_balls", 0.0, 1.5),
            ("axis_ellipses", 7.0, 7.0),
        ],
    )
    def test_expected_distances(self, name, convex, boundary):
        """Closed-form distances of every entry."""
        instance = analytic_instance(name)

        assert instance.convex_distance == convex
        assert instance.boundary_distance == boundary

    def test_catalog_names(self):
        """All five entries are present."""
        assert len(ANALYTIC_CATALOG) == 5

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_dimensions(self, d):
        """Entries exist in every dimension; separation runs along the last axis."""
        e1, e2, convex, _ = analytic_instance("disjoint_spheres", d)

        assert e1.d == d and e2.d == d
        assert np.linalg.norm(e2.z - e1.z) == pytest.approx(10.0)
        assert e2.z[-1] == 10.0

    def test_axis_ellipses_closest_points(self):
        """The closest points of the axis ellipses lie on both boundaries."""
        e1, e2, _, _ = analytic_instance("axis_ellipses", 3)
        x1 = np.array([0.0, 0.0, 2.0])
        x2 = np.array([0.0, 0.0, 9.0])

        assert constraint_value(e1, x1) == pytest.approx(1.0)
        assert constraint_value(e2, x2) == pytest.approx(1.0)

    def test_unknown_name(self):
        """Unknown names raise UnknownInstanceName."""
        with pytest.raises(UnknownInstanceName):
            analytic_instance("touching_cubes")


class TestInstanceSpec:
    """Test suite for InstanceSpec."""

    def test_labels(self):
        """Labels identify protocol, dimension and seed or name."""
        assert InstanceSpec(3, 4, Protocol.CONVEX_UNIFORM).label == "convex:d3:s4"
        assert InstanceSpec(2, 0, "analytic", "axis_ellipses").label == "analytic:axis_ellipses:d2"

    def test_build_matches_generator(self):
        """build() reproduces gen_nonconvex."""
        e1, _ = InstanceSpec(3, 9, Protocol.NONCONVEX_NESTED).build()

        assert_array_equal(e1.z, gen_nonconvex(3, 9)[0].z)

    def test_analytic_needs_name(self):
        """Analytic specs without a name are invalid."""
        with pytest.raises(ValueError):
            InstanceSpec(2, 0, Protocol.ANALYTIC)

    def test_unknown_protocol(self):
        """Unknown protocols are rejected."""
        with pytest.raises(ValueError):
            InstanceSpec(2, 0, "cubic")
