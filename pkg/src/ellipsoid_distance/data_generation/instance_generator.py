"""
Instance Generator - Building Block for Seeded Test Problems

This module creates ellipsoid pairs for the two experimental protocols and
a catalog of instances with closed-form distances.

Random streams come from numpy's PCG64 bit generator seeded with the
instance seed. The order of draws is part of the contract:

    convex     A1 (redrawn until full rank), A2 (same), z1, z2
               entries of A_i and z_i uniform in [-10, 10], Q_i = A_i^T A_i
    nonconvex  A (redrawn until full rank), diag(Q2), z1, z2
               entries of A uniform in [-100, 100], Q1 = A^T A,
               diag(Q2) uniform in [0.1, 0.6], z_i uniform in [-0.05, 0.05]
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, NamedTuple, Optional, Tuple

import numpy as np

from ellipsoid_distance.exceptions import UnknownInstanceName, UnsupportedDimension
from ellipsoid_distance.geometry.ellipsoid import Ellipsoid
from ellipsoid_distance.linalg.dense import full_rank, unit_vector

logger = logging.getLogger(__name__)

FULL_RANK_TOL = 1e-8
MAX_REDRAWS = 1000

CONVEX_RANGE = 10.0
NONCONVEX_MATRIX_RANGE = 100.0
NONCONVEX_DIAGONAL = (0.1, 0.6)
NONCONVEX_CENTER_RANGE = 0.05


class Protocol(str, Enum):
    """Recipe used to build an instance."""

    CONVEX_UNIFORM = "convex"
    NONCONVEX_NESTED = "nonconvex"
    ANALYTIC = "analytic"


class AnalyticInstance(NamedTuple):
    """Catalog entry; unpacks as (e1, e2, convex distance, boundary distance)."""

    e1: Ellipsoid
    e2: Ellipsoid
    convex_distance: float
    boundary_distance: float


class InstanceGenerator:
    """
    Generate reproducible ellipsoid pairs.

    Input Data:
        - d: Ambient dimension (d >= 2)

    Output Data:
        - (Ellipsoid, Ellipsoid) pairs

    Setup Data:
        - seed: Seed of the PCG64 stream; one generator per instance
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def _check_dimension(self, d: int) -> None:
        if d < 2:
            raise UnsupportedDimension(f"instances need d >= 2, got d = {d}")

    def _full_rank_matrix(self, d: int, bound: float) -> np.ndarray:
        for attempt in range(MAX_REDRAWS):
            a = self._rng.uniform(-bound, bound, size=(d, d))
            if full_rank(a, FULL_RANK_TOL):
                if attempt:
                    logger.debug(f"Seed {self.seed}: full-rank matrix after {attempt} redraw(s)")
                return a
        raise RuntimeError(f"no full-rank {d}x{d} matrix after {MAX_REDRAWS} draws")

    def convex(self, d: int) -> Tuple[Ellipsoid, Ellipsoid]:
        """Two random ellipsoids with Q_i = A_i^T A_i and centers in [-10, 10]^d."""
        self._check_dimension(d)
        a1 = self._full_rank_matrix(d, CONVEX_RANGE)
        a2 = self._full_rank_matrix(d, CONVEX_RANGE)
        z1 = self._rng.uniform(-CONVEX_RANGE, CONVEX_RANGE, size=d)
        z2 = self._rng.uniform(-CONVEX_RANGE, CONVEX_RANGE, size=d)
        return Ellipsoid.from_arrays(a1.T @ a1, z1), Ellipsoid.from_arrays(a2.T @ a2, z2)

    def nonconvex(self, d: int) -> Tuple[Ellipsoid, Ellipsoid]:
        """A small random ellipsoid near the center of a larger axis-aligned one."""
        self._check_dimension(d)
        a = self._full_rank_matrix(d, NONCONVEX_MATRIX_RANGE)
        diagonal = self._rng.uniform(*NONCONVEX_DIAGONAL, size=d)
        z1 = self._rng.uniform(-NONCONVEX_CENTER_RANGE, NONCONVEX_CENTER_RANGE, size=d)
        z2 = self._rng.uniform(-NONCONVEX_CENTER_RANGE, NONCONVEX_CENTER_RANGE, size=d)
        return Ellipsoid.from_arrays(a.T @ a, z1), Ellipsoid.from_arrays(np.diag(diagonal), z2)


def gen_convex(d: int, seed: int) -> Tuple[Ellipsoid, Ellipsoid]:
    """Instance of the convex protocol."""
    return InstanceGenerator(seed).convex(d)


def gen_nonconvex(d: int, seed: int) -> Tuple[Ellipsoid, Ellipsoid]:
    """Instance of the nested nonconvex protocol."""
    return InstanceGenerator(seed).nonconvex(d)


# Analytic catalog. Centers are separated along the last axis so that the
# default nonconvex start (e_1, e_1) is not aligned with the center line.


def _ball(d: int, radius: float, center: np.ndarray) -> Ellipsoid:
    return Ellipsoid.from_arrays(np.eye(d) / radius**2, center)


def _disjoint_spheres(d: int) -> AnalyticInstance:
    return AnalyticInstance(
        _ball(d, 1.0, np.zeros(d)), _ball(d, 1.0, 10.0 * unit_vector(d, d - 1)), 8.0, 8.0
    )


def _concentric_spheres(d: int) -> AnalyticInstance:
    return AnalyticInstance(_ball(d, 1.0, np.zeros(d)), _ball(d, 3.0, np.zeros(d)), 0.0, 2.0)


def _intersecting_circles(d: int) -> AnalyticInstance:
    return AnalyticInstance(
        _ball(d, 1.0, np.zeros(d)), _ball(d, 1.0, unit_vector(d, d - 1)), 0.0, 0.0
    )


def _nested_offset_balls(d: int) -> AnalyticInstance:
    # Closest boundary points lie on the far side: 3 - (0.5 + 1)
    return AnalyticInstance(
        _ball(d, 1.0, 0.5 * unit_vector(d, 0)), _ball(d, 3.0, np.zeros(d)), 0.0, 1.5
    )


def _axis_ellipses(d: int) -> AnalyticInstance:
    q1 = np.ones(d)
    q1[-1] = 0.25
    q2 = np.full(d, 1.0 / 9.0)
    q2[-1] = 1.0
    return AnalyticInstance(
        Ellipsoid.from_arrays(np.diag(q1), np.zeros(d)),
        Ellipsoid.from_arrays(np.diag(q2), 10.0 * unit_vector(d, d - 1)),
        7.0,
        7.0,
    )


ANALYTIC_CATALOG: Dict[str, Callable[[int], AnalyticInstance]] = {
    "disjoint_spheres": _disjoint_spheres,
    "concentric_spheres": _concentric_spheres,
    "intersecting_circles": _intersecting_circles,
    "nested_offset_balls": _nested_offset_balls,
    "axis_ellipses": _axis_ellipses,
}


def analytic_instance(name: str, d: int = 2) -> AnalyticInstance:
    """
    Catalog instance with its closed-form distances.

    Raises:
        UnknownInstanceName: If name is not in ANALYTIC_CATALOG
    """
    if name not in ANALYTIC_CATALOG:
        raise UnknownInstanceName(
            f"unknown analytic instance {name!r}; choose from {', '.join(ANALYTIC_CATALOG)}"
        )
    if d < 2:
        raise UnsupportedDimension(f"instances need d >= 2, got d = {d}")
    return ANALYTIC_CATALOG[name](d)


@dataclass(frozen=True)
class InstanceSpec:
    """Identifier of one instance: protocol, dimension, seed (and catalog name)."""

    d: int
    seed: int
    protocol: Protocol
    name: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "protocol", Protocol(self.protocol))
        if self.d < 2:
            raise UnsupportedDimension(f"instances need d >= 2, got d = {self.d}")
        if self.protocol == Protocol.ANALYTIC and self.name is None:
            raise ValueError("analytic instances need a catalog name")

    @property
    def label(self) -> str:
        if self.protocol == Protocol.ANALYTIC:
            return f"analytic:{self.name}:d{self.d}"
        return f"{self.protocol.value}:d{self.d}:s{self.seed}"

    def build(self) -> Tuple[Ellipsoid, Ellipsoid]:
        if self.protocol == Protocol.CONVEX_UNIFORM:
            return gen_convex(self.d, self.seed)
        if self.protocol == Protocol.NONCONVEX_NESTED:
            return gen_nonconvex(self.d, self.seed)
        assert self.name is not None
        instance = analytic_instance(self.name, self.d)
        return instance.e1, instance.e2
