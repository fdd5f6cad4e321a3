"""
Ellipsoid - Domain Types and Whitening

An ellipsoid is the set {x : <x - z, Q (x - z)> <= 1} for a symmetric
positive definite Q. This module converts general quadrics to that form
and builds the whitened data (S_i = sqrt(Q_i), c_i = S_i z_i) used by the
ADMM solvers, where y_i = S_i x_i - c_i ranges over the unit ball.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg

from ellipsoid_distance.exceptions import DegenerateQuadric, DimensionMismatch
from ellipsoid_distance.linalg.dense import SymPdMatrix, sqrt_pd

logger = logging.getLogger(__name__)


def _as_vector(v: ArrayLike, d: int, name: str) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if arr.shape != (d,):
        raise DimensionMismatch(f"{name} must have shape ({d},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Ellipsoid {x : <x - z, q (x - z)> <= 1}."""

    q: SymPdMatrix
    z: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", _as_vector(self.z, self.q.order, "center"))

    @classmethod
    def from_arrays(cls, q: ArrayLike, z: ArrayLike) -> "Ellipsoid":
        """Validate raw arrays (symmetrize, PD check) and build an Ellipsoid."""
        return cls(q=SymPdMatrix.from_array(q, name="shape matrix"), z=np.asarray(z, dtype=float))

    @property
    def d(self) -> int:
        return self.q.order

    def contains(self, x: ArrayLike, tol: float = 0.0) -> bool:
        return constraint_value(self, x) <= 1.0 + tol

    def __repr__(self) -> str:
        return f"Ellipsoid(d={self.d}, z={np.array2string(self.z, precision=4)})"


@dataclass(frozen=True, eq=False)
class GeneralQuadric:
    """Sublevel set {x : <x, a x> + <b, x> + alpha <= 0}."""

    a: SymPdMatrix
    b: np.ndarray
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", _as_vector(self.b, self.a.order, "linear term"))
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def d(self) -> int:
        return self.a.order


@dataclass(frozen=True, eq=False)
class WhitenedPair:
    """
    Whitened data of an ellipsoid pair.

    Stacked vectors used throughout the solvers have length 2d: the first d
    entries belong to the first ellipsoid, the last d to the second.
    """

    s1: SymPdMatrix
    s2: SymPdMatrix
    c1: np.ndarray
    c2: np.ndarray
    d: int
    q1: np.ndarray
    q2: np.ndarray

    @property
    def c(self) -> np.ndarray:
        return np.concatenate([self.c1, self.c2])

    def split(self, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Split a stacked vector into its two blocks."""
        if v.shape != (2 * self.d,):
            raise DimensionMismatch(
                f"expected a stacked vector of length {2 * self.d}, got {v.shape}"
            )
        return v[: self.d], v[self.d :]

    def apply_s(self, x: np.ndarray) -> np.ndarray:
        """Blockwise (S_1 x_1; S_2 x_2)."""
        x1, x2 = self.split(x)
        return np.concatenate([self.s1.entries @ x1, self.s2.entries @ x2])

    def coupling_residual(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """R_c = S x - y - c, the residual of the coupling constraint."""
        return self.apply_s(x) - y - self.c

    def block_norms(self, v: np.ndarray) -> np.ndarray:
        """Euclidean norm of each block of a stacked vector."""
        v1, v2 = self.split(v)
        return np.array([np.linalg.norm(v1), np.linalg.norm(v2)])


def whiten(e1: Ellipsoid, e2: Ellipsoid) -> WhitenedPair:
    """
    Whitening transform of an ellipsoid pair.

    Raises:
        DimensionMismatch: If the ellipsoids live in different dimensions
    """
    if e1.d != e2.d:
        raise DimensionMismatch(f"ellipsoid dimensions differ: {e1.d} vs {e2.d}")

    s1 = sqrt_pd(e1.q)
    s2 = sqrt_pd(e2.q)
    return WhitenedPair(
        s1=s1,
        s2=s2,
        c1=s1.entries @ e1.z,
        c2=s2.entries @ e2.z,
        d=e1.d,
        q1=e1.q.entries,
        q2=e2.q.entries,
    )


def constraint_value(e: Ellipsoid, x: ArrayLike) -> float:
    """Quadratic form <x - z, Q (x - z)>; equals 1 on the boundary."""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (e.d,):
        raise DimensionMismatch(f"point of shape {vec.shape} does not match dimension {e.d}")
    diff = vec - e.z
    return float(diff @ e.q.entries @ diff)


def from_general_quadric(g: GeneralQuadric) -> Ellipsoid:
    """
    Convert <x, A x> + <b, x> + alpha <= 0 into center/shape form.

    The center is z = -A^{-1} b / 2 and Q = A / (-<b, z>/2 - alpha).

    Raises:
        DegenerateQuadric: If the scaling denominator is not positive
    """
    z = -0.5 * linalg.cho_solve(linalg.cho_factor(g.a.entries), g.b)
    denominator = -0.5 * float(g.b @ z) - g.alpha
    if denominator <= 0.0:
        raise DegenerateQuadric(
            f"quadric has empty interior (scaling denominator {denominator:.3e} <= 0)"
        )
    return Ellipsoid.from_arrays(g.a.entries / denominator, z)


def to_general_quadric(e: Ellipsoid) -> GeneralQuadric:
    """Inverse of from_general_quadric: A = Q, b = -2 Q z, alpha = <z, Q z> - 1."""
    qz = e.q.entries @ e.z
    return GeneralQuadric(a=e.q, b=-2.0 * qz, alpha=float(e.z @ qz) - 1.0)


def reflect_through_center(e: Ellipsoid, x: ArrayLike) -> np.ndarray:
    """The point diametrically opposed to x across the center: 2z - x."""
    return 2.0 * e.z - np.asarray(x, dtype=float)


def boundary_point(e: Ellipsoid, direction: ArrayLike) -> np.ndarray:
    """Point z + S^{-1} u of the boundary for the unit vector u along direction."""
    u = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    s = sqrt_pd(e.q).entries
    return e.z + linalg.solve(s, u / norm, assume_a="pos")
