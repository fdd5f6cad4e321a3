"""
Boundary Queries - Range of One Quadratic Over Another Ellipsoid's Boundary

Parametrize the boundary of e1 as x = z1 + S1^{-1} y with ||y|| = 1. Then
constraint_value(e2, x) = ||C y + c||^2 with C = S2 S1^{-1} and
c = S2 (z1 - z2). Stationary points on the sphere solve
(K - nu I) y = -b with K = C^T C, b = C^T c; those are found through the
2d x 2d eigenproblem [[K, -I], [-b b^T, K]], plus the eigenvectors of K for
the hard case where b is orthogonal to an eigenvector.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import linalg, optimize

from ellipsoid_distance.geometry.ellipsoid import Ellipsoid, constraint_value
from ellipsoid_distance.linalg.dense import sqrt_pd

logger = logging.getLogger(__name__)

_IMAG_TOL = 1e-8


@dataclass
class QuadraticRange:
    """Extremes of constraint_value(e2, .) over the boundary of e1."""

    min_value: float
    max_value: float
    x_min: np.ndarray
    x_max: np.ndarray
    y_min: np.ndarray
    y_max: np.ndarray


class _BoundaryMap:
    """Unit-sphere parametrization of the first ellipsoid's boundary."""

    def __init__(self, e1: Ellipsoid, e2: Ellipsoid):
        s1 = sqrt_pd(e1.q).entries
        s2 = sqrt_pd(e2.q).entries
        self.e1 = e1
        self.e2 = e2
        self.s1_inv = linalg.inv(s1)
        self.c_mat = s2 @ self.s1_inv
        self.c_vec = s2 @ (e1.z - e2.z)

    def point(self, y: np.ndarray) -> np.ndarray:
        return self.e1.z + self.s1_inv @ y

    def value(self, y: np.ndarray) -> float:
        r = self.c_mat @ y + self.c_vec
        return float(r @ r)


def _stationary_directions(k: np.ndarray, b: np.ndarray) -> List[np.ndarray]:
    d = k.shape[0]
    directions: List[np.ndarray] = []

    # Secular-equation points: (K - nu I) y = -b, ||y|| = 1
    block = np.block([[k, -np.eye(d)], [-np.outer(b, b), k]])
    nus, vecs = linalg.eig(block)
    for nu, vec in zip(nus, vecs.T):
        if abs(nu.imag) > _IMAG_TOL * (1.0 + abs(nu.real)):
            continue
        w1 = vec[:d].real
        w2 = vec[d:].real
        t = float(b @ w1)
        if abs(t) <= 1e-14 * max(1.0, float(np.linalg.norm(b))):
            continue
        y = -w2 / t
        norm = np.linalg.norm(y)
        if norm > 0.0 and np.isfinite(norm):
            directions.append(y / norm)

    # Hard case: y = p + s v with v an eigenvector of K
    eigvals, eigvecs = linalg.eigh(k)
    for lam, v in zip(eigvals, eigvecs.T):
        directions.extend([v, -v])
        p = -np.linalg.lstsq(k - lam * np.eye(d), b, rcond=None)[0]
        p -= (p @ v) * v
        p_norm_sq = float(p @ p)
        if p_norm_sq < 1.0:
            s = np.sqrt(1.0 - p_norm_sq)
            directions.extend([p + s * v, p - s * v])

    return directions


def boundary_quadratic_range(e1: Ellipsoid, e2: Ellipsoid) -> QuadraticRange:
    """
    Minimum and maximum of constraint_value(e2, x) for x on the boundary of e1.

    Boundaries intersect iff min_value <= 1 <= max_value; e1 lies inside e2
    iff max_value <= 1.
    """
    bmap = _BoundaryMap(e1, e2)
    k = bmap.c_mat.T @ bmap.c_mat
    b = bmap.c_mat.T @ bmap.c_vec

    directions = _stationary_directions(k, b)
    values = [bmap.value(y) for y in directions]
    i_min = int(np.argmin(values))
    i_max = int(np.argmax(values))

    return QuadraticRange(
        min_value=values[i_min],
        max_value=values[i_max],
        x_min=bmap.point(directions[i_min]),
        x_max=bmap.point(directions[i_max]),
        y_min=directions[i_min],
        y_max=directions[i_max],
    )


def is_contained(inner: Ellipsoid, outer: Ellipsoid) -> bool:
    """True when inner is a subset of outer."""
    return boundary_quadratic_range(inner, outer).max_value <= 1.0


def boundary_intersection(
    e1: Ellipsoid, e2: Ellipsoid, xtol: float = 1e-14
) -> Optional[np.ndarray]:
    """
    A point common to both boundaries, or None if they do not meet.

    Root-finds constraint_value(e2, .) - 1 along the great-circle arc of the
    parameter sphere joining the minimizing and maximizing directions.
    """
    rng_info = boundary_quadratic_range(e1, e2)
    if not rng_info.min_value <= 1.0 <= rng_info.max_value:
        return None

    bmap = _BoundaryMap(e1, e2)
    y_lo, y_hi = rng_info.y_min, rng_info.y_max

    u = y_hi - (y_hi @ y_lo) * y_lo
    u_norm = np.linalg.norm(u)
    if u_norm <= 1e-12:
        # Antipodal or equal extremes; any orthogonal direction spans the arc
        basis = linalg.null_space(y_lo[np.newaxis, :])
        u = basis[:, 0]
    else:
        u = u / u_norm
    theta = float(np.arctan2(y_hi @ u, y_hi @ y_lo))
    if theta <= 0.0:
        theta = np.pi

    def arc(t: float) -> np.ndarray:
        return np.cos(t) * y_lo + np.sin(t) * u

    def excess(t: float) -> float:
        return bmap.value(arc(t)) - 1.0

    f_lo, f_hi = excess(0.0), excess(theta)
    if f_lo == 0.0:
        t_star = 0.0
    elif f_hi == 0.0:
        t_star = theta
    elif f_lo * f_hi > 0.0:
        # Range within rounding of 1 at one end only
        t_star = 0.0 if abs(f_lo) < abs(f_hi) else theta
    else:
        t_star = optimize.brentq(excess, 0.0, theta, xtol=xtol)

    point = bmap.point(arc(t_star))
    logger.debug(
        f"Boundary intersection at g1={constraint_value(e1, point):.3e}, "
        f"g2={constraint_value(e2, point):.3e}"
    )
    return point
