"""
Global KKT Method - Boundary Distance by Generalized Eigenvalues

Every KKT point of the boundary-distance problem satisfies

    x1 - x2 = mu Q1 (x1 - z1),   x2 - x1 = gamma Q2 (x2 - z2)

on both boundaries. With z = z1 - z2 and M(mu, gamma) = I - Q1^{-1}/mu -
Q2^{-1}/gamma, the difference w = x1 - x2 solves M w = z, and feasibility
reads <w, Q1^{-1} w> = mu^2 and <w, Q2^{-1} w> = gamma^2. Those two
conditions make the 2d x 2d matrices

    F(mu, gamma) = mu gamma F11 + mu F10 + gamma F01
    G(mu, gamma) = mu gamma G11 + mu G10 + gamma G01

singular simultaneously. Eliminating one parameter through Kronecker
products gives two linear pencils of order 4 d^2 whose real eigenvalues
contain every multiplier mu (first pencil) and gamma (second pencil). All
(mu, gamma) combinations are turned back into point pairs and filtered by
feasibility; the closest surviving pair is the global solution.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ellipsoid_distance.exceptions import (
    DegeneratePencil,
    DimensionMismatch,
    NoFeasibleCandidate,
    UnsupportedDimension,
)
from ellipsoid_distance.geometry.boundary import boundary_intersection
from ellipsoid_distance.geometry.ellipsoid import Ellipsoid, constraint_value
from ellipsoid_distance.linalg.dense import (
    Pencil,
    distinct_values,
    generalized_real_eigenvalues,
)
from ellipsoid_distance.solvers.report import SolveReport, SolveStatus

logger = logging.getLogger(__name__)

MAX_GLOBAL_DIMENSION = 32
ZERO_MULTIPLIER = 1e-10
DEFAULT_TOL_FEAS = 1e-6
SCREENING_TOL = 1e-2
NEWTON_STEPS = 8
# Realness tolerance for the eigenvalues seeding candidate recovery
SEED_IMAG_TOL = 1e-6


@dataclass
class KktCandidate:
    """A (mu, gamma) pair turned into a boundary point pair."""

    mu: float
    gamma: float
    x1: np.ndarray
    x2: np.ndarray
    feasibility_error: float
    kkt_error: float

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.x1 - self.x2))


def _check_pair(e1: Ellipsoid, e2: Ellipsoid) -> None:
    if e1.d != e2.d:
        raise DimensionMismatch(f"ellipsoid dimensions differ: {e1.d} vs {e2.d}")


def _inverses(e1: Ellipsoid, e2: Ellipsoid) -> Tuple[np.ndarray, np.ndarray]:
    eye = np.eye(e1.d)
    p1 = linalg.cho_solve(linalg.cho_factor(e1.q.entries), eye)
    p2 = linalg.cho_solve(linalg.cho_factor(e2.q.entries), eye)
    return 0.5 * (p1 + p1.T), 0.5 * (p2 + p2.T)


def coefficient_blocks(e1: Ellipsoid, e2: Ellipsoid) -> Dict[str, np.ndarray]:
    """
    The 2d x 2d coefficient matrices of F and G, keyed "F11", "F10", ...

    The corner block of F01 and G10 is the rank-one (z1 - z2)(z1 - z2)^T.
    """
    _check_pair(e1, e2)
    d = e1.d
    p1, p2 = _inverses(e1, e2)
    zero = np.zeros((d, d))
    eye = np.eye(d)
    corner = np.outer(e1.z - e2.z, e1.z - e2.z)

    swap = np.block([[zero, eye], [eye, zero]])
    return {
        "F11": swap,
        "G11": swap.copy(),
        "F10": np.block([[zero, -p2], [-p2, zero]]),
        "F01": np.block([[p1, -p1], [-p1, corner]]),
        "G10": np.block([[p2, -p2], [-p2, corner]]),
        "G01": np.block([[zero, -p1], [-p1, zero]]),
    }


def build_pencils(e1: Ellipsoid, e2: Ellipsoid) -> Tuple[Pencil, Pencil]:
    """
    Pencils mu*A1 + B1 (eigenvalue mu) and gamma*A2 + B2 (eigenvalue gamma).

        A1 = F11 (x) G10 - F10 (x) G11,   B1 = F01 (x) G10 - F10 (x) G01
        A2 = F11 (x) G01 - F01 (x) G11,   B2 = F10 (x) G01 - F01 (x) G10
    """
    m = coefficient_blocks(e1, e2)
    kron = np.kron

    l1 = Pencil(
        a=kron(m["F11"], m["G10"]) - kron(m["F10"], m["G11"]),
        b=kron(m["F01"], m["G10"]) - kron(m["F10"], m["G01"]),
    )
    l2 = Pencil(
        a=kron(m["F11"], m["G01"]) - kron(m["F01"], m["G11"]),
        b=kron(m["F10"], m["G01"]) - kron(m["F01"], m["G10"]),
    )
    return l1, l2


class _KktSystem:
    """Point recovery and feasibility map phi(mu, gamma) of an ellipsoid pair."""

    def __init__(self, e1: Ellipsoid, e2: Ellipsoid):
        self.e1 = e1
        self.e2 = e2
        self.p1, self.p2 = _inverses(e1, e2)
        self.z = e1.z - e2.z
        self.eye = np.eye(e1.d)

    def difference(self, mu: float, gamma: float) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(w, M) with M w = z, or None if M is numerically singular."""
        m = self.eye - self.p1 / mu - self.p2 / gamma
        try:
            w = linalg.solve(m, self.z, assume_a="sym")
        except (linalg.LinAlgError, ValueError):
            return None
        if not np.all(np.isfinite(w)):
            return None
        return w, m

    def feasibility(self, w: np.ndarray, mu: float, gamma: float) -> np.ndarray:
        return np.array([w @ self.p1 @ w / mu**2 - 1.0, w @ self.p2 @ w / gamma**2 - 1.0])

    def jacobian(self, w: np.ndarray, m: np.ndarray, mu: float, gamma: float) -> np.ndarray:
        dw_dmu = -linalg.solve(m, self.p1 @ w) / mu**2
        dw_dgamma = -linalg.solve(m, self.p2 @ w) / gamma**2
        a1 = float(w @ self.p1 @ w)
        a2 = float(w @ self.p2 @ w)
        return np.array(
            [
                [
                    2.0 * (self.p1 @ w) @ dw_dmu / mu**2 - 2.0 * a1 / mu**3,
                    2.0 * (self.p1 @ w) @ dw_dgamma / mu**2,
                ],
                [
                    2.0 * (self.p2 @ w) @ dw_dmu / gamma**2,
                    2.0 * (self.p2 @ w) @ dw_dgamma / gamma**2 - 2.0 * a2 / gamma**3,
                ],
            ]
        )

    def polish(self, mu: float, gamma: float, steps: int) -> Tuple[float, float]:
        """Newton iteration on phi(mu, gamma) = 0, accepting only decreasing steps."""
        solved = self.difference(mu, gamma)
        if solved is None:
            return mu, gamma
        w, m = solved
        phi = self.feasibility(w, mu, gamma)

        for _ in range(steps):
            if np.linalg.norm(phi) < 1e-15:
                break
            try:
                step = np.linalg.solve(self.jacobian(w, m, mu, gamma), -phi)
            except np.linalg.LinAlgError:
                break
            trial_mu, trial_gamma = mu + step[0], gamma + step[1]
            if abs(trial_mu) < ZERO_MULTIPLIER or abs(trial_gamma) < ZERO_MULTIPLIER:
                break
            trial = self.difference(trial_mu, trial_gamma)
            if trial is None:
                break
            trial_phi = self.feasibility(trial[0], trial_mu, trial_gamma)
            if np.linalg.norm(trial_phi) >= np.linalg.norm(phi):
                break
            mu, gamma = trial_mu, trial_gamma
            w, m = trial
            phi = trial_phi
        return mu, gamma

    def candidate(self, mu: float, gamma: float) -> Optional[KktCandidate]:
        solved = self.difference(mu, gamma)
        if solved is None:
            return None
        w, _ = solved
        x1 = self.e1.z + self.p1 @ w / mu
        x2 = self.e2.z - self.p2 @ w / gamma
        return _make_candidate(self.e1, self.e2, mu, gamma, x1, x2)


def _make_candidate(
    e1: Ellipsoid, e2: Ellipsoid, mu: float, gamma: float, x1: np.ndarray, x2: np.ndarray
) -> KktCandidate:
    feasibility = max(abs(constraint_value(e1, x1) - 1.0), abs(constraint_value(e2, x2) - 1.0))
    kkt = float(
        np.linalg.norm(x1 - x2 - mu * e1.q.entries @ (x1 - e1.z))
        + np.linalg.norm(x2 - x1 - gamma * e2.q.entries @ (x2 - e2.z))
    )
    return KktCandidate(
        mu=float(mu),
        gamma=float(gamma),
        x1=x1,
        x2=x2,
        feasibility_error=float(feasibility),
        kkt_error=kkt,
    )


def recover_candidates(
    e1: Ellipsoid,
    e2: Ellipsoid,
    mus: Sequence[float],
    gammas: Sequence[float],
    tol_feas: float = DEFAULT_TOL_FEAS,
    polish_steps: int = NEWTON_STEPS,
) -> List[KktCandidate]:
    """
    Turn multiplier pairs into feasible KKT point pairs.

    Every (mu, gamma) of the Cartesian product is screened by its
    feasibility residual, refined by Newton steps and kept when both the
    feasibility error and the KKT residual are within
    tol_feas * (1 + ||z1 - z2||). Pairs with a zero multiplier stand for
    intersecting boundaries and produce a common boundary point if one
    exists. Singular pairs are skipped.
    """
    _check_pair(e1, e2)
    system = _KktSystem(e1, e2)
    tolerance = tol_feas * (1.0 + float(np.linalg.norm(system.z)))
    candidates: List[KktCandidate] = []
    intersection_checked = False

    for mu in mus:
        for gamma in gammas:
            if abs(mu) < ZERO_MULTIPLIER or abs(gamma) < ZERO_MULTIPLIER:
                if intersection_checked:
                    continue
                intersection_checked = True
                point = boundary_intersection(e1, e2)
                if point is not None:
                    candidates.append(_make_candidate(e1, e2, 0.0, 0.0, point, point.copy()))
                continue

            solved = system.difference(mu, gamma)
            if solved is None:
                continue
            raw = system.feasibility(solved[0], mu, gamma)
            if not np.all(np.isfinite(raw)) or np.max(np.abs(raw)) > SCREENING_TOL:
                continue

            polished_mu, polished_gamma = system.polish(mu, gamma, polish_steps)
            candidate = system.candidate(polished_mu, polished_gamma)
            if candidate is None:
                continue
            if candidate.feasibility_error <= tolerance and candidate.kkt_error <= tolerance:
                candidates.append(candidate)

    logger.debug(
        f"Recovered {len(candidates)} feasible candidates from {len(mus)}x{len(gammas)} pairs"
    )
    return candidates


def solve_global(e1: Ellipsoid, e2: Ellipsoid, tol_feas: float = DEFAULT_TOL_FEAS) -> SolveReport:
    """
    Globally closest pair of boundary points.

    Returns:
        SolveReport with status Converged, or Degenerate if a pencil is singular

    Raises:
        UnsupportedDimension: For d above MAX_GLOBAL_DIMENSION
        NoFeasibleCandidate: If filtering removes every candidate
    """
    _check_pair(e1, e2)
    if e1.d > MAX_GLOBAL_DIMENSION:
        raise UnsupportedDimension(
            f"global method supports d <= {MAX_GLOBAL_DIMENSION}, got d = {e1.d}"
        )

    l1, l2 = build_pencils(e1, e2)
    try:
        mus = generalized_real_eigenvalues(l1, imag_tol=SEED_IMAG_TOL, verify=False)
        gammas = generalized_real_eigenvalues(l2, imag_tol=SEED_IMAG_TOL, verify=False)
    except DegeneratePencil as e:
        logger.warning(f"global: degenerate instance ({e})")
        return SolveReport.degenerate(e1.d, "global", str(e))

    mus = distinct_values(mus)
    gammas = distinct_values(gammas)
    candidates = recover_candidates(e1, e2, mus, gammas, tol_feas)

    # Zero eigenvalues rarely come out exactly below ZERO_MULTIPLIER
    if not any(c.mu == 0.0 for c in candidates):
        point = boundary_intersection(e1, e2)
        if point is not None:
            candidates.append(_make_candidate(e1, e2, 0.0, 0.0, point, point.copy()))

    if not candidates:
        raise NoFeasibleCandidate(
            f"no feasible candidate among {len(mus)} x {len(gammas)} multiplier pairs"
        )

    best = min(candidates, key=lambda c: c.distance)
    report = SolveReport(
        x1=best.x1,
        x2=best.x2,
        status=SolveStatus.CONVERGED,
        iterations=0,
        solver="global",
        diagnostics={
            "mu": best.mu,
            "gamma": best.gamma,
            "mu_count": len(mus),
            "gamma_count": len(gammas),
            "candidate_count": len(candidates),
            "feasibility_error": best.feasibility_error,
            "kkt_error": best.kkt_error,
        },
    )
    logger.info(
        f"global: {len(candidates)} feasible candidates, distance {report.distance:.10g}"
    )
    return report
