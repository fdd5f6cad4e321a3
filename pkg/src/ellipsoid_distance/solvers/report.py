"""
Solve Reports - Common Result Types of All Solvers
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class SolveStatus(str, Enum):
    """Terminal status of a solve."""

    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Residuals:
    """Norms of the KKT residuals R_x, R_y, R_c (convex form of R_y)."""

    rx: float
    ry: float
    rc: float

    @property
    def total(self) -> float:
        return self.rx + self.ry + self.rc

    def to_dict(self) -> Dict[str, float]:
        return {"rx": self.rx, "ry": self.ry, "rc": self.rc}


@dataclass(frozen=True)
class NonconvexResiduals(Residuals):
    """Residual norms where ry = sum_i min(||R_y_i^-||, ||R_y_i^+||)."""


@dataclass
class SolveReport:
    """
    Outcome of one solve.

    distance is always recomputed from x1 and x2. For a Degenerate global
    solve the points are NaN.
    """

    x1: np.ndarray
    x2: np.ndarray
    status: SolveStatus
    iterations: int
    final_residuals: Optional[Residuals] = None
    penalty_log: List[Tuple[int, float]] = field(default_factory=list)
    solver: str = ""
    y: Optional[np.ndarray] = None
    lam: Optional[np.ndarray] = None
    fallback_count: int = 0
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    trace: Optional[List[np.ndarray]] = None
    distance: float = field(init=False)

    def __post_init__(self) -> None:
        self.distance = float(np.linalg.norm(self.x1 - self.x2))

    @property
    def converged(self) -> bool:
        return self.status == SolveStatus.CONVERGED

    @classmethod
    def degenerate(cls, d: int, solver: str, reason: str) -> "SolveReport":
        """Report without a solution, for singular pencils."""
        nan = np.full(d, np.nan)
        return cls(
            x1=nan,
            x2=nan.copy(),
            status=SolveStatus.DEGENERATE,
            iterations=0,
            solver=solver,
            diagnostics={"reason": reason},
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-friendly summary (NaN becomes None)."""

        def clean(v: float) -> Optional[float]:
            return None if not np.isfinite(v) else float(v)

        return {
            "solver": self.solver,
            "status": self.status.value,
            "distance": clean(self.distance),
            "iterations": self.iterations,
            "x1": [clean(v) for v in self.x1],
            "x2": [clean(v) for v in self.x2],
            "residuals": self.final_residuals.to_dict() if self.final_residuals else None,
            "penalty_updates": len(self.penalty_log),
            "fallback_count": self.fallback_count,
        }
