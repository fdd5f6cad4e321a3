"""
Verification Sweep: Cross-Solver Agreement

Nonconvex mode runs admm-nc, admm-nc-restart and global on each instance
and checks that the restarted ADMM finds the global boundary distance.
Convex mode checks that admm and sa-admm agree on the convex distance.
"""

import dataclasses
import logging
import math
from typing import Any, Dict, List, Optional, Sequence

from ellipsoid_distance.data_generation import InstanceSpec, Protocol
from ellipsoid_distance.evaluation import FAILED_STATUS, records_to_frame
from ellipsoid_distance.exceptions import ConfigError, UnsupportedDimension
from ellipsoid_distance.experiments.base_experiment import BaseExperiment, ExperimentConfig
from ellipsoid_distance.solvers import SolveStatus

logger = logging.getLogger(__name__)

MAX_VERIFY_DIMENSION = 7
NONCONVEX_AGREEMENT_TOL = 1e-4
CONVEX_AGREEMENT_TOL = 1e-5

NONCONVEX_SOLVERS = ("admm-nc", "admm-nc-restart", "global")
CONVEX_SOLVERS = ("admm", "sa-admm")


def _finite(value: Optional[float]) -> bool:
    return value is not None and not math.isnan(value)


class VerificationExperiment(BaseExperiment):
    """
    Compare solvers instance by instance.

    Instances on which global reports Degenerate (or fails) are skipped in
    the nonconvex comparison and counted.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        protocol: Protocol,
        d: int,
        count: int = 100,
        seed: int = 0,
    ):
        """
        Initialize the verification sweep.

        Raises:
            UnsupportedDimension: For nonconvex mode with d above 7
            ConfigError: For the analytic protocol or a non-positive count
        """
        self.protocol = Protocol(protocol)
        if self.protocol == Protocol.ANALYTIC:
            raise ConfigError("verify supports the convex and nonconvex protocols")
        if self.protocol == Protocol.NONCONVEX_NESTED and d > MAX_VERIFY_DIMENSION:
            raise UnsupportedDimension(
                f"nonconvex verification supports d <= {MAX_VERIFY_DIMENSION}, got d = {d}"
            )
        if count < 1:
            raise ConfigError(f"count must be positive, got {count}")

        # The restarted column always restarts
        config = dataclasses.replace(
            config, settings=dataclasses.replace(config.settings, restart=True)
        )
        super().__init__(config)

        self.d = d
        self.count = count
        self.seed = seed

    @property
    def solvers(self) -> Sequence[str]:
        if self.protocol == Protocol.NONCONVEX_NESTED:
            return NONCONVEX_SOLVERS
        return CONVEX_SOLVERS

    def _generate_instances(self) -> List[InstanceSpec]:
        return [InstanceSpec(self.d, self.seed + i, self.protocol) for i in range(self.count)]

    def _by_instance(self) -> Dict[int, Dict[str, Any]]:
        rows: Dict[int, Dict[str, Any]] = {}
        for record in self.records:
            rows.setdefault(record.seed, {})[record.solver] = record
        return rows

    def analyze(self) -> Dict[str, Any]:
        if self.protocol == Protocol.NONCONVEX_NESTED:
            summary = self._analyze_nonconvex()
        else:
            summary = self._analyze_convex()

        summary["failed_rows"] = int(
            (records_to_frame(self.records)["status"] == FAILED_STATUS).sum()
        )
        return summary

    def _analyze_nonconvex(self) -> Dict[str, Any]:
        compared = 0
        degenerate = 0
        global_failed = 0
        disagreements: List[int] = []
        non_global_single: List[int] = []
        repaired: List[int] = []
        max_diff = 0.0

        for seed, by_solver in sorted(self._by_instance().items()):
            reference = by_solver.get("global")
            if reference is not None and reference.status == SolveStatus.DEGENERATE.value:
                degenerate += 1
                continue
            if reference is None or not _finite(reference.distance):
                global_failed += 1
                continue

            restarted = by_solver.get("admm-nc-restart")
            single = by_solver.get("admm-nc")
            if restarted is None or not _finite(restarted.distance):
                disagreements.append(seed)
                continue

            compared += 1
            diff = abs(restarted.distance - reference.distance)
            max_diff = max(max_diff, diff)
            restart_agrees = diff <= NONCONVEX_AGREEMENT_TOL
            if not restart_agrees:
                disagreements.append(seed)

            if single is not None and _finite(single.distance):
                if abs(single.distance - reference.distance) > NONCONVEX_AGREEMENT_TOL:
                    non_global_single.append(seed)
                    if restart_agrees:
                        repaired.append(seed)

        logger.info(
            f"verify nonconvex d={self.d}: {compared} compared, {degenerate} degenerate, "
            f"{len(disagreements)} disagreement(s), max |diff| {max_diff:.3g}, "
            f"{len(non_global_single)} non-global single run(s)"
        )

        return {
            "mode": "nonconvex",
            "d": self.d,
            "instances": self.count,
            "compared": compared,
            "degenerate": degenerate,
            "global_failed": global_failed,
            "max_abs_difference": max_diff,
            "disagreements": len(disagreements),
            "disagreement_seeds": disagreements,
            "non_global_single_runs": len(non_global_single),
            "non_global_single_fraction": len(non_global_single) / compared if compared else 0.0,
            "repaired": len(repaired),
            "repaired_all": len(repaired) == len(non_global_single),
            "tolerance": NONCONVEX_AGREEMENT_TOL,
        }

    def _analyze_convex(self) -> Dict[str, Any]:
        compared = 0
        disagreements: List[int] = []
        max_diff = 0.0

        for seed, by_solver in sorted(self._by_instance().items()):
            fixed = by_solver.get("admm")
            adaptive = by_solver.get("sa-admm")
            if fixed is None or adaptive is None:
                disagreements.append(seed)
                continue
            if not (_finite(fixed.distance) and _finite(adaptive.distance)):
                disagreements.append(seed)
                continue

            compared += 1
            diff = abs(fixed.distance - adaptive.distance)
            max_diff = max(max_diff, diff)
            if diff > CONVEX_AGREEMENT_TOL:
                disagreements.append(seed)

        logger.info(
            f"verify convex d={self.d}: {compared} compared, {len(disagreements)} "
            f"disagreement(s), max |diff| {max_diff:.3g}"
        )

        return {
            "mode": "convex",
            "d": self.d,
            "instances": self.count,
            "compared": compared,
            "max_abs_difference": max_diff,
            "disagreements": len(disagreements),
            "disagreement_seeds": disagreements,
            "tolerance": CONVEX_AGREEMENT_TOL,
        }
