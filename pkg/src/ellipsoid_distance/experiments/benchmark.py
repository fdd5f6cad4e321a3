"""
Benchmark Sweep: Iteration Counts per Dimension

Runs a list of solvers over seeded instances of one protocol for several
dimensions and summarizes iteration counts and wall time per
(dimension, solver).

Questions answered by the summary:
- How do the mean iteration counts of admm and sa-admm grow with d?
- In how many dimensions does sa-admm need no more iterations than admm?
- Is the restarted nonconvex distance never worse than the single run?
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

from ellipsoid_distance.data_generation import ANALYTIC_CATALOG, InstanceSpec, Protocol
from ellipsoid_distance.evaluation import FAILED_STATUS, calculate_statistics, records_to_frame
from ellipsoid_distance.exceptions import ConfigError
from ellipsoid_distance.experiments.base_experiment import BaseExperiment, ExperimentConfig
from ellipsoid_distance.solvers.registry import SOLVER_NAMES

logger = logging.getLogger(__name__)

# Slack allowed when comparing restarted and single-run distances
RESTART_SLACK = 1e-9


class BenchmarkExperiment(BaseExperiment):
    """
    One RunRecord per (instance, solver) plus a per-dimension summary.

    For the analytic protocol every catalog instance is run once per
    dimension (count is ignored).
    """

    def __init__(
        self,
        config: ExperimentConfig,
        protocol: Protocol,
        dimensions: Sequence[int],
        count: int = 10,
        solvers: Sequence[str] = ("admm", "sa-admm"),
        seed: int = 0,
    ):
        """
        Initialize the benchmark.

        Args:
            config: Experiment configuration
            protocol: Instance protocol
            dimensions: Dimensions to sweep
            count: Instances per dimension (seeds seed, seed+1, ...)
            solvers: Registry names of the solvers to run
            seed: First seed

        Raises:
            ConfigError: For unknown solver names or an empty sweep
        """
        super().__init__(config)

        unknown = [s for s in solvers if s not in SOLVER_NAMES]
        if unknown:
            raise ConfigError(f"unknown solver(s): {', '.join(unknown)}")
        if not dimensions or not solvers:
            raise ConfigError("benchmark needs at least one dimension and one solver")
        if count < 1:
            raise ConfigError(f"count must be positive, got {count}")

        self.protocol = Protocol(protocol)
        self.dimensions = list(dimensions)
        self.count = count
        self._solvers = list(solvers)
        self.seed = seed

        logger.info(
            f"Benchmark: protocol={self.protocol.value}, d={self.dimensions}, "
            f"count={self.count}, solvers={self._solvers}"
        )

    @property
    def solvers(self) -> Sequence[str]:
        return self._solvers

    def _generate_instances(self) -> List[InstanceSpec]:
        if self.protocol == Protocol.ANALYTIC:
            return [
                InstanceSpec(d, index, self.protocol, name)
                for d in self.dimensions
                for index, name in enumerate(ANALYTIC_CATALOG)
            ]
        return [
            InstanceSpec(d, self.seed + i, self.protocol)
            for d in self.dimensions
            for i in range(self.count)
        ]

    def analyze(self) -> Dict[str, Any]:
        """
        Per-(d, solver) iteration statistics and timing.

        Returns:
            Dictionary with "per_dimension", "sa_admm_not_worse",
            "restart_violations" and row counts by status
        """
        frame = records_to_frame(self.records)
        per_dimension: Dict[str, Dict[str, Any]] = {}

        for (d, solver), group in frame.groupby(["d", "solver"], sort=True):
            solved = group[group["status"] != FAILED_STATUS]
            entry: Dict[str, Any] = {
                "rows": int(len(group)),
                "converged": int((group["status"] == "Converged").sum()),
                "failed": int((group["status"] == FAILED_STATUS).sum()),
                "total_wall_time": float(group["wall_time"].sum()),
                "iterations": None,
            }
            if len(solved):
                entry["iterations"] = calculate_statistics(solved["iterations"].tolist()).to_dict()
            per_dimension.setdefault(str(d), {})[solver] = entry

        summary: Dict[str, Any] = {
            "protocol": self.protocol.value,
            "dimensions": self.dimensions,
            "solvers": self._solvers,
            "status_counts": {k: int(v) for k, v in frame["status"].value_counts().items()},
            "per_dimension": per_dimension,
        }

        if {"admm", "sa-admm"} <= set(self._solvers):
            summary["sa_admm_not_worse"] = self._sa_admm_not_worse(per_dimension)
        if {"admm-nc", "admm-nc-restart"} <= set(self._solvers):
            summary["restart_violations"] = self._restart_violations(frame)

        self._log_summary(per_dimension)
        return summary

    def _sa_admm_not_worse(self, per_dimension: Dict[str, Dict[str, Any]]) -> Dict[str, int]:
        compared = 0
        not_worse = 0
        for entries in per_dimension.values():
            fixed = entries.get("admm", {}).get("iterations")
            adaptive = entries.get("sa-admm", {}).get("iterations")
            if fixed is None or adaptive is None:
                continue
            compared += 1
            if adaptive["mean"] <= fixed["mean"]:
                not_worse += 1
        return {"dimensions_compared": compared, "dimensions_not_worse": not_worse}

    def _restart_violations(self, frame: Any) -> int:
        table = frame.pivot_table(
            index=["d", "seed"], columns="solver", values="distance", aggfunc="first"
        )
        violations = 0
        for _, row in table.iterrows():
            single, restarted = row.get("admm-nc"), row.get("admm-nc-restart")
            if single is None or restarted is None or math.isnan(single) or math.isnan(restarted):
                continue
            if restarted > single + RESTART_SLACK:
                violations += 1
        return violations

    def _log_summary(self, per_dimension: Dict[str, Dict[str, Any]]) -> None:
        for d, entries in per_dimension.items():
            parts = []
            for solver, entry in entries.items():
                stats: Optional[Dict[str, Any]] = entry["iterations"]
                mean = f"{stats['mean']:.1f}" if stats else "n/a"
                parts.append(f"{solver}={mean}")
            logger.info(f"d={d}: mean iterations {', '.join(parts)}")
