"""
Base Experiment - Abstract Base Class for Solver Sweeps

This module provides the BaseExperiment class that the benchmark and
verification sweeps inherit from, implementing the Template Method pattern.
"""

import json
import logging
import multiprocessing
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ellipsoid_distance.config import SolverSettings
from ellipsoid_distance.data_generation import InstanceSpec
from ellipsoid_distance.evaluation import RunRecord, sort_records, write_records
from ellipsoid_distance.geometry import Ellipsoid
from ellipsoid_distance.solvers.registry import run_solver

logger = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    """Configuration for a sweep."""

    name: str
    output_dir: Path
    save_results: bool = True
    use_multiprocessing: bool = False
    max_workers: Optional[int] = None  # None = use CPU count
    show_progress: bool = True
    settings: SolverSettings = field(default_factory=SolverSettings)
    output_path: Optional[Path] = None  # None = <output_dir>/<name>.<format>
    output_format: str = "csv"

    @property
    def records_path(self) -> Path:
        if self.output_path is not None:
            return Path(self.output_path)
        return Path(self.output_dir) / f"{self.name}.{self.output_format}"

    @property
    def summary_path(self) -> Path:
        path = self.records_path
        return path.with_name(f"{path.stem}_summary.json")


@dataclass
class ExperimentResults:
    """Results from a sweep."""

    experiment_name: str
    config: ExperimentConfig
    records: List[RunRecord]
    statistics: Dict[str, Any]
    output_paths: List[Path]
    success: bool
    error: Optional[str] = None


class BaseExperiment(ABC):
    """
    Abstract base class for sweeps.

    run() defines the flow, subclasses implement the steps:
    1. Generate instance specs
    2. Solve every instance with every solver (one RunRecord per pair)
    3. Analyze the records
    4. Save records and summary

    A solver that raises produces a row with status "Failed"; the sweep
    continues.
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize base experiment.

        Args:
            config: Experiment configuration
        """
        self.config = config
        self.records: List[RunRecord] = []

        logger.info(f"Initialized {self.config.name}")

    def run(self) -> ExperimentResults:
        """
        Run the complete sweep (Template Method).

        Returns:
            ExperimentResults with records, statistics and written paths
        """
        logger.info(f"Starting experiment: {self.config.name}")

        try:
            logger.info("Step 1: Generating instances...")
            instances = self._generate_instances()

            logger.info(f"Step 2: Solving {len(instances)} instance(s)...")
            self.records = sort_records(self._execute(instances))

            logger.info("Step 3: Analyzing results...")
            statistics = self.analyze()

            output_paths: List[Path] = []
            if self.config.save_results:
                logger.info("Step 4: Saving results...")
                output_paths = self._save_results(statistics)

            logger.info(f"Experiment '{self.config.name}' completed successfully")

            return ExperimentResults(
                experiment_name=self.config.name,
                config=self.config,
                records=self.records,
                statistics=statistics,
                output_paths=output_paths,
                success=True,
            )

        except Exception as e:
            logger.error(f"Experiment '{self.config.name}' failed: {e}", exc_info=True)

            return ExperimentResults(
                experiment_name=self.config.name,
                config=self.config,
                records=self.records,
                statistics={},
                output_paths=[],
                success=False,
                error=str(e),
            )

    @abstractmethod
    def _generate_instances(self) -> List[InstanceSpec]:
        """
        Instance specs of the sweep.

        Returns:
            List of InstanceSpec
        """
        pass

    @property
    @abstractmethod
    def solvers(self) -> Sequence[str]:
        """Registry names of the solvers run on every instance."""
        pass

    @abstractmethod
    def analyze(self) -> Dict[str, Any]:
        """
        Analyze self.records.

        Returns:
            JSON-serializable summary
        """
        pass

    def _execute(self, instances: List[InstanceSpec]) -> List[RunRecord]:
        if self.config.use_multiprocessing and len(instances) > 1:
            max_workers = self.config.max_workers or multiprocessing.cpu_count()
            logger.info(f"Running {len(instances)} instances on {max_workers} worker(s)")
            with multiprocessing.Pool(processes=max_workers) as pool:
                per_instance = pool.map(self._solve_instance, instances)
        else:
            per_instance = [
                self._solve_instance(spec)
                for spec in tqdm(
                    instances, desc=self.config.name, disable=not self.config.show_progress
                )
            ]

        return [record for records in per_instance for record in records]

    def _solve_instance(self, spec: InstanceSpec) -> List[RunRecord]:
        """
        Run every solver on one instance.

        Called by the multiprocessing workers; never raises.
        """
        try:
            e1, e2 = spec.build()
        except Exception as e:
            logger.error(f"{spec.label}: instance generation failed: {e}", exc_info=True)
            return [self._failure(spec, solver, str(e)) for solver in self.solvers]

        records = [self._timed_solve(spec, e1, e2, solver) for solver in self.solvers]
        logger.info(f"{spec.label}: done")
        return records

    def _timed_solve(
        self, spec: InstanceSpec, e1: Ellipsoid, e2: Ellipsoid, solver: str
    ) -> RunRecord:
        start = time.perf_counter()
        try:
            report = run_solver(solver, e1, e2, self.config.settings)
        except Exception as e:
            logger.error(f"{spec.label}: {solver} failed: {e}", exc_info=True)
            return self._failure(spec, solver, str(e), time.perf_counter() - start)

        return RunRecord.from_report(
            report,
            protocol=spec.protocol.value,
            d=spec.d,
            seed=spec.seed,
            wall_time=time.perf_counter() - start,
            instance=spec.label,
        )

    def _failure(
        self, spec: InstanceSpec, solver: str, error: str, wall_time: float = 0.0
    ) -> RunRecord:
        return RunRecord.failure(
            protocol=spec.protocol.value,
            d=spec.d,
            seed=spec.seed,
            solver=solver,
            error=error,
            wall_time=wall_time,
            instance=spec.label,
        )

    def _save_results(self, statistics: Dict[str, Any]) -> List[Path]:
        """
        Write the records table and the summary JSON.

        Args:
            statistics: Output of analyze()

        Returns:
            Paths written
        """
        records_path = write_records(
            self.records, self.config.records_path, self.config.output_format
        )

        summary = {
            "experiment": self.config.name,
            "rows": len(self.records),
            "statistics": statistics,
        }
        summary_path = self.config.summary_path
        with open(summary_path, "w") as f:
            json.dump(summary, f, indent=2, default=_json_default)

        logger.info(f"Results saved to {records_path} and {summary_path}")
        return [records_path, summary_path]

    def __repr__(self) -> str:
        """String representation of experiment."""
        return f"{self.__class__.__name__}(name='{self.config.name}')"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    return str(value)
