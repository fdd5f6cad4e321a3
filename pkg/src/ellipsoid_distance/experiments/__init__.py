"""
Experiments Module

Benchmark and verification sweeps built on the BaseExperiment template.
"""

from ellipsoid_distance.experiments.base_experiment import (
    BaseExperiment,
    ExperimentConfig,
    ExperimentResults,
)
from ellipsoid_distance.experiments.benchmark import BenchmarkExperiment
from ellipsoid_distance.experiments.verification import VerificationExperiment

__all__ = [
    "BaseExperiment",
    "BenchmarkExperiment",
    "ExperimentConfig",
    "ExperimentResults",
    "VerificationExperiment",
]
