"""
Metrics Module - Statistical Summaries of Sweep Results

Provides the summary statistics reported per dimension and solver by the
benchmark sweeps.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


@dataclass
class Statistics:
    """Statistical summary of a sample."""

    mean: float
    std: float
    min: float
    max: float
    count: int
    confidence_interval_95: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "min": self.min,
            "max": self.max,
            "count": self.count,
            "confidence_interval_95": list(self.confidence_interval_95),
        }


def calculate_statistics(values: Sequence[float]) -> Statistics:
    """
    Calculate summary statistics for a sample.

    Args:
        values: Numerical sample (iteration counts, wall times, ...)

    Returns:
        Statistics with sample standard deviation (n - 1) and a normal
        approximation 95% confidence interval for the mean

    Raises:
        ValueError: If values is empty
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("Cannot calculate statistics for empty list")

    n = int(arr.size)
    mean_val = float(arr.mean())

    if n > 1:
        std_val = float(arr.std(ddof=1))
        margin = 1.96 * std_val / np.sqrt(n)
        ci_95 = (mean_val - margin, mean_val + margin)
    else:
        std_val = 0.0
        ci_95 = (mean_val, mean_val)

    return Statistics(
        mean=mean_val,
        std=std_val,
        min=float(arr.min()),
        max=float(arr.max()),
        count=n,
        confidence_interval_95=ci_95,
    )
