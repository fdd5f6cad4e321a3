"""
Exceptions - Error Hierarchy for Ellipsoid Distance

Every error raised on purpose by this package derives from
EllipsoidDistanceError. Input problems additionally derive from ValueError
so that callers catching ValueError keep working.

Solver non-convergence is not an error: it is reported through
SolveStatus on the returned SolveReport.
"""

from pathlib import Path
from typing import Optional, Union


class EllipsoidDistanceError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(EllipsoidDistanceError, ValueError):
    """A matrix that must be symmetric positive definite is not."""


class DimensionMismatch(EllipsoidDistanceError, ValueError):
    """Operands have incompatible shapes."""


class DegenerateQuadric(EllipsoidDistanceError, ValueError):
    """A general quadric does not describe a set with nonempty interior."""


class DegeneratePencil(EllipsoidDistanceError):
    """A matrix pencil is singular for every value of its parameter."""


class NoFeasibleCandidate(EllipsoidDistanceError):
    """Candidate filtering of the global method left nothing."""


class UnsupportedDimension(EllipsoidDistanceError, ValueError):
    """The ambient dimension is outside what an operation supports."""


class UnknownInstanceName(EllipsoidDistanceError, KeyError):
    """An analytic catalog lookup used a name that does not exist."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class ConfigError(EllipsoidDistanceError, ValueError):
    """Invalid solver options or configuration file contents."""


class InstanceFormatError(EllipsoidDistanceError, ValueError):
    """
    An instance file could not be parsed.

    key is the dotted JSON key at fault ("Q1", "E2.A"), used to find the
    line when the error is raised after decoding.
    """

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
        key: Optional[str] = None,
    ):
        self.message = message
        self.path = Path(path) if path is not None else None
        self.line = line
        self.key = key

        location = ""
        if self.path is not None:
            location = f"{self.path}"
            if line is not None:
                location += f":{line}"
            location += ": "

        super().__init__(f"{location}{message}")
