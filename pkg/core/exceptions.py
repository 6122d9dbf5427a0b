"""
Exception hierarchy for projective spectrum computations.

Every error carries the CLI exit code of its family:
2 numerical, 3 precondition, 4 geometric.
"""

from typing import Optional


class ProjSpecError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class DimensionError(ProjSpecError, ValueError):
    """Shapes or coordinate counts do not match."""

    exit_code = 1


# Numerical failures

class SingularMatrixError(ProjSpecError):
    """Matrix is numerically singular."""

    def __init__(self, message: str, margin: float):
        super().__init__(f"{message} (sigma_min/sigma_max = {margin:.3e})")
        self.margin = margin


class ConvergenceError(ProjSpecError):
    """Iterative routine did not converge."""


class InterpolationError(ProjSpecError):
    """Determinant interpolation system is ill-conditioned or inconsistent."""


class InconsistentWindingError(ProjSpecError):
    """Trace-form period and determinant phase winding disagree."""


class DefectiveCombinationError(ProjSpecError):
    """Generic combination of a commutative tuple is not diagonalizable."""


# Precondition failures

class NotCommutativeError(ProjSpecError):
    """Operation requires a commutative tuple."""

    exit_code = 3


class NotSimilarError(ProjSpecError):
    """Maurer-Cartan forms of two tuples admit no similarity."""

    exit_code = 3


class NoAdmissibleSamplesError(ProjSpecError):
    """Rejection sampling found no points in the common resolvent set."""

    exit_code = 3


class CandidateRejectedError(ProjSpecError):
    """A similarity candidate failed the constancy or invertibility test."""

    exit_code = 3


# Geometric failures

class LineInSpectrumError(ProjSpecError):
    """The whole line lies inside the projective spectrum."""

    exit_code = 4


class ZeroPolynomialError(LineInSpectrumError):
    """Restriction polynomial vanishes identically."""


class SingularPointError(ProjSpecError):
    """Point lies in the projective spectrum where the form is undefined."""

    exit_code = 4

    def __init__(self, message: str, margin: float):
        super().__init__(f"{message} (margin = {margin:.3e})")
        self.margin = margin


class LoopTouchesSpectrumError(ProjSpecError):
    """An integration loop comes too close to the spectrum."""

    exit_code = 4

    def __init__(self, message: str, parameter: Optional[float] = None, margin: Optional[float] = None):
        details = []
        if parameter is not None:
            details.append(f"parameter={parameter:.6g}")
        if margin is not None:
            details.append(f"margin={margin:.3e}")
        suffix = f" ({', '.join(details)})" if details else ""
        super().__init__(message + suffix)
        self.parameter = parameter
        self.margin = margin


class LinkingLoopError(ProjSpecError):
    """No admissible linking loop could be constructed."""

    exit_code = 4
