"""
Result models returned by the numerical engines.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .pencil import ProjectivePoint


def _pair(value: complex) -> List[float]:
    return [float(complex(value).real), float(complex(value).imag)]


@dataclass(eq=False)
class RankReport:
    """Numerical rank of the vectorized tuple."""

    rank: int
    n_plus_1: int
    singular_values: np.ndarray = field(repr=False)
    tolerance: float = 1e-10

    @property
    def independent(self) -> bool:
        return self.rank == self.n_plus_1

    def to_dict(self) -> Dict:
        return {
            'rank': self.rank,
            'n_plus_1': self.n_plus_1,
            'independent': self.independent,
            'singular_values': [float(s) for s in self.singular_values],
        }


@dataclass
class MembershipVerdict:
    """Invertibility of A(z) at a point, with its normalized margin."""

    invertible: bool
    margin: float  # sigma_min(A(z)) / ||A(z)|| at the normalized point
    tolerance: float
    degenerate: bool = False  # z = 0

    def in_spectrum(self) -> bool:
        return not self.invertible


@dataclass(eq=False)
class SpectrumPoint:
    """A point of p(A) found on a line, with root multiplicity."""

    point: ProjectivePoint
    multiplicity: int = 1
    margin: float = 0.0
    at_infinity: bool = False


@dataclass(eq=False)
class PointCloud:
    """Spectrum points collected over many lines."""

    points: List[SpectrumPoint] = field(default_factory=list)
    lines_sampled: int = 0
    skipped_lines: int = 0
    rejected_points: int = 0

    def coordinates(self) -> np.ndarray:
        """Canonical coordinates, shape (num_points, n+1)."""
        if not self.points:
            return np.empty((0, 0), dtype=complex)
        return np.array([p.point.coords for p in self.points])

    def __len__(self) -> int:
        return len(self.points)


@dataclass(eq=False)
class JointEigenTuple:
    """Values (phi(A_0), ..., phi(A_n)) of one joint eigenvector."""

    values: np.ndarray
    residual: float = 0.0


@dataclass(eq=False)
class FactorizationReport:
    """Check of det A(z) = c * prod <z, n_i>^{m_i}."""

    constant: complex
    max_residual: float
    tolerance: float
    num_points: int

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> Dict:
        return {
            'constant': _pair(self.constant),
            'max_residual': self.max_residual,
            'tolerance': self.tolerance,
            'num_points': self.num_points,
            'passed': self.passed,
        }


@dataclass
class CentralityReport:
    """Largest normalized |phi(XY) - phi(YX)| over sampled words."""

    max_violation: float
    words_tested: int
    resolvent_samples: int
    # Finitely many words only sample the inversion-closed algebra generated by the tuple.
    heuristic: bool = True

    def to_dict(self) -> Dict:
        return {
            'max_violation': self.max_violation,
            'words_tested': self.words_tested,
            'resolvent_samples': self.resolvent_samples,
            'heuristic': self.heuristic,
        }


@dataclass
class FormDiagnostics:
    """Finite-difference and identity checks of the Maurer-Cartan form at one point."""

    point: List[List[float]]
    euler_error: float
    resolvent_derivative_error: float
    flatness_error: float
    closedness_error: float
    descent_value: complex
    step: float
    thresholds: Dict[str, float] = field(default_factory=dict)

    def flags(self) -> Dict[str, bool]:
        """Pass/fail of each check against its threshold."""
        return {
            'euler': self.euler_error <= self.thresholds.get('euler', math.inf),
            'resolvent_derivative': self.resolvent_derivative_error <= self.thresholds.get('derivative', math.inf),
            'flatness': self.flatness_error <= self.thresholds.get('derivative', math.inf),
            'closedness': self.closedness_error <= self.thresholds.get('closed', math.inf),
        }

    def to_dict(self) -> Dict:
        return {
            'point': self.point,
            'step': self.step,
            'euler_error': self.euler_error,
            'resolvent_derivative_error': self.resolvent_derivative_error,
            'flatness_error': self.flatness_error,
            'closedness_error': self.closedness_error,
            'descent_value': _pair(self.descent_value),
            'passed': self.flags(),
        }


@dataclass
class PeriodReport:
    """Value of a loop integral with its sample-doubling error estimate."""

    value: complex
    error: float
    samples: int
    quantized: Optional[int] = None
    distance_to_integer: Optional[float] = None
    loop: Optional[Dict] = None

    @property
    def normalized(self) -> complex:
        """value / (2 pi i)."""
        return self.value / (2j * math.pi)

    @classmethod
    def build(cls, value: complex, error: float, samples: int, loop: Optional[Dict] = None) -> 'PeriodReport':
        normalized = value / (2j * math.pi)
        nearest = int(round(normalized.real))
        return cls(
            value=complex(value),
            error=float(error),
            samples=int(samples),
            quantized=nearest,
            distance_to_integer=float(abs(normalized - nearest)),
            loop=loop,
        )

    def to_dict(self) -> Dict:
        return {
            'value': _pair(self.value),
            'normalized': _pair(self.normalized),
            'error': self.error,
            'samples': self.samples,
            'quantized': self.quantized,
            'distance_to_integer': self.distance_to_integer,
            'loop': self.loop,
        }


@dataclass
class WindingReport:
    """Winding of det A(z) computed from the trace form and from phase unwrapping."""

    period: PeriodReport
    phase_winding: float
    winding: int
    tolerance: float

    @property
    def trace_winding(self) -> float:
        return float(self.period.normalized.real)

    @property
    def quantized(self) -> bool:
        return (abs(self.trace_winding - self.winding) <= self.tolerance
                and abs(self.phase_winding - self.winding) <= self.tolerance)

    def to_dict(self) -> Dict:
        return {
            'winding': self.winding,
            'trace_winding': self.trace_winding,
            'phase_winding': self.phase_winding,
            'quantized': self.quantized,
            'period': self.period.to_dict(),
        }


@dataclass
class CertificateReport:
    """Evidence that phi(omega_A) is a nontrivial de Rham class."""

    verdict: str  # 'NONTRIVIAL' or 'INCONCLUSIVE'
    centrality: CentralityReport
    closedness_error: float
    periods: List[PeriodReport] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def nontrivial(self) -> bool:
        return self.verdict == 'NONTRIVIAL'

    def to_dict(self) -> Dict:
        return {
            'verdict': self.verdict,
            'centrality': self.centrality.to_dict(),
            'closedness_error': self.closedness_error,
            'periods': [p.to_dict() for p in self.periods],
            'notes': list(self.notes),
        }


@dataclass(eq=False)
class SimilaritySolution:
    """Nullspace of the stacked form-similarity system."""

    basis: List[np.ndarray]
    singular_values: np.ndarray = field(repr=False)
    num_samples: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(eq=False)
class EquivalenceWitness:
    """Invertible U, V with U A_j V = B_j for every j."""

    U: np.ndarray
    V: np.ndarray
    residual: float
    constancy_deviation: float = 0.0

    def to_dict(self) -> Dict:
        return {
            'U': [[_pair(x) for x in row] for row in self.U],
            'V': [[_pair(x) for x in row] for row in self.V],
            'residual': self.residual,
            'constancy_deviation': self.constancy_deviation,
        }


@dataclass
class LocusReport:
    """Deviation of sampled clock-shift spectrum points from |z_0| = |z_1|."""

    q: int
    num_points: int
    max_deviation: float
    skipped_lines: int = 0

    def to_dict(self) -> Dict:
        return {
            'q': self.q,
            'num_points': self.num_points,
            'max_deviation': self.max_deviation,
            'skipped_lines': self.skipped_lines,
        }


@dataclass(eq=False)
class DiskMembershipReport:
    """Invertibility of sum_j z_j w^j in the disk algebra."""

    invertible: bool
    margin: float  # min |root| - 1 (inf for a nonzero constant)
    roots: np.ndarray = field(repr=False)
    degenerate: bool = False  # zero polynomial
    tolerance: float = 1e-9

    def to_dict(self) -> Dict:
        return {
            'invertible': self.invertible,
            'margin': self.margin if math.isfinite(self.margin) else None,
            'roots': [_pair(r) for r in self.roots],
            'degenerate': self.degenerate,
            'tolerance': self.tolerance,
        }
