"""
Matrix tuple and projective point models.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from utils.geometry_utils import normalize_projective


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """
    Tuple A = (A_0, ..., A_n) of k x k complex matrices.

    Matrices are stored as one read-only (n+1, k, k) array.
    """

    matrices: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.matrices, dtype=complex, copy=True)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"Expected a stack of square matrices, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("A tuple needs at least one nonempty matrix")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Tuple has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, 'matrices', arr)

    @classmethod
    def from_matrices(cls, matrices: Sequence, label: str = "") -> 'MatrixTuple':
        """Build a tuple from a sequence of square matrices of equal size."""
        return cls(np.stack([np.asarray(m, dtype=complex) for m in matrices]), label=label)

    @property
    def n_plus_1(self) -> int:
        """Number of matrices."""
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        """Dimension of the projective space P^n."""
        return self.matrices.shape[0] - 1

    @property
    def k(self) -> int:
        """Matrix size (degree of det A(z))."""
        return self.matrices.shape[1]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.matrices[j]

    def __len__(self) -> int:
        return self.n_plus_1

    def scale(self) -> float:
        """Largest spectral norm among the matrices."""
        return float(max(np.linalg.norm(m, 2) for m in self.matrices))


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    Point [z_0, ..., z_n] of P^n kept as its canonical representative.

    The stored coordinates have unit norm with the first nonzero coordinate
    positive real, so equal projective points compare equal up to rounding.
    """

    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = normalize_projective(self.coords)
        arr.setflags(write=False)
        object.__setattr__(self, 'coords', arr)

    @classmethod
    def from_coords(cls, coords) -> 'ProjectivePoint':
        return cls(np.asarray(coords, dtype=complex))

    @property
    def dimension(self) -> int:
        return self.coords.shape[0] - 1

    def affine(self, chart: int = 0) -> Optional[np.ndarray]:
        """
        Affine coordinates z_j / z_chart for j != chart.

        Returns None when the point lies outside the chart (z_chart = 0).
        """
        if not 0 <= chart < self.coords.shape[0]:
            raise ValueError(f"Chart {chart} out of range")
        pivot = self.coords[chart]
        if abs(pivot) < 1e-14:
            return None
        return np.delete(self.coords, chart) / pivot

    def distance(self, other: 'ProjectivePoint') -> float:
        """Euclidean distance between canonical representatives."""
        return float(np.linalg.norm(self.coords - other.coords))

    def __repr__(self) -> str:
        coords = ", ".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in self.coords)
        return f"ProjectivePoint([{coords}])"
