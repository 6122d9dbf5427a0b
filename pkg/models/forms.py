"""
Maurer-Cartan form values and linear functionals on M_k(C).
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np


@dataclass(eq=False)
class OneFormAtPoint:
    """Coefficients F_j = A(z)^{-1} A_j of omega_A at a base point z."""

    base: np.ndarray
    coeffs: np.ndarray = field(repr=False)  # shape (n+1, k, k)

    def euler_contraction(self) -> np.ndarray:
        """sum_j z_j F_j."""
        return np.tensordot(self.base, self.coeffs, axes=([0], [0]))

    @property
    def k(self) -> int:
        return self.coeffs.shape[1]


@dataclass(eq=False)
class ScalarOneFormAtPoint:
    """Coefficients phi(F_j) of the scalar form phi(omega_A) at a base point."""

    base: np.ndarray
    coefficients: np.ndarray

    def contraction(self) -> complex:
        """Pairing with the Euler field, sum_j z_j phi(F_j)."""
        return complex(np.dot(self.base, self.coefficients))


@dataclass(eq=False)
class LinearFunctional:
    """
    phi(X) = trace(W X) for a weight matrix W.

    Centrality and positivity are claims; the mcform checks verify them.
    """

    weight: np.ndarray
    label: str = ""
    claimed_central: bool = False
    claimed_trace: bool = False

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=complex)
        if self.weight.ndim != 2 or self.weight.shape[0] != self.weight.shape[1]:
            raise ValueError(f"Weight must be a square matrix, got shape {self.weight.shape}")

    @property
    def size(self) -> int:
        return self.weight.shape[0]

    def __call__(self, X) -> np.ndarray:
        """phi of one matrix or of every matrix in a stack (..., k, k)."""
        return np.einsum('ij,...ji->...', self.weight, np.asarray(X, dtype=complex))

    @property
    def unit_value(self) -> complex:
        """phi(I) = trace(W)."""
        return complex(np.trace(self.weight))

    @classmethod
    def full_trace(cls, k: int) -> 'LinearFunctional':
        return cls(np.eye(k), label="Tr", claimed_central=True, claimed_trace=True)

    @classmethod
    def normalized_trace(cls, k: int) -> 'LinearFunctional':
        return cls(np.eye(k) / k, label="tr", claimed_central=True, claimed_trace=True)

    @classmethod
    def from_diagonal(cls, diagonal, label: str = "", central: bool = False, trace: bool = False) -> 'LinearFunctional':
        return cls(np.diag(np.asarray(diagonal, dtype=complex)), label=label,
                   claimed_central=central, claimed_trace=trace)

    def to_dict(self) -> Dict:
        return {
            'label': self.label,
            'weight': [[[float(x.real), float(x.imag)] for x in row] for row in self.weight],
            'central': self.claimed_central,
            'trace': self.claimed_trace,
        }

    @classmethod
    def from_dict(cls, data: Dict, label: Optional[str] = None) -> 'LinearFunctional':
        weight = np.array([[complex(re, im) for re, im in row] for row in data['weight']], dtype=complex)
        return cls(
            weight,
            label=label if label is not None else data.get('label', ''),
            claimed_central=bool(data.get('central', False)),
            claimed_trace=bool(data.get('trace', False)),
        )
