"""
Polynomial models: homogeneous multivariate and univariate.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly


def monomial_exponents(degree: int, nvars: int) -> np.ndarray:
    """
    All exponent vectors of nvars variables summing to degree.

    Ordered lexicographically from z_0^degree downwards, shape (C(degree+nvars-1, nvars-1), nvars).
    """
    rows = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for var in combo:
            exps[var] += 1
        rows.append(exps)
    return np.array(rows, dtype=int).reshape(-1, nvars)


def monomial_matrix(points: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """Values of every monomial at every point, shape (num_points, num_monomials)."""
    pts = np.asarray(points, dtype=complex)
    return np.prod(pts[:, None, :] ** exponents[None, :, :], axis=2)


@dataclass(eq=False)
class HomogeneousPolynomial:
    """
    Homogeneous polynomial of a given degree in nvars variables.

    Coefficients are aligned with the rows of `exponents`.
    """

    degree: int
    nvars: int
    exponents: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    residual: float = 0.0

    def __post_init__(self):
        self.exponents = np.asarray(self.exponents, dtype=int).reshape(-1, self.nvars)
        self.coefficients = np.asarray(self.coefficients, dtype=complex).ravel()
        if self.exponents.shape[0] != self.coefficients.shape[0]:
            raise ValueError("Exponent and coefficient counts differ")
        if np.any(self.exponents.sum(axis=1) != self.degree):
            raise ValueError(f"Every monomial must have total degree {self.degree}")

    def evaluate(self, z) -> np.ndarray:
        """Evaluate at one point (shape (nvars,)) or a batch (shape (N, nvars))."""
        pts = np.asarray(z, dtype=complex)
        single = pts.ndim == 1
        values = monomial_matrix(np.atleast_2d(pts), self.exponents) @ self.coefficients
        return values[0] if single else values

    def coefficient(self, exponent: Tuple[int, ...]) -> complex:
        """Coefficient of a monomial (0 when absent)."""
        target = np.asarray(exponent, dtype=int)
        match = np.flatnonzero(np.all(self.exponents == target, axis=1))
        return complex(self.coefficients[match[0]]) if match.size else 0j

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coefficients) <= tol))

    def cleaned(self, rel_tol: float = 1e-12) -> 'HomogeneousPolynomial':
        """Copy with coefficients below rel_tol * max|c| set to zero."""
        coeffs = self.coefficients.copy()
        top = np.max(np.abs(coeffs)) if coeffs.size else 0.0
        coeffs[np.abs(coeffs) <= rel_tol * top] = 0
        return HomogeneousPolynomial(self.degree, self.nvars, self.exponents, coeffs, self.residual)

    def to_dict(self) -> Dict[str, List[float]]:
        """Serialize nonzero terms as {"e0,e1,...": [re, im]}."""
        return {
            ",".join(str(int(e)) for e in exps): [float(c.real), float(c.imag)]
            for exps, c in zip(self.exponents, self.coefficients)
            if c != 0
        }

    @classmethod
    def from_dict(cls, data: Dict[str, List[float]], degree: int, nvars: int) -> 'HomogeneousPolynomial':
        exponents = monomial_exponents(degree, nvars)
        coeffs = np.zeros(exponents.shape[0], dtype=complex)
        index = {tuple(e): i for i, e in enumerate(exponents.tolist())}
        for key, (re, im) in data.items():
            exps = tuple(int(e) for e in key.split(","))
            if exps not in index:
                raise ValueError(f"Monomial {key} does not have degree {degree} in {nvars} variables")
            coeffs[index[exps]] = complex(re, im)
        return cls(degree, nvars, exponents, coeffs)


@dataclass(eq=False)
class UnivariatePolynomial:
    """Polynomial c_0 + c_1 t + ... + c_d t^d with ascending coefficients."""

    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))

    @property
    def degree(self) -> int:
        """Formal degree (length - 1); call trimmed() first for the true degree."""
        return self.coefficients.shape[0] - 1

    def trimmed(self, rel_tol: float = 1e-10) -> 'UnivariatePolynomial':
        """Drop leading coefficients below rel_tol * max|c| (keeps at least c_0)."""
        coeffs = self.coefficients
        top = np.max(np.abs(coeffs)) if coeffs.size else 0.0
        last = coeffs.shape[0] - 1
        while last > 0 and abs(coeffs[last]) <= rel_tol * top:
            last -= 1
        return UnivariatePolynomial(coeffs[:last + 1].copy())

    def is_zero(self, abs_tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coefficients) <= abs_tol))

    def evaluate(self, t) -> np.ndarray:
        return npoly.polyval(np.asarray(t, dtype=complex), self.coefficients)

    def derivative(self) -> 'UnivariatePolynomial':
        return UnivariatePolynomial(npoly.polyder(self.coefficients) if self.degree > 0 else [0])

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0) -> 'UnivariatePolynomial':
        return cls(leading * npoly.polyfromroots(np.asarray(roots, dtype=complex)))
