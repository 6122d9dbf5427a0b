"""
Determinant polynomial det A(z): interpolation, restriction to lines, roots.
"""

import logging
from math import comb

import numpy as np
import scipy.linalg

from models.pencil import MatrixTuple
from models.polynomial import (
    HomogeneousPolynomial,
    UnivariatePolynomial,
    monomial_exponents,
    monomial_matrix,
)
from utils.geometry_utils import are_independent, random_polytorus, random_unit_sphere
from .exceptions import DimensionError, InterpolationError, ZeroPolynomialError
from .linalg_core import batched_determinants, eigenvalues
from .pencil import evaluate

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e8
ZERO_TOL = 1e-12
MIN_HELD_OUT = 8


def _relative_misfit(fitted: np.ndarray, values: np.ndarray) -> float:
    scale = np.linalg.norm(values)
    misfit = np.linalg.norm(fitted - values)
    return float(misfit / scale) if scale > 0 else float(misfit)


def determinant_scale(A: MatrixTuple, num_points: int = 16, seed: int = 0) -> float:
    """Largest |det A(z)| over a fixed set of points on the unit sphere."""
    rng = np.random.default_rng(seed)
    points = random_unit_sphere(rng, num_points, A.n_plus_1)
    return float(np.max(np.abs(batched_determinants(evaluate(A, points)))))


def interpolate_det(
    A: MatrixTuple,
    seed: int = 0,
    oversampling: int = 2,
    residual_tol: float = 1e-8,
    max_monomials: int = 10000,
) -> HomogeneousPolynomial:
    """
    Reconstruct det A(z) as a homogeneous polynomial of degree k.

    Samples det A(z) at oversampling * C(k+n, n) points of the unit polytorus
    and solves the least-squares system in the monomial basis. Distinct
    monomials are orthogonal on the torus, which keeps the system well
    conditioned. The fit is then checked at fresh polytorus points that
    took no part in it; the reported residual is the larger of the two.

    Args:
        A: Matrix tuple
        seed: Seed of the sample points
        oversampling: Samples per unknown coefficient (at least 2)
        residual_tol: Largest accepted relative residual
        max_monomials: Desk-scale bound on C(k+n, n)

    Returns:
        HomogeneousPolynomial with the fit residual attached

    Raises:
        InterpolationError: If the system is too large, rank deficient or the residual is too large
    """
    k, nvars = A.k, A.n_plus_1
    num_monomials = comb(k + A.n, A.n)
    if num_monomials > max_monomials:
        raise InterpolationError(
            f"{num_monomials} monomials exceed the limit of {max_monomials}; reduce k or n"
        )
    exponents = monomial_exponents(k, nvars)
    num_samples = max(2, int(oversampling)) * num_monomials
    rng = np.random.default_rng(seed)
    points = random_polytorus(rng, num_samples, nvars)

    values = batched_determinants(evaluate(A, points))
    vandermonde = monomial_matrix(points, exponents)
    coeffs, _, rank, sv = scipy.linalg.lstsq(vandermonde, values, check_finite=False)
    condition = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    if rank < num_monomials or condition > MAX_CONDITION:
        raise InterpolationError(
            f"Interpolation system is ill-conditioned (rank {rank}/{num_monomials}, "
            f"condition {condition:.2e}); increase oversampling"
        )

    scale = np.linalg.norm(values)
    in_sample = _relative_misfit(vandermonde @ coeffs, values)
    held_points = random_polytorus(rng, max(MIN_HELD_OUT, num_monomials // 2), nvars)
    held_values = batched_determinants(evaluate(A, held_points))
    held_out = _relative_misfit(monomial_matrix(held_points, exponents) @ coeffs, held_values)
    rel_residual = max(in_sample, held_out)
    logger.debug(
        f"interpolate_det: {num_monomials} monomials, {num_samples} samples, "
        f"residual {in_sample:.2e} in sample, {held_out:.2e} held out"
    )
    if rel_residual > residual_tol:
        raise InterpolationError(
            f"Relative residual {rel_residual:.2e} exceeds {residual_tol:.1e}; increase oversampling"
        )
    if scale == 0:
        logger.warning("det A(z) vanishes at every sample: the spectrum is the whole space")

    poly = HomogeneousPolynomial(k, nvars, exponents, coeffs, residual=rel_residual)
    return poly.cleaned(rel_tol=ZERO_TOL)


def restrict_to_line(A: MatrixTuple, a, b) -> UnivariatePolynomial:
    """
    Coefficients of t -> det A(a + t b).

    Evaluates at the k+1 roots of unity and interpolates exactly with an
    inverse discrete Fourier transform.

    Raises:
        DimensionError: If a and b are linearly dependent
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not are_independent(a, b):
        raise DimensionError("Line needs two linearly independent points")
    nodes = np.exp(2j * np.pi * np.arange(A.k + 1) / (A.k + 1))
    points = a[None, :] + nodes[:, None] * b[None, :]
    values = batched_determinants(evaluate(A, points))
    # values[i] = sum_m c_m nodes[i]^m, so c = DFT^{-1}
    coeffs = np.fft.fft(values) / (A.k + 1)
    return UnivariatePolynomial(coeffs)


def group_roots(roots, cluster_radius: float = 1e-6):
    """
    Group numerically coincident roots.

    Returns:
        List of (mean root, multiplicity) pairs
    """
    remaining = list(np.asarray(roots, dtype=complex))
    groups = []
    while remaining:
        seed_root = remaining.pop(0)
        radius = cluster_radius * max(1.0, abs(seed_root))
        members = [seed_root] + [r for r in remaining if abs(r - seed_root) <= radius]
        remaining = [r for r in remaining if abs(r - seed_root) > radius]
        groups.append((complex(np.mean(members)), len(members)))
    return groups


def roots(p: UnivariatePolynomial, trim_tol: float = 1e-10, zero_tol: float = 0.0) -> np.ndarray:
    """
    All complex roots with multiplicity.

    Uses eigenvalues of the companion matrix of the trimmed polynomial and
    polishes each root with one Newton step when that lowers |p|.

    Raises:
        ZeroPolynomialError: If every coefficient is at most zero_tol
    """
    if p.is_zero(zero_tol):
        raise ZeroPolynomialError("Polynomial vanishes identically")
    q = p.trimmed(trim_tol)
    d = q.degree
    if d == 0:
        return np.empty(0, dtype=complex)

    c = q.coefficients
    companion = np.zeros((d, d), dtype=complex)
    companion[1:, :-1] = np.eye(d - 1)
    companion[:, -1] = -c[:-1] / c[-1]
    found = eigenvalues(companion)

    dq = q.derivative()
    polished = found.copy()
    for i, r in enumerate(found):
        slope = dq.evaluate(r)
        if slope == 0:
            continue
        candidate = r - q.evaluate(r) / slope
        if abs(q.evaluate(candidate)) < abs(q.evaluate(r)):
            polished[i] = candidate
    return polished
