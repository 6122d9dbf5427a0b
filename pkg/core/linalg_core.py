"""
Dense complex linear algebra kernels.

All routines take array-likes, work in complex128 and never mutate their
inputs. Factorizations come from scipy.linalg (LAPACK).
"""

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DimensionError, SingularMatrixError

logger = logging.getLogger(__name__)

# Matrices above this size are accepted but outside the tested range.
DESK_SCALE = 128
RCOND_FACTOR = 1e-12
EIG_MAX_ITERATIONS = 30  # per eigenvalue, as in LAPACK xHSEQR


def as_complex_matrix(M, name: str = "matrix") -> np.ndarray:
    """
    Convert input to a finite 2-D complex128 array.

    Raises:
        DimensionError: If the input is not two-dimensional or has NaN/Inf entries
    """
    arr = np.array(M, dtype=complex, copy=True)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} has non-finite entries")
    return arr


def _square(M, name: str = "matrix") -> np.ndarray:
    arr = as_complex_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DimensionError(f"{name} is empty")
    return arr


def default_rcond(k: int) -> float:
    """Singularity threshold on sigma_min/sigma_max for a k x k matrix."""
    return RCOND_FACTOR * k


def singular_values(M) -> np.ndarray:
    """Singular values in descending order."""
    return scipy.linalg.svdvals(_square(M))


def sigma_min(M) -> float:
    """Smallest singular value of a square matrix."""
    return float(singular_values(M)[-1])


def condition_margin(M, scale: Optional[float] = None) -> float:
    """
    Invertibility margin sigma_min / scale (0 when the scale vanishes).

    The scale defaults to sigma_max, giving the reciprocal condition number.
    """
    s = singular_values(M)
    reference = s[0] if scale is None else scale
    if reference == 0:
        return 0.0
    return float(s[-1] / reference)


def batched_margins(stack: np.ndarray, scale: Optional[float] = None) -> np.ndarray:
    """sigma_min / scale for every matrix of a (N, k, k) stack (scale defaults to sigma_max)."""
    s = np.linalg.svd(np.asarray(stack, dtype=complex), compute_uv=False)
    reference = s[..., 0] if scale is None else np.full(s.shape[:-1], float(scale))
    return np.divide(s[..., -1], reference, out=np.zeros_like(reference), where=reference > 0)


def _require_invertible(M: np.ndarray, rcond: Optional[float], what: str) -> None:
    threshold = default_rcond(M.shape[0]) if rcond is None else rcond
    margin = condition_margin(M)
    if margin < threshold:
        raise SingularMatrixError(f"{what}: matrix is numerically singular", margin)


def determinant(M) -> complex:
    """
    Determinant via LU factorization with partial pivoting.

    The sign of the row permutation is accounted for exactly from the
    pivot indices.
    """
    A = _square(M)
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    swaps = int(np.count_nonzero(piv != np.arange(A.shape[0])))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def batched_determinants(stack: np.ndarray) -> np.ndarray:
    """Determinants of a (N, k, k) stack (LAPACK getrf per matrix)."""
    return np.linalg.det(np.asarray(stack, dtype=complex))


def residual(M, X, rhs) -> float:
    """Relative residual ||M X - rhs|| / ||rhs||."""
    M = np.asarray(M, dtype=complex)
    X = np.asarray(X, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    scale = np.linalg.norm(rhs)
    err = np.linalg.norm(M @ X - rhs)
    return float(err / scale) if scale > 0 else float(err)


def inverse(M, rcond: Optional[float] = None, return_residual: bool = False):
    """
    Inverse of a well-conditioned square matrix.

    Args:
        M: Square matrix
        rcond: Singularity threshold on sigma_min/sigma_max (default 1e-12 * k)
        return_residual: Also return ||M M^-1 - I|| / ||I||

    Returns:
        Inverse matrix, or (inverse, residual)

    Raises:
        SingularMatrixError: If M is numerically singular
    """
    A = _square(M)
    _require_invertible(A, rcond, "inverse")
    inv = scipy.linalg.inv(A, check_finite=False)
    res = residual(A, inv, np.eye(A.shape[0]))
    logger.debug(f"inverse: k={A.shape[0]}, residual={res:.2e}")
    if return_residual:
        return inv, res
    return inv


def solve(M, rhs, rcond: Optional[float] = None, tol: float = 1e-8) -> np.ndarray:
    """
    Solve M X = rhs for a well-conditioned square M.

    Args:
        M: Square matrix
        rhs: Right-hand side, vector or matrix
        rcond: Singularity threshold (default 1e-12 * k)
        tol: Relative residual above which a warning is logged

    Raises:
        SingularMatrixError: If M is numerically singular
        DimensionError: If rhs has the wrong number of rows
    """
    A = _square(M)
    b = np.asarray(rhs, dtype=complex)
    if b.shape[0] != A.shape[0]:
        raise DimensionError(f"rhs has {b.shape[0]} rows, expected {A.shape[0]}")
    _require_invertible(A, rcond, "solve")
    X = scipy.linalg.solve(A, b, check_finite=False)
    res = residual(A, X, b)
    if res > tol:
        logger.warning(f"solve: relative residual {res:.2e} exceeds {tol:.1e}")
    return X


def batched_solve(stack: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve stack[i] X_i = rhs for every matrix of a (N, k, k) stack.

    Callers are responsible for checking invertibility beforehand.
    """
    stack = np.asarray(stack, dtype=complex)
    rhs = np.broadcast_to(np.asarray(rhs, dtype=complex), stack.shape[:1] + np.shape(rhs))
    return np.linalg.solve(stack, rhs)


def eigenvalues(M, max_size: int = DESK_SCALE) -> np.ndarray:
    """
    All eigenvalues with multiplicity (Hessenberg + shifted QR in LAPACK).

    Args:
        M: Square matrix
        max_size: Documented desk-scale bound; larger inputs are logged

    Raises:
        ConvergenceError: If the QR iteration does not converge
    """
    A = _square(M)
    if A.shape[0] > max_size:
        logger.warning(f"eigenvalues: k={A.shape[0]} exceeds desk scale {max_size}")
    try:
        return scipy.linalg.eigvals(A, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(
            f"QR iteration failed to converge within {EIG_MAX_ITERATIONS * A.shape[0]} iterations: {e}"
        ) from e


def random_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    """Haar-distributed unitary matrix via QR of a complex Gaussian matrix."""
    Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
