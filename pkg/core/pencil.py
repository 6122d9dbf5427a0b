"""
Linear pencil A(z) = z_0 A_0 + ... + z_n A_n of a matrix tuple.
"""

import logging
from itertools import combinations

import numpy as np
import scipy.linalg

from models.calculation_result import RankReport
from models.pencil import MatrixTuple
from .exceptions import DimensionError
from .linalg_core import batched_margins

logger = logging.getLogger(__name__)


def _coords(A: MatrixTuple, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != A.n_plus_1:
        raise DimensionError(f"Point has {z.shape[-1]} coordinates, tuple needs {A.n_plus_1}")
    return z


def evaluate(A: MatrixTuple, z) -> np.ndarray:
    """
    The matrix A(z) = sum_j z_j A_j.

    A batch of points (shape (N, n+1)) yields a (N, k, k) stack.
    """
    z = _coords(A, z)
    return np.tensordot(z, A.matrices, axes=([-1], [0]))


def is_commutative(A: MatrixTuple, tol: float = 1e-10) -> bool:
    """
    True iff ||A_i A_j - A_j A_i|| <= tol * ||A_i|| ||A_j|| for every pair.
    """
    norms = [np.linalg.norm(m) for m in A.matrices]
    for i, j in combinations(range(A.n_plus_1), 2):
        Ai, Aj = A.matrices[i], A.matrices[j]
        defect = np.linalg.norm(Ai @ Aj - Aj @ Ai)
        if defect > tol * norms[i] * norms[j]:
            logger.debug(f"Commutator [A_{i}, A_{j}] has norm {defect:.3e}")
            return False
    return True


def independence_check(A: MatrixTuple, tol: float = 1e-10) -> RankReport:
    """
    Numerical rank of the (n+1) x k^2 matrix of vectorized A_j.

    Dependent tuples are accepted; the report flags them and a warning is logged.
    """
    coefficient_matrix = A.matrices.reshape(A.n_plus_1, -1)
    s = scipy.linalg.svdvals(coefficient_matrix)
    rank = int(np.count_nonzero(s > tol * s[0])) if s[0] > 0 else 0
    report = RankReport(rank=rank, n_plus_1=A.n_plus_1, singular_values=s, tolerance=tol)
    if not report.independent:
        logger.warning(f"Tuple matrices are linearly dependent: rank {rank} < {A.n_plus_1}")
    return report


def augment_with_identity(A: MatrixTuple) -> MatrixTuple:
    """The tuple (I, A_0, ..., A_n), whose spectrum is always a proper subset."""
    identity = np.eye(A.k, dtype=complex)[None, :, :]
    return MatrixTuple(np.concatenate([identity, A.matrices]), label=f"(I, {A.label or 'A'})")


def resolvent_margins(A: MatrixTuple, z) -> np.ndarray:
    """
    sigma_min(A(z/|z|)) / max_j ||A_j|| at each point of a batch.

    Zero points and zero tuples have margin 0. A single point gives a 0-d array.
    """
    z = _coords(A, z)
    flat = z.reshape(-1, A.n_plus_1)
    norms = np.linalg.norm(flat, axis=1)
    margins = np.zeros(flat.shape[0])
    usable = norms > 0
    scale = A.scale()
    if scale > 0 and np.any(usable):
        stack = evaluate(A, flat[usable] / norms[usable, None])
        margins[usable] = batched_margins(stack, scale)
    return margins.reshape(z.shape[:-1])
