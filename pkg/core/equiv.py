"""
Similarity of Maurer-Cartan forms and recovery of the equivalence (U, V).

If B_j = U A_j V for invertible U, V then F^B_j(z) = V^{-1} F^A_j(z) V at every
common resolvent point. Conversely a V solving F^A_j V = V F^B_j for all j
and z makes A(z) V B(z)^{-1} constant, and its inverse is U.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from models.calculation_result import EquivalenceWitness, SimilaritySolution
from models.pencil import MatrixTuple
from utils.geometry_utils import normalize_projective, random_complex_vectors
from .exceptions import (
    CandidateRejectedError,
    DimensionError,
    NoAdmissibleSamplesError,
    NotSimilarError,
)
from .linalg_core import condition_margin, default_rcond, random_unitary
from .mcform import _coefficients
from .pencil import evaluate
from .spectrum import DEFAULT_TOL, membership

logger = logging.getLogger(__name__)

REJECTION_FACTOR = 20  # draws per requested sample


def _check_shapes(A: MatrixTuple, B: MatrixTuple) -> None:
    if A.k != B.k or A.n != B.n:
        raise DimensionError(f"Tuples differ in shape: (k={A.k}, n={A.n}) vs (k={B.k}, n={B.n})")


def common_resolvent_samples(
    A: MatrixTuple,
    B: MatrixTuple,
    samples: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """
    Random points where both A(z) and B(z) are invertible.

    Raises:
        NoAdmissibleSamplesError: If rejection sampling finds no point
    """
    rng = np.random.default_rng(seed)
    accepted = []
    for z in random_complex_vectors(rng, REJECTION_FACTOR * samples, A.n_plus_1):
        if membership(A, z, tol).invertible and membership(B, z, tol).invertible:
            accepted.append(z)
            if len(accepted) == samples:
                break
    if not accepted:
        raise NoAdmissibleSamplesError("No sample point lies in the common resolvent set")
    if len(accepted) < samples:
        logger.warning(f"Only {len(accepted)} of {samples} sample points are admissible")
    return np.array(accepted)


def _gauge(V: np.ndarray) -> np.ndarray:
    """Representative with ||V||_F = 1 and first nonzero entry positive real."""
    return normalize_projective(V.ravel()).reshape(V.shape)


def solve_form_similarity(
    A: MatrixTuple,
    B: MatrixTuple,
    samples: Optional[int] = None,
    seed: int = 0,
    null_tol: float = 1e-8,
    tol: float = DEFAULT_TOL,
) -> SimilaritySolution:
    """
    Nullspace of the linear system F^A_j(z_s) V - V F^B_j(z_s) = 0.

    With row-major vectorization, vec(X V) = (X kron I) vec(V) and
    vec(V Y) = (I kron Y^T) vec(V). Right singular vectors with singular
    value at most null_tol times the largest block norm ||F^A_j|| + ||F^B_j||
    span the solutions. An exactly cancelling system (k = 1) has a full nullspace.

    Args:
        A, B: Tuples of equal shape
        samples: Number of sample points (default 2(n+1))
        seed: Seed of the sample points
        null_tol: Relative singular value threshold of the nullspace
        tol: Membership tolerance

    Raises:
        NotSimilarError: If the nullspace is trivial
        NoAdmissibleSamplesError: If no common resolvent point is found
    """
    _check_shapes(A, B)
    samples = samples or 2 * A.n_plus_1
    points = common_resolvent_samples(A, B, samples, seed, tol)
    k = A.k
    identity = np.eye(k)

    blocks = []
    reference = 0.0
    for z in points:
        FA, FB = _coefficients(A, z), _coefficients(B, z)
        for j in range(A.n_plus_1):
            blocks.append(np.kron(FA[j], identity) - np.kron(identity, FB[j].T))
            reference = max(reference, np.linalg.norm(FA[j], 2) + np.linalg.norm(FB[j], 2))
    system = np.vstack(blocks)

    _, s, Vh = scipy.linalg.svd(system, full_matrices=False, check_finite=False)
    threshold = null_tol * reference
    null_rows = Vh[s <= threshold]
    logger.info(f"Form similarity system {system.shape}: nullspace dimension {len(null_rows)}")
    if len(null_rows) == 0:
        raise NotSimilarError(
            f"Maurer-Cartan forms are not similar (smallest singular value {s[-1] / reference:.2e} relative)"
        )
    basis = [_gauge(np.conj(row).reshape(k, k)) for row in null_rows]
    return SimilaritySolution(basis=basis, singular_values=s, num_samples=len(points))


def recover_U(
    A: MatrixTuple,
    B: MatrixTuple,
    V: np.ndarray,
    samples: Optional[int] = None,
    seed: int = 1,
    constancy_tol: float = 1e-8,
    residual_tol: float = 1e-7,
    tol: float = DEFAULT_TOL,
) -> EquivalenceWitness:
    """
    Complete a similarity candidate V to a witness U A_j V = B_j.

    C(z) = A(z) V B(z)^{-1} must be the same matrix at every sample point;
    then U = C^{-1}.

    Raises:
        CandidateRejectedError: If V is singular, C(z) is not constant or
            singular, or the witness residual exceeds residual_tol
    """
    _check_shapes(A, B)
    V = np.asarray(V, dtype=complex)
    if V.shape != (A.k, A.k) or condition_margin(V) <= default_rcond(A.k):
        raise CandidateRejectedError("Candidate V is not an invertible k x k matrix")

    samples = samples or 2 * A.n_plus_1
    points = common_resolvent_samples(A, B, samples, seed, tol)
    C = []
    for z in points:
        # C B(z) = A(z) V  <=>  B(z)^T C^T = (A(z) V)^T
        C.append(scipy.linalg.solve(evaluate(B, z).T, (evaluate(A, z) @ V).T, check_finite=False).T)
    C = np.array(C)
    reference = C.mean(axis=0)
    scale = np.linalg.norm(reference)
    if scale == 0:
        raise CandidateRejectedError("A(z) V B(z)^{-1} vanishes")
    deviation = float(np.max(np.linalg.norm(C - reference, axis=(1, 2))) / scale)
    if deviation > constancy_tol:
        raise CandidateRejectedError(f"A(z) V B(z)^-1 is not constant (relative deviation {deviation:.2e})")
    if condition_margin(reference) <= default_rcond(A.k):
        raise CandidateRejectedError("A(z) V B(z)^-1 is singular")

    U = scipy.linalg.inv(reference, check_finite=False)
    residual = 0.0
    for Aj, Bj in zip(A.matrices, B.matrices):
        misfit = np.linalg.norm(U @ Aj @ V - Bj)
        norm = np.linalg.norm(Bj)
        residual = max(residual, misfit / norm if norm > 0 else misfit)
    if residual > residual_tol:
        raise CandidateRejectedError(f"Witness residual {residual:.2e} exceeds {residual_tol:.1e}")
    return EquivalenceWitness(U=U, V=V, residual=float(residual), constancy_deviation=deviation)


def find_witness(
    A: MatrixTuple,
    B: MatrixTuple,
    samples: Optional[int] = None,
    seed: int = 0,
    null_tol: float = 1e-8,
    constancy_tol: float = 1e-8,
    residual_tol: float = 1e-7,
    tol: float = DEFAULT_TOL,
    solution: Optional[SimilaritySolution] = None,
) -> EquivalenceWitness:
    """
    Search the similarity nullspace for an equivalence witness.

    A random combination of the basis is tried first (it is invertible
    whenever some element of the span is), then each basis element.
    A nullspace already computed by solve_form_similarity can be passed
    as solution.

    Raises:
        NotSimilarError: If no candidate yields a witness
    """
    if solution is None:
        solution = solve_form_similarity(A, B, samples, seed, null_tol, tol)
    candidates: List[np.ndarray] = []
    if solution.dimension > 1:
        rng = np.random.default_rng(seed)
        weights = random_complex_vectors(rng, 1, solution.dimension)[0]
        candidates.append(_gauge(sum(w * b for w, b in zip(weights, solution.basis))))
    candidates.extend(solution.basis)

    reasons = []
    for V in candidates:
        try:
            return recover_U(A, B, V, samples, seed + 1, constancy_tol, residual_tol, tol)
        except CandidateRejectedError as e:
            reasons.append(str(e))
            logger.debug(f"Candidate rejected: {e}")
    raise NotSimilarError(f"No similarity candidate yields a witness: {'; '.join(reasons)}")


def _random_invertible(rng: np.random.Generator, k: int, max_condition: float) -> np.ndarray:
    # singular values in [1, max_condition]
    singular = 10.0 ** rng.uniform(0.0, np.log10(max_condition), size=k)
    return random_unitary(rng, k) @ np.diag(singular) @ random_unitary(rng, k)


def random_equivalent_tuple(
    A: MatrixTuple,
    seed: int = 0,
    max_condition: float = 100.0,
) -> Tuple[MatrixTuple, np.ndarray, np.ndarray]:
    """
    Tuple B_j = U A_j V for random invertible U, V of condition at most max_condition.

    Returns:
        (B, U, V)
    """
    rng = np.random.default_rng(seed)
    U = _random_invertible(rng, A.k, max_condition)
    V = _random_invertible(rng, A.k, max_condition)
    B = MatrixTuple(np.einsum('ab,jbc,cd->jad', U, A.matrices, V), label=f"equivalent({A.label or 'A'})")
    return B, U, V
