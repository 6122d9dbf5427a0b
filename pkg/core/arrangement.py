"""
Hyperplane decomposition of the projective spectrum of a commutative tuple.

Commuting matrices share eigenvectors. Each joint eigenvector v gives a
multiplicative functional phi with A_j v = phi(A_j) v, and P(A) is the union
of the hyperplanes {z : sum_j z_j phi(A_j) = 0}.
"""

import logging
from typing import Iterable, List, Tuple

import numpy as np
import scipy.linalg

from models.calculation_result import FactorizationReport, JointEigenTuple
from models.forms import LinearFunctional
from models.geometry import Hyperplane, HyperplaneArrangement
from models.pencil import MatrixTuple
from utils.geometry_utils import projective_distance, random_complex_vectors, random_unit_sphere
from .exceptions import DefectiveCombinationError, DimensionError, NotCommutativeError
from .linalg_core import batched_determinants
from .pencil import evaluate, is_commutative

logger = logging.getLogger(__name__)

MAX_EIGENVECTOR_CONDITION = 1e8
MAX_RESEEDS = 3


def braid_tuple() -> MatrixTuple:
    """Diagonal tuple whose spectrum is the braid arrangement (z0-z1)(z1-z2)(z2-z0) = 0."""
    return MatrixTuple.from_matrices(
        [np.diag([1, -1, 0]), np.diag([-1, 0, 1]), np.diag([0, 1, -1])],
        label="braid",
    )


def _diagonalize(A: MatrixTuple, seed: int, residual_tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Joint eigenvectors from one generic combination M = sum_j c_j A_j.

    Returns:
        (V, values, residuals): eigenvector columns, (k, n+1) joint eigenvalues
        from Rayleigh quotients, and per-vector max ||A_j v - lambda_j v|| / ||v||
    """
    if not is_commutative(A):
        raise NotCommutativeError("Joint eigenvalues need a commutative tuple")

    rng = np.random.default_rng(seed)
    for attempt in range(1 + MAX_RESEEDS):
        c = random_complex_vectors(rng, 1, A.n_plus_1)[0]
        M = evaluate(A, c)
        _, V = scipy.linalg.eig(M, check_finite=False)
        condition = np.linalg.cond(V)
        if not np.isfinite(condition) or condition > MAX_EIGENVECTOR_CONDITION:
            logger.debug(f"Attempt {attempt}: eigenvector condition {condition:.2e}, reseeding")
            continue

        # A_j V[:, i] for every j, i: shape (n+1, k, k)
        images = np.einsum('jab,bi->jai', A.matrices, V)
        norms2 = np.sum(np.abs(V) ** 2, axis=0)
        values = (np.einsum('ai,jai->ij', np.conj(V), images) / norms2[:, None])
        defects = images - V[None, :, :] * values.T[:, None, :]
        residuals = np.max(np.linalg.norm(defects, axis=1), axis=0) / np.sqrt(norms2)
        if np.max(residuals) > residual_tol:
            logger.debug(f"Attempt {attempt}: joint eigen residual {np.max(residuals):.2e}, reseeding")
            continue
        return V, values, residuals

    raise DefectiveCombinationError(
        f"Generic combination is not diagonalizable after {MAX_RESEEDS} reseeds; "
        "tuples needing exact multiplicities are not supported"
    )


def joint_eigen_tuples(A: MatrixTuple, seed: int = 0, residual_tol: float = 1e-7) -> List[JointEigenTuple]:
    """
    Joint eigenvalue tuples (phi(A_0), ..., phi(A_n)), k of them with multiplicity.

    Raises:
        NotCommutativeError: If the matrices do not commute
        DefectiveCombinationError: If no diagonalizable combination is found
    """
    _, values, residuals = _diagonalize(A, seed, residual_tol)
    return [JointEigenTuple(values=values[i], residual=float(residuals[i])) for i in range(A.k)]


def hyperplanes(
    A: MatrixTuple,
    seed: int = 0,
    dedup_tol: float = 1e-8,
    residual_tol: float = 1e-7,
) -> HyperplaneArrangement:
    """
    Hyperplanes H_phi whose union is P(A).

    Tuples with equal projective class are merged and their multiplicities
    summed. A functional vanishing on every A_j makes P(A) the whole space;
    it is counted and flagged instead of producing a plane.
    """
    tuples = joint_eigen_tuples(A, seed=seed, residual_tol=residual_tol)
    scale = max(A.scale(), np.finfo(float).tiny)
    arrangement = HyperplaneArrangement()
    for jt in tuples:
        if np.max(np.abs(jt.values)) <= residual_tol * scale:
            arrangement.zero_functionals += 1
            arrangement.full_space = True
            continue
        for plane in arrangement.planes:
            if projective_distance(plane.normal, jt.values) <= dedup_tol:
                plane.multiplicity += 1
                break
        else:
            arrangement.planes.append(Hyperplane(jt.values))

    if arrangement.full_space:
        logger.warning(f"{arrangement.zero_functionals} joint eigenvalue tuples vanish: P(A) = C^{A.n_plus_1}")
    logger.info(f"Found {len(arrangement)} hyperplanes for k={A.k}, n={A.n}")
    return arrangement


def verify_factorization(
    A: MatrixTuple,
    planes: Iterable[Hyperplane],
    num_points: int = 50,
    seed: int = 0,
    tol: float = 1e-6,
) -> FactorizationReport:
    """
    Check det A(z) = c * prod_i <z, n_i>^{m_i} with one fitted constant c.

    Raises:
        DimensionError: If the multiplicities do not sum to k
    """
    planes = list(planes)
    total = sum(p.multiplicity for p in planes)
    if total != A.k:
        raise DimensionError(f"Plane multiplicities sum to {total}, expected k = {A.k}")

    rng = np.random.default_rng(seed)
    points = random_unit_sphere(rng, num_points, A.n_plus_1)
    d = batched_determinants(evaluate(A, points))
    p = np.ones(num_points, dtype=complex)
    for plane in planes:
        p *= plane.evaluate(points) ** plane.multiplicity

    denom = np.vdot(p, p).real
    c = np.vdot(p, d) / denom if denom > 0 else 0.0
    top = np.max(np.abs(d))
    misfit = np.max(np.abs(d - c * p))
    max_residual = float(misfit / top) if top > 0 else float(misfit)

    report = FactorizationReport(constant=complex(c), max_residual=max_residual, tolerance=tol, num_points=num_points)
    if not report.passed:
        logger.warning(f"Factorization residual {max_residual:.2e} exceeds {tol:.1e}")
    return report


def eigen_functionals(A: MatrixTuple, seed: int = 0, residual_tol: float = 1e-7) -> List[LinearFunctional]:
    """
    Multiplicative functionals of a commutative tuple as weight matrices.

    The weight of the i-th functional is the rank-one spectral projector
    v_i u_i with u_i the i-th row of V^{-1}, so trace(W X) = lambda_i(X)
    on the algebra generated by the tuple.
    """
    V, _, _ = _diagonalize(A, seed, residual_tol)
    Vinv = scipy.linalg.inv(V, check_finite=False)
    return [
        LinearFunctional(np.outer(V[:, i], Vinv[i, :]), label=f"phi_{i}", claimed_central=True)
        for i in range(A.k)
    ]
