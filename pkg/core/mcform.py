"""
Maurer-Cartan form omega_A(z) = A(z)^{-1} dA(z) and its identities.

The coefficients F_j = A(z)^{-1} A_j satisfy
    d(A^{-1}) = -A^{-1} dA A^{-1},   d omega = -omega ^ omega,
    sum_j z_j F_j = I,
and phi(omega) is closed for every functional phi that is central on the
algebra generated by the tuple. The checks here return error magnitudes;
callers apply thresholds.
"""

import logging
from itertools import combinations
from typing import Callable, Dict, Optional

import numpy as np

from models.calculation_result import CentralityReport, FormDiagnostics
from models.forms import LinearFunctional, OneFormAtPoint, ScalarOneFormAtPoint
from models.geometry import Hyperplane
from models.pencil import MatrixTuple
from utils.geometry_utils import random_complex_vectors
from .exceptions import DimensionError, SingularPointError
from .linalg_core import inverse, solve
from .pencil import evaluate
from .spectrum import DEFAULT_TOL, membership

logger = logging.getLogger(__name__)

DEFAULT_STEP_SCALE = 1e-5
RESOLVENT_GENERATORS = 3


def _require_resolvent(A: MatrixTuple, z: np.ndarray, tol: float, what: str) -> None:
    verdict = membership(A, z, tol)
    if not verdict.invertible:
        raise SingularPointError(f"{what}: point lies in the projective spectrum", verdict.margin)


def _default_step(z: np.ndarray, h: Optional[float]) -> float:
    return DEFAULT_STEP_SCALE * float(np.linalg.norm(z)) if h is None else float(h)


def _coefficients(A: MatrixTuple, z: np.ndarray) -> np.ndarray:
    """F_j = A(z)^{-1} A_j stacked as (n+1, k, k); z must be in the resolvent set."""
    k = A.k
    rhs = np.concatenate(list(A.matrices), axis=1)
    F = solve(evaluate(A, z), rhs)
    return F.reshape(k, A.n_plus_1, k).transpose(1, 0, 2)


def omega_eval(A: MatrixTuple, z, tol: float = DEFAULT_TOL) -> OneFormAtPoint:
    """
    Coefficients of omega_A at z.

    Raises:
        SingularPointError: If z lies in P(A)
    """
    z = np.asarray(z, dtype=complex)
    _require_resolvent(A, z, tol, "omega_eval")
    return OneFormAtPoint(base=z, coeffs=_coefficients(A, z))


def _stencil(A: MatrixTuple, z: np.ndarray, h: float, tol: float, evaluator: Callable):
    """Central-difference pairs evaluator(z +- h e_i) for every i."""
    plus, minus = [], []
    for i in range(A.n_plus_1):
        step = np.zeros(A.n_plus_1, dtype=complex)
        step[i] = h
        for shifted, bucket in ((z + step, plus), (z - step, minus)):
            _require_resolvent(A, shifted, tol, "stencil")
            bucket.append(evaluator(shifted))
    return plus, minus


def resolvent_derivative_check(A: MatrixTuple, z, h: Optional[float] = None, tol: float = DEFAULT_TOL) -> float:
    """
    max_j || (A^{-1}(z + h e_j) - A^{-1}(z - h e_j)) / 2h + A^{-1} A_j A^{-1} ||.

    Second order in h.
    """
    z = np.asarray(z, dtype=complex)
    h = _default_step(z, h)
    _require_resolvent(A, z, tol, "resolvent_derivative_check")
    R = inverse(evaluate(A, z))
    plus, minus = _stencil(A, z, h, tol, lambda p: inverse(evaluate(A, p)))
    errors = [
        np.linalg.norm((plus[j] - minus[j]) / (2 * h) + R @ A.matrices[j] @ R)
        for j in range(A.n_plus_1)
    ]
    return float(max(errors))


def flatness_check(A: MatrixTuple, z, h: Optional[float] = None, tol: float = DEFAULT_TOL) -> float:
    """
    max_{i<j} || (d_i F_j - d_j F_i) + (F_i F_j - F_j F_i) ||, the defect of d omega = -omega ^ omega.
    """
    z = np.asarray(z, dtype=complex)
    h = _default_step(z, h)
    F = omega_eval(A, z, tol).coeffs
    plus, minus = _stencil(A, z, h, tol, lambda p: _coefficients(A, p))
    # dF[i][j] = d_i F_j
    dF = [(plus[i] - minus[i]) / (2 * h) for i in range(A.n_plus_1)]
    errors = [
        np.linalg.norm((dF[i][j] - dF[j][i]) + (F[i] @ F[j] - F[j] @ F[i]))
        for i, j in combinations(range(A.n_plus_1), 2)
    ]
    return float(max(errors, default=0.0))


def euler_contraction(A: MatrixTuple, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """sum_j z_j F_j, which equals the identity."""
    return omega_eval(A, z, tol).euler_contraction()


def apply_functional(phi: LinearFunctional, form: OneFormAtPoint) -> ScalarOneFormAtPoint:
    """
    Scalar form phi(omega_A) = sum_j phi(F_j) dz_j at the base point of `form`.

    Raises:
        DimensionError: If the weight size differs from k
    """
    if phi.size != form.k:
        raise DimensionError(f"Functional acts on {phi.size}x{phi.size} matrices, form has k={form.k}")
    return ScalarOneFormAtPoint(base=form.base, coefficients=phi(form.coeffs))


def _scalar_coefficients(A: MatrixTuple, phi: LinearFunctional, z: np.ndarray) -> np.ndarray:
    return phi(_coefficients(A, z))


def centrality_check(
    phi: LinearFunctional,
    A: MatrixTuple,
    word_len: int = 3,
    trials: int = 200,
    seed: int = 0,
    resolvent_samples: int = RESOLVENT_GENERATORS,
    tol: float = DEFAULT_TOL,
) -> CentralityReport:
    """
    Largest |phi(XY) - phi(YX)| / (||X|| ||Y|| ||W||) over random words.

    Words of length 1..word_len are drawn from the tuple matrices and the
    resolvents A^{-1}(z_s) at a few random resolvent points. This samples the
    inversion-closed algebra generated by the tuple; finitely many words make
    the result heuristic.
    """
    if phi.size != A.k:
        raise DimensionError(f"Functional acts on {phi.size}x{phi.size} matrices, tuple has k={A.k}")
    rng = np.random.default_rng(seed)

    generators = [m for m in A.matrices if np.linalg.norm(m) > 0]
    found = 0
    for z in random_complex_vectors(rng, 10 * resolvent_samples, A.n_plus_1):
        if found == resolvent_samples:
            break
        if membership(A, z, tol).invertible:
            generators.append(inverse(evaluate(A, z)))
            found += 1
    generators = [g / np.linalg.norm(g) for g in generators]

    weight_norm = np.linalg.norm(phi.weight)
    if not generators or weight_norm == 0:
        return CentralityReport(max_violation=0.0, words_tested=0, resolvent_samples=found)

    def word() -> np.ndarray:
        length = int(rng.integers(1, word_len + 1))
        X = np.eye(A.k, dtype=complex)
        for idx in rng.integers(0, len(generators), size=length):
            X = X @ generators[idx]
        return X

    worst = 0.0
    for _ in range(trials):
        X, Y = word(), word()
        scale = np.linalg.norm(X) * np.linalg.norm(Y) * weight_norm
        if scale == 0:
            continue
        worst = max(worst, abs(phi(X @ Y) - phi(Y @ X)) / scale)

    logger.debug(f"centrality_check({phi.label}): max violation {worst:.2e} over {trials} word pairs")
    return CentralityReport(max_violation=float(worst), words_tested=trials, resolvent_samples=found)


def closedness_check(
    A: MatrixTuple,
    phi: LinearFunctional,
    z,
    h: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> float:
    """max_{i<j} |d_i phi(F_j) - d_j phi(F_i)| by central differences."""
    z = np.asarray(z, dtype=complex)
    h = _default_step(z, h)
    _require_resolvent(A, z, tol, "closedness_check")
    plus, minus = _stencil(A, z, h, tol, lambda p: _scalar_coefficients(A, phi, p))
    dg = [(plus[i] - minus[i]) / (2 * h) for i in range(A.n_plus_1)]
    errors = [abs(dg[i][j] - dg[j][i]) for i, j in combinations(range(A.n_plus_1), 2)]
    return float(max(errors, default=0.0))


def descent_check(A: MatrixTuple, phi: LinearFunctional, z, tol: float = DEFAULT_TOL) -> complex:
    """
    Contraction of phi(omega_A) with the Euler field, which equals phi(I) = trace(W).

    phi(omega_A) descends to the projective resolvent set when this vanishes.
    """
    form = omega_eval(A, z, tol)
    return apply_functional(phi, form).contraction()


def hyperplane_form(plane: Hyperplane, z) -> ScalarOneFormAtPoint:
    """
    Coefficients of d<z, n> / <z, n> at z.

    For the spectral-projector functional of a commutative tuple this agrees
    with apply_functional.

    Raises:
        SingularPointError: If z lies on the plane
    """
    z = np.asarray(z, dtype=complex)
    value = plane.evaluate(z)
    if abs(value) <= DEFAULT_TOL * np.linalg.norm(z):
        raise SingularPointError("Point lies on the hyperplane", abs(value) / np.linalg.norm(z))
    return ScalarOneFormAtPoint(base=z, coefficients=plane.normal / value)


def richardson_ratio(check: Callable[[float], float], h: float) -> float:
    """check(h) / check(h / 2); about 4 for a second-order difference."""
    coarse, fine = check(h), check(h / 2)
    return float(coarse / fine) if fine > 0 else float('inf')


def diagnose(
    A: MatrixTuple,
    phi: LinearFunctional,
    z,
    h: Optional[float] = None,
    thresholds: Optional[Dict[str, float]] = None,
    tol: float = DEFAULT_TOL,
) -> FormDiagnostics:
    """Run every pointwise check of omega_A and phi(omega_A) at z."""
    z = np.asarray(z, dtype=complex)
    h = _default_step(z, h)
    euler = euler_contraction(A, z, tol)
    return FormDiagnostics(
        point=[[float(c.real), float(c.imag)] for c in z],
        euler_error=float(np.linalg.norm(euler - np.eye(A.k))),
        resolvent_derivative_error=resolvent_derivative_check(A, z, h, tol),
        flatness_error=flatness_check(A, z, h, tol),
        closedness_error=closedness_check(A, phi, z, h, tol),
        descent_value=descent_check(A, phi, z, tol),
        step=h,
        thresholds=dict(thresholds or {}),
    )
