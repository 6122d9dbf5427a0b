"""
Finite-dimensional models of classical examples.

Clock-and-shift pairs (U_q, V_q) with V_q U_q = omega U_q V_q approximate the
rotation algebra; their spectrum lies on |z0| = |z1|. The disk algebra is
represented by the tuple (1, w, ..., w^n): z is in the resolvent set iff
sum_j z_j w^j has no zero in the closed unit disk.
"""

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from models.calculation_result import DiskMembershipReport, LocusReport, PeriodReport
from models.forms import LinearFunctional
from models.geometry import Loop
from models.pencil import MatrixTuple
from models.polynomial import UnivariatePolynomial
from .detpoly import roots
from .exceptions import DimensionError, LoopTouchesSpectrumError, SingularPointError
from .periods import PeriodIntegrator
from .spectrum import cloud_sample

logger = logging.getLogger(__name__)

DISK_TOL = 1e-9


def clock_shift_tuple(q: int) -> MatrixTuple:
    """
    The pair (U_q, V_q): U_q = diag(1, omega, ..., omega^{q-1}), omega = e^{2 pi i / q},
    and the cyclic shift V_q e_j = e_{j-1 mod q}, so that V_q U_q = omega U_q V_q.

    det(z0 U_q + z1 V_q) = omega^{q(q-1)/2} z0^q + (-1)^{q-1} z1^q.

    Raises:
        DimensionError: If q < 2
    """
    if q < 2:
        raise DimensionError(f"Clock-shift pair needs q >= 2, got {q}")
    omega = np.exp(2j * np.pi / q)
    U = np.diag(omega ** np.arange(q))
    V = np.roll(np.eye(q), 1, axis=1)
    return MatrixTuple.from_matrices([U, V], label=f"clock-shift q={q}")


def split_algebra_tuple() -> MatrixTuple:
    """
    3 x 3 tuple generating C + M_2(C) with
    det A(z) = (z0 + z1 + z2)(z0^2 + z1^2 + z2^2).
    """
    A0 = np.array([[1, 0, 0], [0, 0, -1], [0, 1, 0]])
    A1 = np.diag([1, 1j, -1j])
    A2 = np.eye(3)
    return MatrixTuple.from_matrices([A0, A1, A2], label="split algebra")


def split_algebra_functionals() -> Tuple[LinearFunctional, LinearFunctional]:
    """
    Traces of the two summands: phi_1(omega) = d log(z0 + z1 + z2),
    phi_2(omega) = d log(z0^2 + z1^2 + z2^2).
    """
    return (
        LinearFunctional.from_diagonal([1, 0, 0], label="phi_1", central=True, trace=True),
        LinearFunctional.from_diagonal([0, 1, 1], label="phi_2", central=True, trace=True),
    )


def rotation_loop(outer: bool = True, radius: float = 2.0, samples: int = 256) -> Loop:
    """z0 = radius e^{i theta}, z1 = 1 (outer) or z0 = 1, z1 = radius e^{i theta} (inner)."""
    if outer:
        return Loop(kind='circle', center=[0, 1], direction=[1, 0], radius=radius, samples=samples)
    return Loop(kind='circle', center=[1, 0], direction=[0, 1], radius=radius, samples=samples)


def rotation_period_experiment(
    q: int,
    outer: bool = True,
    integrator: Optional[PeriodIntegrator] = None,
) -> PeriodReport:
    """
    Period of the normalized-trace form (1/q) Tr(omega) on a rotation loop.

    The dominant coordinate winds det A(z) q times, so the period is 2 pi i,
    matching dz0/z0 on the outer loop and dz1/z1 on the inner one.
    """
    A = clock_shift_tuple(q)
    integrator = integrator or PeriodIntegrator()
    loop = rotation_loop(outer, samples=integrator.initial_samples)
    return integrator.integrate(A, LinearFunctional.normalized_trace(q), loop)


def rotation_spectrum_locus(q: int, num_lines: int = 50, seed: int = 0) -> LocusReport:
    """Largest ||z0| - |z1|| over normalized spectrum points of the clock-shift pair."""
    A = clock_shift_tuple(q)
    cloud = cloud_sample(A, num_lines, seed=seed)
    coords = cloud.coordinates()
    deviation = float(np.max(np.abs(np.abs(coords[:, 0]) - np.abs(coords[:, 1])))) if len(cloud) else 0.0
    logger.info(f"Clock-shift q={q}: {len(cloud)} points, locus deviation {deviation:.2e}")
    return LocusReport(q=q, num_points=len(cloud), max_deviation=deviation, skipped_lines=cloud.skipped_lines)


def rotation_convergence_table(
    qs: Iterable[int],
    num_lines: int = 20,
    seed: int = 0,
    integrator: Optional[PeriodIntegrator] = None,
) -> pd.DataFrame:
    """
    Locus deviation and normalized-trace windings for a range of q.

    No rate is asserted; the table only tracks the finite-q models.
    """
    integrator = integrator or PeriodIntegrator()
    rows = []
    for q in qs:
        locus = rotation_spectrum_locus(q, num_lines, seed)
        outer = rotation_period_experiment(q, True, integrator)
        inner = rotation_period_experiment(q, False, integrator)
        rows.append({
            'q': q,
            'num_points': locus.num_points,
            'locus_deviation': locus.max_deviation,
            'outer_winding': outer.normalized.real,
            'inner_winding': inner.normalized.real,
            'outer_error': outer.error,
            'inner_error': inner.error,
        })
    return pd.DataFrame(rows, columns=['q', 'num_points', 'locus_deviation', 'outer_winding',
                                       'inner_winding', 'outer_error', 'inner_error'])


def disk_poly_membership(coeffs, tol: float = DISK_TOL) -> DiskMembershipReport:
    """
    Invertibility of sum_j z_j w^j in the disk algebra.

    Invertible iff every root lies outside the closed unit disk, with margin
    min |root| - 1. A nonzero constant is invertible with infinite margin;
    the zero polynomial is singular and flagged degenerate.
    """
    p = UnivariatePolynomial(np.asarray(coeffs, dtype=complex))
    if p.is_zero():
        logger.warning("Zero coefficient vector: P(A) = C^{n+1}")
        return DiskMembershipReport(invertible=False, margin=float('-inf'), roots=np.empty(0, dtype=complex),
                                    degenerate=True, tolerance=tol)
    found = roots(p)
    if found.size == 0:
        return DiskMembershipReport(invertible=True, margin=float('inf'), roots=found, tolerance=tol)
    margin = float(np.min(np.abs(found)) - 1.0)
    return DiskMembershipReport(invertible=margin > tol, margin=margin, roots=found, tolerance=tol)


def disk_period_profile(
    coeffs,
    ws,
    radius: float = 1.0,
    integrator: Optional[PeriodIntegrator] = None,
) -> pd.DataFrame:
    """
    Periods of the evaluation forms d log(sum_j z_j w^j) on the radial loop through z.

    Every evaluation functional at |w| <= 1 has phi_w(1) = 1, so each period
    is 2 pi i: the integer-valued period is constant over the disk.

    Raises:
        SingularPointError: If z is not invertible in the disk algebra
        DimensionError: If some |w| > 1
    """
    z = np.asarray(coeffs, dtype=complex)
    verdict = disk_poly_membership(z)
    if not verdict.invertible:
        raise SingularPointError("Coefficient vector is not invertible in the disk algebra", verdict.margin)
    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    if np.any(np.abs(ws) > 1 + DISK_TOL):
        raise DimensionError("Evaluation points must lie in the closed unit disk")

    integrator = integrator or PeriodIntegrator()
    loop = Loop(kind='circle', center=np.zeros_like(z), direction=z, radius=radius,
                samples=integrator.initial_samples)
    rows = []
    for w in ws:
        powers = w ** np.arange(z.size)

        def coefficients(points: np.ndarray, powers=powers) -> np.ndarray:
            values = points @ powers
            return powers[None, :] / values[:, None]

        def validate(params: np.ndarray, points: np.ndarray, powers=powers) -> float:
            values = np.abs(points @ powers)
            worst = int(np.argmin(values))
            if values[worst] <= DISK_TOL * np.linalg.norm(points[worst]):
                raise LoopTouchesSpectrumError("Loop meets a zero of the evaluation form",
                                               parameter=float(params[worst]), margin=float(values[worst]))
            return float(values[worst])

        report = integrator.integrate_form(coefficients, loop, validate=validate)
        rows.append({
            'w_re': w.real,
            'w_im': w.imag,
            'period_re': report.value.real,
            'period_im': report.value.imag,
            'winding': report.quantized,
            'error': report.error,
        })
    return pd.DataFrame(rows, columns=['w_re', 'w_im', 'period_re', 'period_im', 'winding', 'error'])
