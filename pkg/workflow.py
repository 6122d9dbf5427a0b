"""
Workflow functions for projective spectrum computations.

Each function takes loaded inputs plus the configuration dictionary, runs
the engines with configured thresholds, logs progress and returns a
JSON-ready document or a table. The command-line interface calls these.
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from core import arrangement, demos, detpoly, equiv, mcform, spectrum
from core.pencil import independence_check
from core.periods import PeriodIntegrator
from models.forms import LinearFunctional
from models.geometry import Loop, SliceGrid
from models.pencil import MatrixTuple
from reports import ReportGenerator
from utils.config_loader import get_config_value
from utils.geometry_utils import random_complex_vectors

logger = logging.getLogger(__name__)


def _seed(config: dict) -> int:
    return int(get_config_value(config, 'numerics.seed', 42))


def _tol(config: dict) -> float:
    return float(get_config_value(config, 'numerics.membership_tol', 1e-8))


def compute_det(A: MatrixTuple, config: dict) -> Dict:
    """
    Interpolate det A(z).

    Args:
        A: Matrix tuple
        config: Configuration dictionary

    Returns:
        Polynomial document {degree, nvars, residual, coefficients}
    """
    logger.info(f"Interpolating det A(z) for k={A.k}, n={A.n}")
    independence_check(A)
    poly = detpoly.interpolate_det(
        A,
        seed=_seed(config),
        oversampling=get_config_value(config, 'detpoly.oversampling', 2),
        residual_tol=get_config_value(config, 'detpoly.residual_tol', 1e-8),
        max_monomials=get_config_value(config, 'detpoly.max_monomials', 10000),
    )
    logger.info(f"Interpolation complete: {len(poly.to_dict())} nonzero coefficients, residual {poly.residual:.2e}")
    return ReportGenerator(config).polynomial_report(poly)


def sample_cloud(A: MatrixTuple, num_lines: int, config: dict) -> pd.DataFrame:
    """Spectrum points over random lines as a CSV-ready table."""
    logger.info(f"Sampling the spectrum on {num_lines} random lines")
    cloud = spectrum.cloud_sample(
        A,
        num_lines,
        seed=_seed(config),
        tol=_tol(config),
        verify_tol=get_config_value(config, 'spectrum.verify_tol', 1e-6),
        method=get_config_value(config, 'spectrum.method', 'pencil'),
        cluster_radius=get_config_value(config, 'detpoly.cluster_radius', 1e-6),
    )
    return spectrum.cloud_frame(cloud, A.n_plus_1)


def sample_slice(A: MatrixTuple, chart: int, config: dict, extent: float = 2.0) -> pd.DataFrame:
    """Membership margins over the affine chart z_chart = 1."""
    resolution = int(get_config_value(config, 'spectrum.grid_resolution', 101))
    grid = SliceGrid(-extent, extent, -extent, extent, resolution)
    logger.info(f"Computing affine slice in chart {chart} on a {resolution}x{resolution} grid")
    return spectrum.affine_slice(A, chart, grid)


def compute_arrangement(A: MatrixTuple, config: dict) -> Dict:
    """Hyperplanes of a commutative tuple with the factorization check."""
    seed = _seed(config)
    rank = independence_check(A)
    planes = arrangement.hyperplanes(
        A,
        seed=seed,
        dedup_tol=get_config_value(config, 'arrangement.dedup_tol', 1e-8),
        residual_tol=get_config_value(config, 'arrangement.residual_tol', 1e-7),
    )
    factorization = None
    if not planes.full_space:
        factorization = arrangement.verify_factorization(
            A,
            planes,
            num_points=get_config_value(config, 'arrangement.factorization_points', 50),
            seed=seed,
            tol=get_config_value(config, 'arrangement.factorization_tol', 1e-6),
        )
        logger.info(f"Factorization residual {factorization.max_residual:.2e}")
    return ReportGenerator(config).arrangement_report(planes, factorization, rank)


def _resolvent_points(A: MatrixTuple, count: int, seed: int, tol: float) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    points = []
    for z in random_complex_vectors(rng, 20 * count, A.n_plus_1):
        if spectrum.membership(A, z, tol).invertible:
            points.append(z / np.linalg.norm(z))
            if len(points) == count:
                break
    return points


def check_form(A: MatrixTuple, phi: LinearFunctional, num_points: Optional[int], config: dict) -> Dict:
    """
    Run every Maurer-Cartan check at random resolvent points.

    Returns:
        Diagnostics document with per-point errors and pass/fail flags
    """
    seed = _seed(config)
    tol = _tol(config)
    num_points = num_points or get_config_value(config, 'mcform.check_points', 5)
    thresholds = {
        'euler': get_config_value(config, 'mcform.euler_tol', 1e-10),
        'derivative': get_config_value(config, 'mcform.derivative_tol', 1e-6),
        'closed': get_config_value(config, 'mcform.closed_tol', 1e-6),
    }
    step_scale = get_config_value(config, 'mcform.step_scale', 1e-5)

    centrality = mcform.centrality_check(
        phi,
        A,
        word_len=get_config_value(config, 'mcform.word_length', 3),
        trials=get_config_value(config, 'mcform.centrality_trials', 200),
        seed=seed,
        tol=tol,
    )
    logger.info(f"Centrality violation of {phi.label or 'phi'}: {centrality.max_violation:.2e}")

    diagnostics = []
    for z in _resolvent_points(A, num_points, seed, tol):
        diagnostics.append(mcform.diagnose(A, phi, z, h=step_scale * np.linalg.norm(z),
                                           thresholds=thresholds, tol=tol))
    logger.info(f"Checked the form at {len(diagnostics)} resolvent points")
    return ReportGenerator(config).diagnostics_report(
        phi.label,
        centrality.max_violation,
        diagnostics,
        central_tol=get_config_value(config, 'mcform.central_tol', 1e-10),
    )


def compute_period(A: MatrixTuple, phi: LinearFunctional, loop: Loop, config: dict) -> Dict:
    """Period of phi(omega_A) over the loop plus the nontriviality certificate."""
    integrator = PeriodIntegrator.from_config(config)
    certificate = integrator.nontriviality_certificate(A, phi, [loop], seed=_seed(config))
    period = certificate.periods[0]
    logger.info(f"Period / 2 pi i = {period.normalized:.10g}, verdict {certificate.verdict}")
    return ReportGenerator(config).period_report(period, certificate)


def compute_equivalence(A: MatrixTuple, B: MatrixTuple, samples: Optional[int], config: dict) -> Dict:
    """Search for U, V with U A_j V = B_j."""
    null_tol = get_config_value(config, 'equiv.null_tol', 1e-8)
    seed = _seed(config)
    solution = equiv.solve_form_similarity(A, B, samples, seed, null_tol, _tol(config))
    witness = equiv.find_witness(
        A,
        B,
        samples,
        seed,
        null_tol=null_tol,
        constancy_tol=get_config_value(config, 'equiv.constancy_tol', 1e-8),
        residual_tol=get_config_value(config, 'equiv.residual_tol', 1e-7),
        tol=_tol(config),
        solution=solution,
    )
    logger.info(f"Found witness with residual {witness.residual:.2e}")
    return ReportGenerator(config).witness_report(witness, solution.dimension)


def run_rotation_demo(q: int, num_lines: int, config: dict) -> Dict:
    """Spectrum locus and both normalized-trace periods of the clock-shift pair."""
    integrator = PeriodIntegrator.from_config(config)
    locus = demos.rotation_spectrum_locus(q, num_lines, seed=_seed(config))
    outer = demos.rotation_period_experiment(q, True, integrator)
    inner = demos.rotation_period_experiment(q, False, integrator)
    return {
        'q': q,
        'locus': locus.to_dict(),
        'outer_period': outer.to_dict(),
        'inner_period': inner.to_dict(),
    }


def run_rotation_table(qs: Sequence[int], num_lines: int, config: dict) -> pd.DataFrame:
    integrator = PeriodIntegrator.from_config(config)
    return demos.rotation_convergence_table(qs, num_lines, seed=_seed(config), integrator=integrator)


def run_disk_demo(coeffs: Sequence[complex], ws: Optional[Sequence[complex]], config: dict) -> Dict:
    """Disk-algebra membership, and the period profile when the point is invertible."""
    verdict = demos.disk_poly_membership(coeffs)
    report = verdict.to_dict()
    if verdict.invertible and ws is not None:
        integrator = PeriodIntegrator.from_config(config)
        profile = demos.disk_period_profile(coeffs, ws, integrator=integrator)
        report['period_profile'] = profile.to_dict(orient='records')
    return report
