"""
Membership tests and sampling of the projective spectrum.

A point z lies in P(A) when A(z) is not invertible. Lines always meet the
spectrum, so sampling works line by line: the restricted pencil on a line
has exactly k spectrum points counted with multiplicity.
"""

import logging
from typing import List, Optional

import numpy as np
import pandas as pd

from models.calculation_result import MembershipVerdict, PointCloud, SpectrumPoint
from models.geometry import SliceGrid
from models.pencil import MatrixTuple, ProjectivePoint
from utils.geometry_utils import are_independent, random_complex_vectors
from .detpoly import group_roots, restrict_to_line, roots
from .exceptions import DimensionError, LineInSpectrumError, ZeroPolynomialError
from .linalg_core import as_complex_matrix, eigenvalues, inverse
from .pencil import evaluate, resolvent_margins

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
# Candidate shifts r_j = SHIFT_RADIUS * exp(2 pi i (j + SHIFT_OFFSET) / (k + 1)); at most k are singular.
SHIFT_RADIUS = 0.7
SHIFT_OFFSET = 0.37
# Shifts are scanned in batches; the first margin above SHIFT_ACCEPT ends the scan.
SHIFT_BATCH = 4
SHIFT_ACCEPT = 1e-3


def membership(A: MatrixTuple, z, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """
    Decide whether A(z) is invertible.

    The margin sigma_min(A(z)) / max_j ||A_j|| is computed at the normalized
    point, so the verdict does not depend on the representative of [z].

    Args:
        A: Matrix tuple
        z: Point of C^{n+1}
        tol: Margin at or below which A(z) counts as singular

    Returns:
        MembershipVerdict (z = 0 is reported singular and degenerate)
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (A.n_plus_1,):
        raise DimensionError(f"Point has shape {z.shape}, expected ({A.n_plus_1},)")
    norm = np.linalg.norm(z)
    if norm == 0:
        return MembershipVerdict(invertible=False, margin=0.0, tolerance=tol, degenerate=True)
    margin = float(resolvent_margins(A, z))
    return MembershipVerdict(invertible=margin > tol, margin=margin, tolerance=tol)


def _line_basis(a, b, n_plus_1: int):
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != (n_plus_1,) or b.shape != (n_plus_1,):
        raise DimensionError(f"Line points need {n_plus_1} coordinates")
    if not are_independent(a, b):
        raise DimensionError("Line needs two linearly independent points")
    return a, b


def _choose_shift(A: MatrixTuple, a: np.ndarray, b: np.ndarray, tol: float):
    """Shift r with A(b + r a) well conditioned, and the point b + r a."""
    k = A.k
    candidates = SHIFT_RADIUS * np.exp(2j * np.pi * (np.arange(k + 1) + SHIFT_OFFSET) / (k + 1))
    best_margin, best = -1.0, None
    for start in range(0, k + 1, SHIFT_BATCH):
        chunk = candidates[start:start + SHIFT_BATCH]
        shifted = b[None, :] + chunk[:, None] * a[None, :]
        margins = resolvent_margins(A, shifted)
        i = int(np.argmax(margins))
        if margins[i] > best_margin:
            best_margin, best = float(margins[i]), (chunk[i], shifted[i])
        if best_margin > SHIFT_ACCEPT:
            break
    if best_margin <= tol:
        raise LineInSpectrumError(f"A(z) is singular along the whole line (best margin {best_margin:.3e})")
    return best


def _pencil_points(A: MatrixTuple, a: np.ndarray, b: np.ndarray, tol: float, cluster_radius: float):
    """
    Spectrum points on the line through a and b from one standard eigenproblem.

    With w = b + r a chosen so that A(w) is well conditioned, the line is
    {x a + y w}, and x A(a) + y A(w) is singular exactly when -y/x is an
    eigenvalue of A(w)^{-1} A(a).
    """
    r, w = _choose_shift(A, a, b, tol)
    M = inverse(evaluate(A, w)) @ evaluate(A, a)
    s = -eigenvalues(M)

    found = []
    for value, multiplicity in group_roots(s, cluster_radius):
        # a + s w and a/s + w are the same projective point; keep the bounded one.
        coords = a + value * w if abs(value) <= 1 else a / value + w
        at_infinity = abs(1 + value * r) <= cluster_radius * max(1.0, abs(value))
        found.append((coords, multiplicity, at_infinity))
    return found


def _polynomial_points(A: MatrixTuple, a: np.ndarray, b: np.ndarray, cluster_radius: float):
    """Spectrum points from the companion roots of t -> det A(a + t b)."""
    p = restrict_to_line(A, a, b)
    scale = (A.scale() * (np.linalg.norm(a) + np.linalg.norm(b))) ** A.k
    try:
        t = roots(p, zero_tol=1e-12 * scale)
    except ZeroPolynomialError as e:
        raise LineInSpectrumError("Restriction of det A(z) to the line vanishes identically") from e

    found = [(a + value * b, multiplicity, False) for value, multiplicity in group_roots(t, cluster_radius)]
    missing = A.k - len(t)
    if missing > 0:
        found.append((b.copy(), missing, True))
    return found


def line_sample(
    A: MatrixTuple,
    a,
    b,
    tol: float = DEFAULT_TOL,
    method: str = 'pencil',
    cluster_radius: float = 1e-6,
) -> List[SpectrumPoint]:
    """
    Points where the projective line through [a] and [b] meets p(A).

    Args:
        A: Matrix tuple
        a, b: Linearly independent points spanning the line
        tol: Membership tolerance
        method: 'pencil' (eigenvalues of the restricted pencil) or
            'polynomial' (companion roots of det A(a + t b))
        cluster_radius: Relative radius for merging coincident roots

    Returns:
        Up to k SpectrumPoint values with multiplicities summing to k.
        A root at infinity of the restriction is the point [b].

    Raises:
        LineInSpectrumError: If the whole line lies in the spectrum
        DimensionError: If a and b do not span a line
    """
    a, b = _line_basis(a, b, A.n_plus_1)
    if method == 'pencil':
        found = _pencil_points(A, a, b, tol, cluster_radius)
    elif method == 'polynomial':
        found = _polynomial_points(A, a, b, cluster_radius)
    else:
        raise ValueError(f"Unknown line sampling method: {method}")

    if not found:
        return []
    projective = [ProjectivePoint.from_coords(coords) for coords, _, _ in found]
    margins = resolvent_margins(A, np.array([p.coords for p in projective]))
    return [
        SpectrumPoint(point, multiplicity=multiplicity, margin=float(margin), at_infinity=at_infinity)
        for point, margin, (_, multiplicity, at_infinity) in zip(projective, margins, found)
    ]


def cloud_sample(
    A: MatrixTuple,
    num_lines: int,
    seed: int = 42,
    tol: float = DEFAULT_TOL,
    verify_tol: float = 1e-6,
    method: str = 'pencil',
    cluster_radius: float = 1e-6,
) -> PointCloud:
    """
    Spectrum points collected over pseudo-random lines.

    Lines lying inside the spectrum are skipped and counted. Each point is
    re-verified by membership; points whose margin exceeds verify_tol are
    dropped and counted as rejected.

    Args:
        A: Matrix tuple
        num_lines: Number of random lines (0 gives an empty cloud)
        seed: Seed of the line generator
        tol: Membership tolerance for the line solver
        verify_tol: Largest accepted margin of a returned point
        method: Line sampling method
        cluster_radius: Relative radius for merging coincident roots

    Returns:
        PointCloud
    """
    if num_lines < 0:
        raise ValueError("num_lines must be nonnegative")
    rng = np.random.default_rng(seed)
    cloud = PointCloud()
    for _ in range(num_lines):
        a, b = random_complex_vectors(rng, 2, A.n_plus_1)
        cloud.lines_sampled += 1
        try:
            found = line_sample(A, a, b, tol=tol, method=method, cluster_radius=cluster_radius)
        except LineInSpectrumError as e:
            cloud.skipped_lines += 1
            logger.debug(f"Skipping line: {e}")
            continue
        for sp in found:
            if sp.margin <= verify_tol:
                cloud.points.append(sp)
            else:
                cloud.rejected_points += 1

    if cloud.skipped_lines:
        logger.warning(f"{cloud.skipped_lines} of {num_lines} lines lie inside the spectrum")
    if cloud.rejected_points:
        logger.warning(f"{cloud.rejected_points} points failed membership re-verification")
    logger.info(f"Sampled {len(cloud)} spectrum points on {num_lines} lines")
    return cloud


def cloud_frame(cloud: PointCloud, n_plus_1: int) -> pd.DataFrame:
    """Point cloud as a table with columns re_z0, im_z0, ..., margin, multiplicity."""
    columns = []
    for j in range(n_plus_1):
        columns += [f're_z{j}', f'im_z{j}']
    columns += ['margin', 'multiplicity']
    rows = []
    for sp in cloud.points:
        row = []
        for c in sp.point.coords:
            row += [c.real, c.imag]
        rows.append(row + [sp.margin, sp.multiplicity])
    frame = pd.DataFrame(rows, columns=columns)
    return frame.astype({'multiplicity': int})


def affine_slice(A: MatrixTuple, chart: int = 0, grid: Optional[SliceGrid] = None) -> pd.DataFrame:
    """
    Membership margins over a grid in the affine chart z_chart = 1.

    For n = 1 the grid covers the complex xi plane (columns xi_re, xi_im);
    for n = 2 it covers real values of (xi1, xi2).

    Returns:
        DataFrame with the grid coordinates, 'margin' and 'det_abs'
    """
    if A.n not in (1, 2):
        raise DimensionError(f"Affine slices need n = 1 or 2, got n = {A.n}")
    if not 0 <= chart <= A.n:
        raise DimensionError(f"Chart {chart} out of range 0..{A.n}")
    grid = grid or SliceGrid()
    xs, ys = grid.axes()
    X, Y = np.meshgrid(xs, ys, indexing='ij')
    X, Y = X.ravel(), Y.ravel()

    points = np.ones((X.size, A.n_plus_1), dtype=complex)
    others = [j for j in range(A.n_plus_1) if j != chart]
    if A.n == 1:
        points[:, others[0]] = X + 1j * Y
        columns = ('xi_re', 'xi_im')
    else:
        points[:, others[0]] = X
        points[:, others[1]] = Y
        columns = ('xi1', 'xi2')

    stack = evaluate(A, points)
    frame = pd.DataFrame({
        columns[0]: X,
        columns[1]: Y,
        'margin': resolvent_margins(A, points),
        'det_abs': np.abs(np.linalg.det(stack)),
    })
    logger.debug(f"affine_slice: chart {chart}, {len(frame)} grid points")
    return frame


def classical_spectrum(A0, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Eigenvalues of A0 read from the projective spectrum of (A0, -I).

    det(z_0 A0 - z_1 I) vanishes exactly when z_1 / z_0 is an eigenvalue, so
    the spectrum points on the line z_0 = 1 are (1, lambda).

    Returns:
        Eigenvalues with multiplicity
    """
    A0 = as_complex_matrix(A0, "A0")
    k = A0.shape[0]
    pair = MatrixTuple.from_matrices([A0, -np.eye(k)], label="classical")
    values = []
    for sp in line_sample(pair, [1.0, 0.0], [0.0, 1.0], tol=tol):
        xi = sp.point.affine(0)
        values += [complex(xi[0])] * sp.multiplicity
    return np.array(values, dtype=complex)
