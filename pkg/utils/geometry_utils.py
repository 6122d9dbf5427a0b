"""
Geometry helpers for complex projective space.
"""

import numpy as np

# Coordinates below this fraction of the unit norm are treated as zero when
# choosing the phase reference of a projective representative.
PHASE_REFERENCE_THRESHOLD = 1e-10


def normalize_projective(vector) -> np.ndarray:
    """
    Canonical representative of the projective class of a nonzero vector.

    The result has unit Euclidean norm and its first non-negligible
    coordinate is a positive real number.

    Args:
        vector: Nonzero complex vector

    Returns:
        Normalized complex vector

    Raises:
        ValueError: If the vector is zero
    """
    v = np.asarray(vector, dtype=complex).ravel()
    magnitude = np.linalg.norm(v)
    if magnitude == 0 or not np.isfinite(magnitude):
        raise ValueError("Cannot normalize a zero or non-finite vector")
    v = v / magnitude
    idx = int(np.argmax(np.abs(v) > PHASE_REFERENCE_THRESHOLD))
    phase = v[idx] / abs(v[idx])
    return v / phase


def projective_distance(u, v) -> float:
    """
    Distance between the projective classes of two nonzero vectors.

    Both vectors are scaled to unit norm and aligned in phase before
    taking the Euclidean distance, so the result is independent of the
    chosen representatives.
    """
    a = np.asarray(u, dtype=complex).ravel()
    b = np.asarray(v, dtype=complex).ravel()
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    overlap = np.vdot(b, a)
    if abs(overlap) == 0:
        return float(np.linalg.norm(a - b))
    return float(np.linalg.norm(a - (overlap / abs(overlap)) * b))


def random_complex_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Complex Gaussian vectors, shape (count, dim)."""
    return rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))


def random_unit_sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Points uniformly distributed on the unit sphere of C^dim."""
    z = random_complex_vectors(rng, count, dim)
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_polytorus(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Points with every coordinate uniformly distributed on the unit circle."""
    return np.exp(2j * np.pi * rng.random((count, dim)))


def are_independent(a, b, tol: float = 1e-12) -> bool:
    """Check that two vectors span a two-dimensional subspace."""
    stacked = np.vstack([np.asarray(a, dtype=complex).ravel(), np.asarray(b, dtype=complex).ravel()])
    s = np.linalg.svd(stacked, compute_uv=False)
    return bool(s[0] > 0 and s[-1] > tol * s[0])
