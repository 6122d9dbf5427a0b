"""
Shared fixtures: the standard tuples and functionals of the toolkit.
"""

import numpy as np
import pytest

from core.arrangement import braid_tuple
from core.demos import clock_shift_tuple, split_algebra_functionals, split_algebra_tuple
from models.forms import LinearFunctional
from models.pencil import MatrixTuple


@pytest.fixture
def braid():
    return braid_tuple()


@pytest.fixture
def split():
    return split_algebra_tuple()


@pytest.fixture
def phis():
    """(phi_1, phi_2) = traces of the C and M_2 summands of the split algebra."""
    return split_algebra_functionals()


@pytest.fixture
def scalar_pair():
    """1 x 1 tuple (1, -1), whose spectrum is the single point [1, 1]."""
    return MatrixTuple.from_matrices([[[1.0]], [[-1.0]]], label="scalar")


@pytest.fixture
def diagonal_pair():
    """(I, diag(1, 2))."""
    return MatrixTuple.from_matrices([np.eye(2), np.diag([1.0, 2.0])], label="diagonal")


@pytest.fixture
def clock_shift():
    return clock_shift_tuple


@pytest.fixture
def noncentral():
    """Weight picking the (2, 1) entry: not central on M_2."""
    W = np.zeros((3, 3))
    W[1, 2] = 1.0
    return LinearFunctional(W, label="noncentral")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def split_det(z):
    """(z0 + z1 + z2)(z0^2 + z1^2 + z2^2)."""
    z = np.asarray(z, dtype=complex)
    return np.sum(z, axis=-1) * np.sum(z ** 2, axis=-1)


def braid_det(z):
    """(z0 - z1)(z2 - z0)(z1 - z2)."""
    z = np.asarray(z, dtype=complex)
    return (z[..., 0] - z[..., 1]) * (z[..., 2] - z[..., 0]) * (z[..., 1] - z[..., 2])
