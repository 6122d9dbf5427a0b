import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import braid_det
from core.arrangement import (
    braid_tuple,
    eigen_functionals,
    hyperplanes,
    joint_eigen_tuples,
    verify_factorization,
)
from core.exceptions import DimensionError, NotCommutativeError
from core.linalg_core import determinant
from core.mcform import apply_functional, hyperplane_form, omega_eval
from core.pencil import evaluate, is_commutative
from models.geometry import Hyperplane
from models.pencil import MatrixTuple
from utils.geometry_utils import projective_distance


def _contains(vectors, target, tol=1e-8):
    return any(projective_distance(v, target) <= tol for v in vectors)


class TestBraidTuple:

    def test_commutative(self):
        assert is_commutative(braid_tuple())

    def test_determinant(self):
        assert determinant(evaluate(braid_tuple(), [1, 2, 3])) == pytest.approx(2.0)
        assert braid_det([1, 2, 3]) == pytest.approx(2.0)


class TestJointEigenTuples:

    def test_braid(self, braid):
        tuples = joint_eigen_tuples(braid)
        assert len(tuples) == 3
        values = [jt.values for jt in tuples]
        for expected in ([1, -1, 0], [-1, 0, 1], [0, 1, -1]):
            assert any(np.allclose(v, expected, atol=1e-10) for v in values)
        assert max(jt.residual for jt in tuples) < 1e-10

    def test_diagonal_pair(self, diagonal_pair):
        values = [jt.values for jt in joint_eigen_tuples(diagonal_pair)]
        for expected in ([1, 1], [1, 2]):
            assert any(np.allclose(v, expected, atol=1e-10) for v in values)

    def test_simultaneously_diagonalizable(self, rng):
        P = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        Pinv = np.linalg.inv(P)
        D = [np.diag([1, 2, 3]), np.diag([0, 1j, -1])]
        A = MatrixTuple.from_matrices([P @ d @ Pinv for d in D])
        values = [jt.values for jt in joint_eigen_tuples(A)]
        for expected in ([1, 0], [2, 1j], [3, -1]):
            assert any(np.allclose(v, expected, atol=1e-8) for v in values)

    def test_not_commutative(self, split):
        with pytest.raises(NotCommutativeError):
            joint_eigen_tuples(split)


class TestHyperplanes:

    def test_braid_arrangement(self, braid):
        arrangement = hyperplanes(braid)
        assert len(arrangement) == 3
        assert arrangement.total_multiplicity == 3
        normals = [p.normal for p in arrangement]
        for expected in ([1, -1, 0], [0, 1, -1], [-1, 0, 1]):
            assert _contains(normals, expected)
        assert not arrangement.full_space

    def test_diagonal_pair(self, diagonal_pair):
        normals = [p.normal for p in hyperplanes(diagonal_pair)]
        assert len(normals) == 2
        assert _contains(normals, [1, 1])
        assert _contains(normals, [1, 2])

    def test_repeated_plane(self):
        A = MatrixTuple.from_matrices([np.eye(3), np.zeros((3, 3))])
        arrangement = hyperplanes(A)
        assert len(arrangement) == 1
        assert arrangement[0].multiplicity == 3
        assert projective_distance(arrangement[0].normal, [1, 0]) < 1e-12

    def test_full_space(self):
        A = MatrixTuple.from_matrices([np.diag([1, 0]), np.diag([2, 0])])
        arrangement = hyperplanes(A)
        assert arrangement.full_space
        assert arrangement.zero_functionals == 1
        assert arrangement.total_multiplicity == 2

    def test_to_dict(self, braid):
        data = hyperplanes(braid).to_dict()
        assert set(data) == {'planes', 'full_space', 'zero_functionals'}
        assert all(p['multiplicity'] == 1 for p in data['planes'])

    def test_not_commutative(self, split):
        with pytest.raises(NotCommutativeError):
            hyperplanes(split)


class TestVerifyFactorization:

    def test_braid(self, braid):
        report = verify_factorization(braid, hyperplanes(braid))
        assert report.max_residual <= 1e-9
        assert report.passed

    def test_diagonal_pair(self, diagonal_pair):
        report = verify_factorization(diagonal_pair, hyperplanes(diagonal_pair))
        assert report.max_residual <= 1e-9

    def test_wrong_planes(self, braid):
        coordinate_planes = [Hyperplane([1, 0, 0]), Hyperplane([0, 1, 0]), Hyperplane([0, 0, 1])]
        report = verify_factorization(braid, coordinate_planes)
        assert report.max_residual > 1e-6
        assert not report.passed

    def test_multiplicity_mismatch(self, braid):
        with pytest.raises(DimensionError):
            verify_factorization(braid, [Hyperplane([1, -1, 0])])


class TestEigenFunctionals:

    def test_match_hyperplane_forms(self, braid):
        z = np.array([1, 2, 4], dtype=complex)
        form = omega_eval(braid, z)
        planes = list(hyperplanes(braid))
        for phi in eigen_functionals(braid):
            coefficients = apply_functional(phi, form).coefficients
            assert any(
                np.allclose(coefficients, hyperplane_form(plane, z).coefficients, atol=1e-10)
                for plane in planes
            )

    def test_are_projectors(self, braid):
        phis = eigen_functionals(braid)
        assert_allclose(sum(phi.weight for phi in phis), np.eye(3), atol=1e-10)
        assert all(phi.unit_value == pytest.approx(1.0) for phi in phis)
