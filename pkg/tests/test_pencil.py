import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from core.exceptions import DimensionError
from core.pencil import augment_with_identity, evaluate, independence_check, is_commutative, resolvent_margins
from models.pencil import MatrixTuple, ProjectivePoint
from utils.geometry_utils import normalize_projective, projective_distance

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
complex_numbers = st.builds(complex, finite, finite)


class TestMatrixTuple:

    def test_shape_properties(self, split):
        assert (split.n_plus_1, split.n, split.k) == (3, 2, 3)
        assert len(split) == 3

    def test_read_only(self, braid):
        with pytest.raises(ValueError):
            braid.matrices[0, 0, 0] = 5

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            MatrixTuple(np.ones((2, 2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            MatrixTuple.from_matrices([[[np.nan]]])


class TestEvaluate:

    def test_braid_first_matrix(self, braid):
        assert_allclose(evaluate(braid, [1, 0, 0]), np.diag([1, -1, 0]))

    def test_split_at_ones(self, split):
        expected = np.array([[3, 0, 0], [0, 1 + 1j, -1], [0, 1, 1 - 1j]])
        assert_allclose(evaluate(split, [1, 1, 1]), expected)

    def test_origin(self, split):
        assert_allclose(evaluate(split, np.zeros(3)), np.zeros((3, 3)))

    def test_batch(self, braid):
        points = np.array([[1, 0, 0], [0, 1, 0]])
        stack = evaluate(braid, points)
        assert stack.shape == (2, 3, 3)
        assert_allclose(stack[1], braid[1])

    def test_coordinate_count(self, braid):
        with pytest.raises(DimensionError):
            evaluate(braid, [1, 2])

    @settings(max_examples=30, deadline=None)
    @given(complex_numbers, complex_numbers, st.integers(0, 2 ** 32 - 1))
    def test_linear(self, alpha, beta, seed):
        rng = np.random.default_rng(seed)
        A = MatrixTuple(rng.standard_normal((3, 4, 4)) + 1j * rng.standard_normal((3, 4, 4)))
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        combined = evaluate(A, alpha * z + beta * w)
        assert_allclose(combined, alpha * evaluate(A, z) + beta * evaluate(A, w), atol=1e-10)


class TestResolventMargins:

    def test_batch_shape(self, split):
        points = np.array([[2, 1, 1], [1, -1, 0], [0, 0, 0]], dtype=complex)
        margins = resolvent_margins(split, points)
        assert margins.shape == (3,)
        assert margins[0] > 1e-2
        assert margins[1] < 1e-14
        assert margins[2] == 0.0

    def test_single_point(self, scalar_pair):
        margin = resolvent_margins(scalar_pair, [3, 1])
        assert margin.shape == ()
        # |3 - 1| / sqrt(10) with max_j |A_j| = 1
        assert float(margin) == pytest.approx(2 / np.sqrt(10))

    def test_zero_tuple(self):
        A = MatrixTuple(np.zeros((2, 2, 2)))
        assert_allclose(resolvent_margins(A, [[1, 0], [0, 1]]), 0.0)

    def test_representative_independent(self, braid):
        z = np.array([1, 2j, -3])
        assert float(resolvent_margins(braid, z)) == pytest.approx(float(resolvent_margins(braid, -4j * z)))


class TestCommutativity:

    def test_braid(self, braid):
        assert is_commutative(braid)

    def test_split(self, split):
        assert not is_commutative(split)

    def test_clock_shift(self, clock_shift):
        assert not is_commutative(clock_shift(3))


class TestIndependence:

    def test_braid_rows_sum_to_zero(self, braid):
        report = independence_check(braid)
        assert report.rank == 2
        assert not report.independent

    def test_repeated_identity(self):
        report = independence_check(MatrixTuple.from_matrices([np.eye(2), np.eye(2)]))
        assert report.rank == 1

    def test_identity_and_non_scalar(self, diagonal_pair):
        report = independence_check(diagonal_pair)
        assert report.rank == 2
        assert report.independent
        assert report.to_dict()['independent'] is True

    def test_augment_with_identity(self, braid):
        augmented = augment_with_identity(braid)
        assert augmented.n_plus_1 == 4
        assert_allclose(augmented[0], np.eye(3))


class TestProjectivePoint:

    def test_canonical_form(self):
        p = ProjectivePoint.from_coords([2j, 0, 2j])
        assert_allclose(p.coords, [1 / np.sqrt(2), 0, 1 / np.sqrt(2)])

    def test_skips_leading_zero(self):
        p = ProjectivePoint.from_coords([0, -3, 4])
        assert p.coords[1].real > 0
        assert p.coords[1].imag == pytest.approx(0)

    def test_affine_chart(self):
        p = ProjectivePoint.from_coords([2, 4, -2])
        assert_allclose(p.affine(0), [2, -1])
        assert ProjectivePoint.from_coords([0, 1, 0]).affine(0) is None

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            ProjectivePoint.from_coords([0, 0])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), complex_numbers.filter(lambda t: abs(t) > 1e-3))
    def test_scale_invariance(self, seed, t):
        rng = np.random.default_rng(seed)
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert_allclose(normalize_projective(t * z), normalize_projective(z), atol=1e-12)
        assert projective_distance(t * z, z) < 1e-12
