import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

import core.detpoly
from core.detpoly import group_roots, interpolate_det, restrict_to_line, roots
from core.exceptions import DimensionError, InterpolationError, ZeroPolynomialError
from core.linalg_core import batched_determinants, determinant
from core.pencil import evaluate
from models.pencil import MatrixTuple
from models.polynomial import HomogeneousPolynomial, UnivariatePolynomial, monomial_exponents
from utils.geometry_utils import random_unit_sphere


class TestInterpolateDet:

    def test_split_expansion(self, split):
        poly = interpolate_det(split)
        assert poly.degree == 3
        assert poly.residual <= 1e-8
        # (z0 + z1 + z2)(z0^2 + z1^2 + z2^2): every z_i^3 and z_i^2 z_j is 1, z0 z1 z2 is absent
        for exps in monomial_exponents(3, 3):
            expected = 0.0 if tuple(exps) == (1, 1, 1) else 1.0
            assert abs(poly.coefficient(tuple(exps)) - expected) <= 1e-8

    def test_scalar_tuple(self):
        poly = interpolate_det(MatrixTuple.from_matrices([[[2.0]], [[3.0]]]))
        assert poly.coefficient((1, 0)) == pytest.approx(2.0)
        assert poly.coefficient((0, 1)) == pytest.approx(3.0)

    @pytest.mark.parametrize('q', range(2, 9))
    def test_clock_shift_closed_form(self, clock_shift, q):
        poly = interpolate_det(clock_shift(q))
        omega = np.exp(2j * np.pi / q)
        assert abs(poly.coefficient((q, 0)) - omega ** (q * (q - 1) // 2)) <= 1e-8
        assert abs(poly.coefficient((0, q)) - (-1) ** (q - 1)) <= 1e-8
        for m in range(1, q):
            assert abs(poly.coefficient((q - m, m))) <= 1e-8

    def test_clock_shift_three(self, clock_shift):
        poly = interpolate_det(clock_shift(3))
        assert poly.coefficient((3, 0)) == pytest.approx(1.0)
        assert poly.coefficient((0, 3)) == pytest.approx(1.0)

    def test_fresh_points(self, split, rng):
        poly = interpolate_det(split, seed=7)
        points = random_unit_sphere(rng, 100, 3)
        direct = batched_determinants(evaluate(split, points))
        assert np.max(np.abs(poly.evaluate(points) - direct)) <= 1e-8 * np.max(np.abs(direct))

    def test_held_out_points_catch_a_bad_fit(self, split, monkeypatch):
        calls = []

        def drifting(stack):
            # exact on the fitted samples, off by 1e-3 at the held-out points
            values = batched_determinants(stack)
            calls.append(len(values))
            return values if len(calls) == 1 else values * (1 + 1e-3)

        monkeypatch.setattr(core.detpoly, 'batched_determinants', drifting)
        with pytest.raises(InterpolationError):
            interpolate_det(split)
        assert len(calls) == 2

    def test_residual_covers_held_out_points(self, split):
        poly = interpolate_det(split)
        assert 0 <= poly.residual <= 1e-8

    def test_homogeneity(self, split, rng):
        poly = interpolate_det(split)
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        t = 0.7 - 1.3j
        assert abs(poly.evaluate(t * z) - t ** 3 * poly.evaluate(z)) <= 1e-8 * abs(t ** 3 * poly.evaluate(z))

    def test_monomial_limit(self, split):
        with pytest.raises(InterpolationError):
            interpolate_det(split, max_monomials=5)

    def test_serialization(self, split):
        poly = interpolate_det(split)
        data = poly.to_dict()
        assert data['3,0,0'] == pytest.approx([1.0, 0.0], abs=1e-8)
        restored = HomogeneousPolynomial.from_dict(data, 3, 3)
        assert_allclose(restored.evaluate([1, 1, 1]), 9.0, atol=1e-8)


class TestRestrictToLine:

    def test_braid_against_direct_values(self, braid):
        p = restrict_to_line(braid, [1, 0, 0], [0, 1, 0])
        for t in (0.0, 1.0, 2.0):
            assert abs(p.evaluate(t) - determinant(evaluate(braid, [1, t, 0]))) <= 1e-12
        assert_allclose(p.coefficients, [0, -1, 1, 0], atol=1e-12)

    def test_split_line(self, split):
        p = restrict_to_line(split, [1, 0, 0], [0, 0, 1])
        assert_allclose(p.coefficients, [1, 1, 1, 1], atol=1e-12)

    def test_dependent_points(self, split):
        with pytest.raises(DimensionError):
            restrict_to_line(split, [1, 2, 3], [2, 4, 6])

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_held_out_parameters(self, seed):
        rng = np.random.default_rng(seed)
        A = MatrixTuple(rng.standard_normal((3, 4, 4)) + 1j * rng.standard_normal((3, 4, 4)))
        a, b = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        p = restrict_to_line(A, a, b)
        ts = rng.uniform(-1, 1, A.k + 2) + 1j * rng.uniform(-1, 1, A.k + 2)
        direct = batched_determinants(evaluate(A, a[None, :] + ts[:, None] * b[None, :]))
        scale = max(1.0, np.max(np.abs(direct)))
        assert np.max(np.abs(p.evaluate(ts) - direct)) <= 1e-9 * scale


class TestRoots:

    def test_quadratic(self):
        found = roots(UnivariatePolynomial([1, 0, 1]))
        assert_allclose(found[np.argsort(found.imag)], [-1j, 1j], atol=1e-12)

    def test_split_restriction(self):
        found = roots(UnivariatePolynomial([1, 1, 1, 1]))
        assert_allclose(found[np.argsort(found.imag)], [-1j, -1, 1j], atol=1e-12)

    def test_constant(self):
        assert roots(UnivariatePolynomial([5.0])).size == 0

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            roots(UnivariatePolynomial([0, 0, 0]))

    def test_trims_negligible_leading_terms(self):
        assert_allclose(roots(UnivariatePolynomial([-2, 1, 1e-14])), [2], atol=1e-12)

    def test_reconstruction(self, rng):
        coeffs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        found = roots(UnivariatePolynomial(coeffs))
        rebuilt = UnivariatePolynomial.from_roots(found, leading=coeffs[-1]).coefficients
        assert np.max(np.abs(rebuilt - coeffs)) <= 1e-7 * np.max(np.abs(coeffs))

    def test_group_roots(self):
        groups = group_roots([1.0, 1.0 + 1e-9, 2.0])
        assert [m for _, m in groups] == [2, 1]
