import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P

from meanper.entire import (EntireFunctionSpec, ExpPolyStream, MultiplicityVariety, SeriesStream,
                            find_zeros, polynomial_zeros, resum_shift, taylor_defect, taylor_stream_of,
                            winding_number)
from meanper.errors import MultiplicityTooHigh, NoZeros, OrderTooLarge
from meanper.growth import YoungSpec

TWO_PI_I = 2j * math.pi


class TestCatalog:
    def test_eval_examples(self, exp_minus_one, xi_squared_minus_one):
        assert exp_minus_one.eval(0, 0) == 0
        assert exp_minus_one.eval(TWO_PI_I, 1) == pytest.approx(1.0, abs=1e-14)
        assert xi_squared_minus_one.eval(1, 0) == 0

    def test_taylor_examples(self, exp_minus_one, xi_squared_minus_one):
        np.testing.assert_allclose(xi_squared_minus_one.taylor(4), [-1, 0, 1, 0, 0])
        exp = EntireFunctionSpec.exp_sum([(1, 1)])
        np.testing.assert_allclose(exp.taylor(3), [1, 1, 1 / 2, 1 / 6])
        np.testing.assert_allclose(exp_minus_one.taylor(2), [0, 1, 1 / 2], atol=1e-15)

    def test_order_cap(self, exp_minus_one):
        with pytest.raises(OrderTooLarge):
            exp_minus_one.eval(1.0, 65)

    def test_segment_average_fills_removable_singularity(self, segment_average):
        assert segment_average.eval(0, 0) == pytest.approx(1.0)
        assert segment_average.eval(0, 1) == pytest.approx(0.0)
        # Phi''(0) = 2 * t^2 / 24 for the segment average of length t
        assert segment_average.eval(0, 2) == pytest.approx(1 / 12)

    @pytest.mark.parametrize("xi", [0.3, 2.0 + 1.0j, -4.0j, 5.0 - 3.0j])
    def test_segment_average_closed_form(self, segment_average, xi):
        expected = (cmath.exp(xi / 2) - cmath.exp(-xi / 2)) / xi
        assert segment_average.eval(xi, 0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("name", ["exp_minus_one", "xi_squared_minus_one", "segment_average"])
    @pytest.mark.parametrize("xi", [0.0, 0.7 - 0.2j, 2.5j, -1.5 + 1.0j])
    def test_derivatives_match_shifted_taylor(self, request, name, xi):
        phi = request.getfixturevalue(name)
        coefficients = phi.derivatives(xi, 5)
        for l in range(5):
            expected = phi.eval(xi, l)
            assert math.factorial(l) * coefficients[l] == pytest.approx(expected, rel=1e-8, abs=1e-12)

    def test_eval_many_matches_eval(self, exp_minus_one):
        xs = np.array([0.1, 1.0 + 1.0j, -2.0j])
        np.testing.assert_allclose(exp_minus_one.eval_many(xs, 2), [exp_minus_one.eval(x, 2) for x in xs])

    def test_multiply(self, xi_squared_minus_one, exp_minus_one):
        product = xi_squared_minus_one.multiply(exp_minus_one)
        xi = 0.4 + 0.3j
        assert product(xi) == pytest.approx(xi_squared_minus_one(xi) * exp_minus_one(xi))
        assert EntireFunctionSpec.segment_average(1.0).multiply(exp_minus_one) is None

    @pytest.mark.parametrize("build", [
        lambda: EntireFunctionSpec.exp_sum([(0, 1)]),
        lambda: EntireFunctionSpec.polynomial([1, 0]),
        lambda: EntireFunctionSpec.segment_average(0.0),
    ])
    def test_invalid_specs(self, build):
        with pytest.raises(ValueError, match="validation failed"):
            build()


class TestStreams:
    def test_stream_examples(self, linear):
        stream = taylor_stream_of(EntireFunctionSpec.exp_sum([(1, TWO_PI_I)]), (linear, 7.0))
        assert stream.coeff(1) == pytest.approx(TWO_PI_I)
        assert stream.growth == (linear, 7.0)

        identity = taylor_stream_of(EntireFunctionSpec.polynomial([0, 1]))
        assert [identity.coeff(n) for n in range(3)] == [0, 1, 0]

        cosh2 = taylor_stream_of(EntireFunctionSpec.exp_sum([(1, 1), (1, -1)]), (YoungSpec.linear(), 2.0))
        assert cosh2.coeff(2) == pytest.approx(1.0)

    def test_coefficients_are_index_stable(self, segment_average):
        stream = taylor_stream_of(segment_average)
        np.testing.assert_allclose(stream.coefficients(10), stream.coefficients(40)[:11], rtol=1e-14)

    def test_exp_poly_shift(self):
        stream = ExpPolyStream.monomial(2, 1.5)
        shifted = stream.shift(0.5)
        w = 0.3 - 0.2j
        assert shifted(w) == pytest.approx((w + 0.5) ** 2 * cmath.exp(1.5 * (w + 0.5)))

    def test_series_stream_evaluation(self):
        stream = SeriesStream(EntireFunctionSpec.exp_sum([(1, 1)]).taylor)
        assert stream(2.0) == pytest.approx(math.exp(2.0), rel=1e-12)

    def test_resum_shift(self):
        coeffs = EntireFunctionSpec.exp_sum([(1, 1)]).taylor(80)
        shifted = resum_shift(coeffs, 1.0, 5)
        expected = [math.e / math.factorial(n) for n in range(6)]
        np.testing.assert_allclose(shifted, expected, rtol=1e-12)

    def test_series_stream_shift(self):
        stream = SeriesStream(EntireFunctionSpec.exp_sum([(1, 2)]).taylor)
        np.testing.assert_allclose(stream.shift(0.5).coefficients(3),
                                   [math.e * 2 ** n / math.factorial(n) for n in range(4)], rtol=1e-10)


class TestFindZeros:
    def test_lattice(self, exp_minus_one):
        V = find_zeros(exp_minus_one, 7.0, 1e-10)
        assert V.points == ((0j, 1), (TWO_PI_I, 1), (-TWO_PI_I, 1))

    def test_quadratic_ordering(self, xi_squared_minus_one):
        V = find_zeros(xi_squared_minus_one, 2.0, 1e-10)
        assert V.multiplicities == [1, 1]
        assert V[0][0] == pytest.approx(1.0, abs=1e-12)
        assert V[1][0] == pytest.approx(-1.0, abs=1e-12)

    def test_double_zero(self, xi_squared):
        V = find_zeros(xi_squared, 1.0, 1e-10)
        assert V.points == ((0j, 2),)

    def test_segment_average_lattice(self, segment_average):
        V = find_zeros(segment_average, 13.0)
        assert [a for a, _ in V] == [TWO_PI_I, -TWO_PI_I, 2 * TWO_PI_I, -2 * TWO_PI_I]

    def test_general_two_term_sum(self):
        # 2 e^{xi} - 3 vanishes at log(3/2) + 2 pi i k
        phi = EntireFunctionSpec.exp_sum([(2, 1), (-3, 0)])
        V = find_zeros(phi, 7.0)
        assert V[0][0] == pytest.approx(math.log(1.5))
        for alpha, _ in V:
            assert abs(phi(alpha)) < 1e-12

    def test_repeated_factor_polynomial(self):
        # (xi - 1)^2 (xi + 2)
        phi = EntireFunctionSpec.polynomial([2, -3, 0, 1])
        V = find_zeros(phi, 3.0)
        assert [(round(a.real, 9), m) for a, m in V] == [(1.0, 2), (-2.0, 1)]

    def test_no_zeros(self):
        with pytest.raises(NoZeros):
            find_zeros(EntireFunctionSpec.exp_sum([(1, 0)]), 10.0)
        with pytest.raises(NoZeros):
            find_zeros(EntireFunctionSpec.polynomial([-1, 0, 1]), 0.5)

    def test_multiplicity_cap(self):
        coeffs = [0.0] * 9 + [1.0]
        with pytest.raises(MultiplicityTooHigh):
            find_zeros(EntireFunctionSpec.polynomial(coeffs), 1.0)

    def test_contour_matches_closed_form(self, xi_squared_minus_one):
        V = find_zeros(xi_squared_minus_one, 2.0, method="contour")
        assert len(V) == 2
        for (a, m), (b, n) in zip(V, find_zeros(xi_squared_minus_one, 2.0)):
            assert abs(a - b) < 1e-8
            assert m == n

    def test_derivative_nonzero_at_reported_order(self, exp_minus_one, xi_squared):
        for phi, radius in ((exp_minus_one, 20.0), (xi_squared, 1.0)):
            for alpha, m in find_zeros(phi, radius):
                assert abs(phi.eval(alpha, m)) > 1e-10

    def test_winding_number_matches_total_multiplicity(self, exp_minus_one):
        V = find_zeros(exp_minus_one, 10.0)
        assert winding_number(exp_minus_one, 0j, 10.0) == V.total_multiplicity

    def test_winding_number_double_zero(self):
        phi = EntireFunctionSpec.polynomial([2, -3, 0, 1])
        assert winding_number(phi, 1.0, 0.5) == 2


QUARTER_GRID = [complex(x, y) / 4 for x in range(-6, 7) for y in range(-6, 7)]


@st.composite
def separated_zeros(draw):
    points = draw(st.lists(st.sampled_from(QUARTER_GRID), min_size=1, max_size=4, unique=True))
    multiplicities = draw(st.lists(st.integers(1, 3), min_size=len(points), max_size=len(points)))
    return list(zip(points, multiplicities))


def polynomial_with_zeros(zeros):
    roots = [alpha for alpha, m in zeros for _ in range(m)]
    return EntireFunctionSpec.polynomial(P.polyfromroots(roots))


class TestCloseZeros:
    @pytest.mark.parametrize("method", ["closed_form", "contour"])
    @pytest.mark.parametrize("delta", [1e-3, 1e-4])
    def test_close_simple_zeros_stay_distinct(self, method, delta):
        phi = polynomial_with_zeros([(1.0, 1), (1.0 + delta, 1)])
        V = find_zeros(phi, 2.0, method=method)
        assert V.multiplicities == [1, 1]
        assert sorted(a.real for a, _ in V) == pytest.approx([1.0, 1.0 + delta], abs=1e-9)
        for alpha, _ in V:
            assert abs(phi(alpha)) < 1e-12

    @pytest.mark.parametrize("method", ["closed_form", "contour"])
    def test_double_zero_next_to_simple_zero(self, method):
        phi = polynomial_with_zeros([(1.0, 2), (1.001, 1)])
        V = find_zeros(phi, 2.0, method=method)
        assert sorted((round(a.real, 6), m) for a, m in V) == [(1.0, 2), (1.001, 1)]

    def test_polynomial_cluster_is_split(self):
        coeffs = P.polyfromroots([1.0, 1.0001])
        zeros = polynomial_zeros(coeffs, 1e-10)
        assert [m for _, m in zeros] == [1, 1]

    def test_taylor_defect(self, xi_squared):
        assert taylor_defect(lambda z: xi_squared.eval_many(z, 0), xi_squared.eval, 0j, 2) == 0.0
        close = polynomial_with_zeros([(1.0, 1), (1.0001, 1)])
        assert taylor_defect(lambda z: close.eval_many(z, 0), close.eval, 1.00005, 2) > 1e-10

    @settings(max_examples=25, deadline=None)
    @given(zeros=separated_zeros(), method=st.sampled_from(["closed_form", "contour"]))
    def test_reported_multiplicities_are_exact(self, zeros, method):
        phi = polynomial_with_zeros(zeros)
        V = find_zeros(phi, 3.0, method=method)
        assert V.total_multiplicity == sum(m for _, m in zeros)
        for alpha, m in V:
            assert winding_number(phi, alpha, 0.1) == m
            assert abs(phi.eval(alpha, m)) > 1e-9
            assert taylor_defect(lambda z: phi.eval_many(z, 0), phi.eval, alpha, m) < 1e-8


class TestMultiplicityVariety:
    def test_from_points_orders_by_modulus_then_argument(self):
        V = MultiplicityVariety.from_points([(-1, 1), (2j, 2), (1, 1), (0, 1)])
        assert [a for a, _ in V] == [0, 1, -1, 2j]
        assert V.prefix_sums() == [0, 1, 2, 3]
        assert V.total_multiplicity == 5

    def test_rejects_unordered_or_repeated_points(self):
        with pytest.raises(ValueError, match="not ordered"):
            MultiplicityVariety(points=((2.0 + 0j, 1), (1.0 + 0j, 1)))
        with pytest.raises(ValueError, match="distinct"):
            MultiplicityVariety.from_points([(1, 1), (1, 2)])

    def test_prefix_and_indices(self, fourier_variety):
        assert len(fourier_variety.prefix(3)) == 3
        with pytest.raises(IndexError):
            fourier_variety.prefix(8)
        with pytest.raises(IndexError):
            fourier_variety.check_index(0, 1)
        assert fourier_variety.index_of(-TWO_PI_I) == 2

    def test_to_rows(self, ode_variety):
        rows = ode_variety.to_rows()
        assert [(row["k"], row["m"]) for row in rows] == [(0, 1), (1, 1)]
        assert [row["re"] for row in rows] == pytest.approx([1.0, -1.0], abs=1e-12)
        assert [row["im"] for row in rows] == [0.0, 0.0]
