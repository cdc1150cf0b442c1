import cmath
import json
import math

import numpy as np
import pytest

from meanper.entire import EntireFunctionSpec, ExpPolyStream, MultiplicityVariety, taylor_stream_of
from meanper.errors import TruncationWarning
from meanper.expansion import (ExpansionCoefficients, Flavor, SynthesizedFunction, c_to_d,
                               coeff_norm_general, coeff_norm_interpolating, convergence_report,
                               divided_difference_norm, extract_general, extract_interpolating,
                               jet_norm, norm_growth, read_csv, residual_mean_periodic,
                               synthesize_general, synthesize_interpolating, truncation_for_radius,
                               write_csv, write_json)
from meanper.functionals import AnalyticFunctional, dirac
from meanper.newton import ValueSet

TWO_PI_I = 2j * math.pi
GRID = [complex(x, y) for x in np.linspace(-2, 2, 5) for y in np.linspace(-2, 2, 5)]
UNIT_GRID = [complex(x, y) for x in np.linspace(-1, 1, 5) for y in np.linspace(-1, 1, 5)]


def general(V, rows):
    return ExpansionCoefficients.from_rows(Flavor.GENERAL, V, rows)


def interpolating(V, rows):
    return ExpansionCoefficients.from_rows(Flavor.INTERPOLATING, V, rows)


def ode_f(z):
    return 3 * cmath.exp(z) + 2 * cmath.exp(-z)


@pytest.fixture
def zero_stream():
    return ExpPolyStream([])


@pytest.fixture
def ode_c(xi_squared_minus_one, ode_variety, ode_input):
    return extract_general(xi_squared_minus_one, ode_variety, ode_input)


class TestExtraction:
    def test_general_ode(self, ode_c):
        assert ode_c.flavor == Flavor.GENERAL
        assert [ode_c[0, 0], ode_c[1, 0]] == pytest.approx([5.0, -4.0])

    def test_general_constant(self, exp_minus_one, fourier_variety):
        one = taylor_stream_of(EntireFunctionSpec.exp_sum([(1.0, 0.0)]))
        c = extract_general(exp_minus_one, fourier_variety, one)
        assert c[0, 0] == pytest.approx(1.0)
        assert all(c[k, 0] == 0 for k in range(1, c.K))

    def test_zero_function(self, exp_minus_one, fourier_variety, xi_squared_minus_one, ode_variety,
                           zero_stream):
        assert extract_general(exp_minus_one, fourier_variety, zero_stream).max_abs() == 0.0
        assert extract_interpolating(xi_squared_minus_one, ode_variety, zero_stream).max_abs() == 0.0

    def test_truncation(self, exp_minus_one, fourier_variety, sin_two_pi):
        c = extract_general(exp_minus_one, fourier_variety, sin_two_pi, K=3)
        assert c.K == 3
        assert c.variety == fourier_variety.prefix(3)

    def test_threads_do_not_change_results(self, exp_minus_one, fourier_variety, sin_two_pi):
        serial = extract_general(exp_minus_one, fourier_variety, sin_two_pi)
        parallel = extract_general(exp_minus_one, fourier_variety, sin_two_pi, threads=4)
        np.testing.assert_array_equal(serial.table.flat(), parallel.table.flat())

    def test_interpolating_fourier(self, exp_minus_one, fourier_variety):
        f = taylor_stream_of(EntireFunctionSpec.exp_sum([(1.0, TWO_PI_I)]))
        d = extract_interpolating(exp_minus_one, fourier_variety, f)
        assert d.flavor == Flavor.INTERPOLATING
        for k in range(d.K):
            if k == fourier_variety.index_of(TWO_PI_I):
                assert d[k, 0] == pytest.approx(1.0)
            else:
                assert d[k, 0] == 0

    def test_interpolating_sine(self, exp_minus_one, fourier_variety, sin_two_pi):
        d = extract_interpolating(exp_minus_one, fourier_variety, sin_two_pi)
        assert d[fourier_variety.index_of(TWO_PI_I), 0] == pytest.approx(-0.5j)
        assert d[fourier_variety.index_of(-TWO_PI_I), 0] == pytest.approx(0.5j)

    def test_interpolating_ode(self, xi_squared_minus_one, ode_variety, ode_input):
        d = extract_interpolating(xi_squared_minus_one, ode_variety, ode_input)
        assert [d[0, 0], d[1, 0]] == pytest.approx([3.0, 2.0])

    def test_interpolating_double_zero(self):
        # Phi = xi^2 (xi - 1), f = (1 + 2z) + 3 e^z
        phi = EntireFunctionSpec.polynomial([0, 0, -1, 1])
        V = MultiplicityVariety.from_points([(0, 2), (1, 1)])
        f = taylor_stream_of(EntireFunctionSpec.poly_exp_sum([([1, 2], 0), ([3], 1)]))
        d = extract_interpolating(phi, V, f)
        np.testing.assert_allclose(d.table.flat(), [1, 2, 3], atol=1e-10)
        c = extract_general(phi, V, f)
        np.testing.assert_allclose(c_to_d(c).table.flat(), [1, 2, 3], atol=1e-10)

    def test_truncation_for_radius(self, fourier_variety):
        assert truncation_for_radius(fourier_variety, 7.0) == 3
        assert truncation_for_radius(fourier_variety, 2 * math.pi) == 3
        assert truncation_for_radius(fourier_variety, 0.0) == 1
        with pytest.raises(ValueError):
            truncation_for_radius(fourier_variety, -1.0)

    def test_coefficient_rows(self, ode_c):
        rows = ode_c.to_rows()
        assert list(rows[0]) == ['k', 'l', 're', 'im', 'abs_alpha', 'norm_weight']
        assert rows[0]['norm_weight'] == 1.0
        assert rows[1]['norm_weight'] == pytest.approx(0.5)


class TestCToD:
    def test_ode(self, ode_c):
        d = c_to_d(ode_c)
        assert d.flavor == Flavor.INTERPOLATING
        assert [d[0, 0], d[1, 0]] == pytest.approx([3.0, 2.0])

    def test_single_packet_and_zero(self, ode_variety):
        single = c_to_d(general(ode_variety.prefix(1), [[2.5]]))
        assert single[0, 0] == 2.5
        assert c_to_d(ExpansionCoefficients.zeros(Flavor.GENERAL, ode_variety)).max_abs() == 0.0

    def test_matches_interpolating_extraction(self, exp_minus_one, fourier_variety, sin_two_pi):
        c = extract_general(exp_minus_one, fourier_variety, sin_two_pi)
        d = extract_interpolating(exp_minus_one, fourier_variety, sin_two_pi)
        converted = c_to_d(c)
        scale = d.max_abs()
        for k, l, value in d.rows():
            assert abs(converted[k, l] - value) <= 1e-7 * scale

    def test_truncation_warning(self, exp_minus_one, fourier_variety, sin_two_pi):
        c = extract_general(exp_minus_one, fourier_variety, sin_two_pi)
        with pytest.warns(TruncationWarning):
            d = c_to_d(c, fourier_variety, K=3)
        assert d.K == 3
        assert d.warnings
        assert all(w.ratio > 1e-10 for w in d.warnings)

    def test_needs_general_flavor(self, ode_variety):
        with pytest.raises(ValueError, match="general coefficients"):
            c_to_d(ExpansionCoefficients.zeros(Flavor.INTERPOLATING, ode_variety))


class TestSynthesis:
    def test_general_ode(self, ode_c, ode_variety):
        for z in (0.0, 0.5 - 1.0j, -1.5 + 0.2j):
            value, partials = synthesize_general(ode_variety, ode_c, z)
            assert len(partials) == 2
            assert value == pytest.approx(ode_f(z), rel=1e-12)
        assert synthesize_general(ode_variety, ode_c, 0.0)[0] == pytest.approx(5.0)

    def test_general_single_packet(self, fourier_variety):
        W = fourier_variety.prefix(2)
        c = general(W, [[1.0], [0.0]])
        z = 0.3 + 0.4j
        assert synthesize_general(W, c, z)[0] == pytest.approx(cmath.exp(z * W[0][0]))

    def test_interpolating_examples(self, ode_variety):
        d = interpolating(ode_variety, [[3.0], [2.0]])
        z = 0.7 + 0.1j
        assert synthesize_interpolating(ode_variety, d, z) == pytest.approx(ode_f(z))
        origin = MultiplicityVariety.from_points([(0, 1)])
        assert synthesize_interpolating(origin, interpolating(origin, [[1.0]]), 3.0 - 2.0j) == 1

    def test_interpolating_sine(self, fourier_variety):
        rows = [[0.0] for _ in fourier_variety]
        rows[fourier_variety.index_of(TWO_PI_I)] = [-0.5j]
        rows[fourier_variety.index_of(-TWO_PI_I)] = [0.5j]
        d = interpolating(fourier_variety, rows)
        for z in (0.0, 0.25, 0.6 + 0.8j, -0.3 - 0.9j):
            assert abs(synthesize_interpolating(fourier_variety, d, z) - cmath.sin(2 * math.pi * z)) < 1e-9

    def test_flavor_checks(self, ode_variety):
        with pytest.raises(ValueError):
            synthesize_general(ode_variety, interpolating(ode_variety, [[1.0], [1.0]]), 0.0)
        with pytest.raises(ValueError):
            synthesize_interpolating(ode_variety, general(ode_variety, [[1.0], [1.0]]), 0.0)

    def test_closed_forms_agree(self, ode_c):
        from_c = SynthesizedFunction.from_c(ode_c)
        from_d = SynthesizedFunction.from_d(c_to_d(ode_c))
        for z in GRID[:6]:
            assert from_c(z) == pytest.approx(ode_f(z), rel=1e-10)
            assert from_d(z) == pytest.approx(ode_f(z), rel=1e-10)

    def test_general_coefficients_are_unique(self, xi_squared_minus_one, ode_variety, ode_c):
        again = extract_general(xi_squared_minus_one, ode_variety, SynthesizedFunction.from_c(ode_c).stream())
        np.testing.assert_allclose(again.table.flat(), ode_c.table.flat(), rtol=1e-8)


class TestResidual:
    def test_ode_synthesis(self, xi_squared_minus_one, ode_c):
        T = AnalyticFunctional(xi_squared_minus_one)
        assert residual_mean_periodic(T, SynthesizedFunction.from_c(ode_c), GRID) < 1e-12

    def test_periodic_exponential(self, exp_minus_one):
        f = taylor_stream_of(EntireFunctionSpec.exp_sum([(1.0, TWO_PI_I)]))
        assert residual_mean_periodic(AnalyticFunctional(exp_minus_one), f, UNIT_GRID) < 1e-10

    def test_zero_function(self, exp_minus_one, zero_stream):
        assert residual_mean_periodic(AnalyticFunctional(exp_minus_one), zero_stream, GRID) == 0

    def test_non_mean_periodic(self, exp_minus_one):
        f = taylor_stream_of(EntireFunctionSpec.exp_sum([(1.0, 1.0)]))
        assert residual_mean_periodic(AnalyticFunctional(exp_minus_one), f, [0.0]) == pytest.approx(math.e - 1)

    def test_threads(self, exp_minus_one, sin_two_pi):
        T = AnalyticFunctional(exp_minus_one)
        assert residual_mean_periodic(T, sin_two_pi, UNIT_GRID, threads=3) < 1e-10

    def test_empty_grid(self, exp_minus_one, zero_stream):
        with pytest.raises(ValueError, match="empty"):
            residual_mean_periodic(dirac(0), zero_stream, [])


class TestConvergenceReport:
    def test_ode_report(self, ode_c, ode_variety):
        report = convergence_report(ode_variety, ode_c, GRID)
        assert len(report.packet_magnitudes) == 2
        assert report.points == len(GRID)
        assert report.flagged
        data = report.to_dict()
        assert [p['k'] for p in data['packets']] == [0, 1]
        assert set(data) >= {'value_magnitude', 'fitted_decay', 'flagged', 'points'}

    def test_vanishing_last_packet(self):
        V = MultiplicityVariety.from_points([(1, 1), (-1, 1), (2, 1)])
        c = general(V, [[5.0], [-4.0], [0.0]])
        report = convergence_report(V, c, [0.5, 1.0j])
        assert not report.flagged
        assert report.packet_magnitudes[-1] == 0.0

    def test_needs_points(self, ode_c, ode_variety):
        with pytest.raises(ValueError):
            convergence_report(ode_variety, ode_c, [])


class TestNorms:
    def test_general_examples(self, linear):
        origin = MultiplicityVariety.from_points([(0, 1)])
        assert coeff_norm_general(general(origin, [[1.0]]), None, linear, 1.0) == pytest.approx(1.0)
        V = MultiplicityVariety.from_points([(0, 1), (1, 1)])
        assert coeff_norm_general(general(V, [[0.0], [1.0]]), V, linear, 1.0) == pytest.approx(math.e / 2)
        assert coeff_norm_general(ExpansionCoefficients.zeros(Flavor.GENERAL, V), V, linear, 1.0) == 0.0

    def test_interpolating_examples(self, linear):
        origin = MultiplicityVariety.from_points([(0, 1)])
        assert coeff_norm_interpolating(interpolating(origin, [[1.0]]), None, linear, 1.0) == pytest.approx(1.0)
        lattice_point = MultiplicityVariety.from_points([(TWO_PI_I, 1)])
        d = interpolating(lattice_point, [[1.0]])
        assert coeff_norm_interpolating(d, None, linear, 1.0) == pytest.approx(math.exp(2 * math.pi))
        zero = ExpansionCoefficients.zeros(Flavor.INTERPOLATING, lattice_point)
        assert coeff_norm_interpolating(zero, None, linear, 1.0) == 0.0

    def test_prefix_sum_exponent(self, linear):
        V = MultiplicityVariety.from_points([(0, 2), (1, 2)])
        c = general(V, [[0.0, 0.0], [0.0, 1.0]])
        # exponent m_0 + l = 2 + 1
        assert coeff_norm_general(c, V, linear, 1.0) == pytest.approx(math.e / 8)

    def test_flavor_and_scale_checks(self, linear, ode_variety):
        d = interpolating(ode_variety, [[1.0], [1.0]])
        with pytest.raises(ValueError):
            coeff_norm_general(d, None, linear, 1.0)
        with pytest.raises(ValueError):
            coeff_norm_interpolating(d, None, linear, 0.0)

    def test_huge_weights_overflow_to_inf(self, linear):
        far = MultiplicityVariety.from_points([(1000.0, 1)])
        assert coeff_norm_interpolating(interpolating(far, [[1.0]]), None, linear, 1.0) == math.inf

    def test_norm_nondecreasing_in_truncation(self, exp_minus_one, fourier_variety, sin_two_pi, linear):
        c = extract_general(exp_minus_one, fourier_variety, sin_two_pi)
        norms = [coeff_norm_general(ExpansionCoefficients.from_rows(c.flavor, c.variety.prefix(K),
                                                                    c.table.values[:K]), None, linear, 1.0)
                 for K in range(1, c.K + 1)]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(norms, norms[1:]))

    def test_jet_and_divided_difference_norms(self, linear):
        V = MultiplicityVariety.from_points([(0, 2), (1, 1)])
        a = ValueSet.from_rows(V, [[1.0, -1.0], [math.e]])
        assert jet_norm(a, linear, 1.0) == pytest.approx(2.0)
        # |b_{1,0}| (1 + 1)^2 e^{-1} with b_{1,0} = e / 4
        b = ValueSet.from_rows(V, [[0.0, 0.0], [math.e / 4]])
        assert divided_difference_norm(b, linear, 1.0) == pytest.approx(1.0)


class TestNormGrowth:
    def test_settled(self):
        growth = norm_growth({3: 1.0, 6: 1.0})
        assert not growth.diverging
        assert growth.changes == [0.0]

    def test_diverging(self):
        growth = norm_growth([(6, 2.0), (3, 1.0)])
        assert growth.truncations == [3, 6]
        assert growth.diverging
        assert norm_growth({3: 1.0, 6: math.inf}).diverging

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            norm_growth({})

    def test_to_dict(self):
        data = norm_growth({1: 1.0, 2: 1.0}).to_dict()
        assert data['samples'] == [{'K': 1, 'norm': 1.0}, {'K': 2, 'norm': 1.0}]


class TestReports:
    def test_csv_is_deterministic(self, tmp_path, ode_c):
        first = write_csv(tmp_path / "a.csv", ode_c.to_rows())
        second = write_csv(tmp_path / "b.csv", ode_c.to_rows())
        assert first.read_bytes() == second.read_bytes()

    def test_csv_floats_round_trip(self, tmp_path):
        path = write_csv(tmp_path / "out" / "x.csv", [{'k': 0, 'value': 0.1, 'z': 1.5 - 2.0j, 'ok': True}])
        assert path.read_text().splitlines() == ["k,value,z,ok", "0,0.10000000000000001,1.5-2j,1"]
        row = read_csv(path)[0]
        assert float(row['value']) == 0.1

    def test_json_complex_and_infinite(self, tmp_path):
        path = write_json(tmp_path / "r.json", {'d': 0.5 + 1j, 'norm': math.inf, 'values': np.array([1.0, 2.0])})
        data = json.loads(path.read_text())
        assert data == {'d': {'re': 0.5, 'im': 1.0}, 'norm': 'inf', 'values': [1.0, 2.0]}
