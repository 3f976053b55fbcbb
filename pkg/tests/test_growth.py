import pytest
import sympy

from domain.exceptions import OutOfDepthError, ParameterError
from domain.growth import (
    SURFACE_KINDS,
    growth_series,
    series_coefficients,
    simulate_vertex_types,
    surface_growth_series,
    tiling_growth_rate,
    type_counts,
    type_matrix,
    type_matrix_spectral_radius,
)
from domain.models import RationalSeries, TilingParams
from domain.tiling import Layering, build_tiling, tiles_at_distance


class TestGrowthSeries:

    def test_even_q_closed_form(self):
        series = growth_series(TilingParams(4, 6))
        assert series.numerator == (1, 2, 2, 1)
        assert series.denominator == (1, -2, -2, 1)

    def test_odd_q_closed_form(self):
        series = growth_series(TilingParams(4, 5))
        assert series.numerator == (1, 2, 4, 2, 1)
        assert series.denominator == (1, -2, 0, -2, 1)

    @pytest.mark.parametrize("p,q,expected", [
        (4, 6, [1, 4, 12, 32]),
        (4, 5, [1, 4, 12, 28, 64]),
        (7, 3, [1, 7, 21, 56]),
    ])
    def test_coefficients(self, p, q, expected):
        series = growth_series(TilingParams(p, q))
        assert series_coefficients(series, len(expected) - 1) == expected

    def test_zero_terms(self):
        assert series_coefficients(growth_series(TilingParams(5, 5)), 0) == [1]

    def test_negative_terms_rejected(self):
        with pytest.raises(ParameterError):
            series_coefficients(growth_series(TilingParams(4, 6)), -1)

    def test_denominator_must_start_with_one(self):
        with pytest.raises(ValueError):
            RationalSeries((1,), (2, 1))

    @pytest.mark.parametrize("p,q", [
        (3, 7), (3, 8), (4, 5), (4, 6), (5, 4), (5, 5), (6, 4), (7, 3), (8, 3),
    ])
    def test_series_matches_generated_tiling(self, p, q):
        params = TilingParams(p, q)
        g = build_tiling(params, 4)
        expected = series_coefficients(growth_series(params), 4)
        assert [tiles_at_distance(g, n) for n in range(5)] == expected


class TestSurfaceSeries:

    def test_4n_gon_is_square_tiling(self):
        assert surface_growth_series(2, "4n-gon") == growth_series(TilingParams(8, 8))

    def test_4n_plus_2_gon(self):
        assert surface_growth_series(2, "4n+2-gon") == growth_series(TilingParams(10, 5))

    def test_kinds(self):
        assert SURFACE_KINDS == ("4n-gon", "4n+2-gon")

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            surface_growth_series(2, "hexagon")

    def test_non_hyperbolic_surface(self):
        # (4,4) is Euclidean
        with pytest.raises(ParameterError):
            surface_growth_series(1, "4n-gon")


class TestGrowthRate:

    @pytest.mark.parametrize("p,q,alpha", [
        (4, 6, 2.61803398874989),
        (3, 8, 1.72208380573904),
        (5, 6, 3.73205080756888),
        (8, 8, 6.97983577921557),
        (3, 7, 1.55603019132268),
        (7, 3, 2.61803398874989),
    ])
    def test_known_rates(self, p, q, alpha):
        rate = tiling_growth_rate(TilingParams(p, q))
        assert rate.alpha == pytest.approx(alpha, abs=1e-12)
        assert rate.precision <= 1e-12

    @pytest.mark.parametrize("p,q", [(4, 6), (3, 7), (3, 8), (4, 5), (7, 3), (8, 8)])
    def test_coefficient_ratio_tends_to_rate(self, p, q):
        params = TilingParams(p, q)
        coeffs = series_coefficients(growth_series(params), 41)
        assert abs(coeffs[41] / coeffs[40] - tiling_growth_rate(params).alpha) < 1e-6

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ParameterError):
            tiling_growth_rate(TilingParams(4, 6), tol=0.0)


class TestTypeMatrix:

    def test_characteristic_polynomial_46(self):
        lam = sympy.Symbol("lam")
        poly = type_matrix(TilingParams(4, 6)).charpoly(lam).as_expr()
        assert sympy.expand(poly - (lam**3 - 2 * lam**2 - 2 * lam + 1)) == 0

    def test_type_counts_45(self):
        params = TilingParams(4, 5)
        assert type_counts(params, 1) == (4, 0, 0, 0)
        assert type_counts(params, 2) == (4, 8, 0, 0)
        assert type_counts(params, 3) == (4, 16, 8, 0)
        assert type_counts(params, 4) == (12, 32, 16, 4)

    def test_type_counts_sum_to_layers(self):
        params = TilingParams(4, 6)
        expected = series_coefficients(growth_series(params), 6)
        for n in range(1, 7):
            assert sum(type_counts(params, n)) == expected[n]

    def test_type_counts_start_at_one(self):
        with pytest.raises(ParameterError):
            type_counts(TilingParams(4, 6), 0)

    @pytest.mark.parametrize("p,q", [(4, 6), (5, 4), (4, 5), (6, 6)])
    def test_spectral_radius_is_growth_rate(self, p, q):
        params = TilingParams(p, q)
        radius = type_matrix_spectral_radius(params)
        assert radius == pytest.approx(tiling_growth_rate(params).alpha, abs=1e-9)


class TestSimulatedTypes:

    def test_types_46(self, tiling_46):
        assert simulate_vertex_types(tiling_46, 1) == (4, 0, 0)
        assert simulate_vertex_types(tiling_46, 2) == (4, 8, 0)
        assert simulate_vertex_types(tiling_46, 3) == (12, 16, 4)

    def test_simulation_agrees_with_matrix(self, tiling_46):
        params = tiling_46.params
        for n in range(1, 5):
            assert simulate_vertex_types(tiling_46, n) == type_counts(params, n)

    def test_needs_depth(self, tiling_46):
        with pytest.raises(OutOfDepthError):
            simulate_vertex_types(tiling_46, 5)

    def test_needs_tile_layering(self):
        g = build_tiling(TilingParams(4, 6), 3, layering=Layering.VERTICES)
        with pytest.raises(ParameterError):
            simulate_vertex_types(g, 1)
