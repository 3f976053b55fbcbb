import pytest
from fractions import Fraction
from math import acosh, tan, tanh, pi

from domain.exceptions import NumericError, OutOfDepthError, ParameterError
from domain.geometry import (
    census_depth,
    check_appendix_lemmas,
    circumradius,
    complexity_p_n,
    diagonal_census,
    hyperbolic_distance,
    hyperbolic_midpoint,
    realize,
    realize_word_class,
    reflect_across,
    regularity_defects,
    sharp_segment,
    tile_point_segment,
    trace_word,
    vertex_segment,
)
from domain.growth import growth_series, series_coefficients
from domain.models import DiagonalCensus, GeodesicSegment, TilingParams
from domain.tiling import build_tiling
from domain.words import parse_word, word_class

P48 = TilingParams(4, 8)


@pytest.fixture(scope="module")
def disk_46(tiling_46):
    return realize(tiling_46, 4)


@pytest.fixture(scope="module")
def disk_45(tiling_45):
    return realize(tiling_45, 5)


@pytest.fixture(scope="module")
def disk_46_census(tiling_46):
    return realize(tiling_46, census_depth(6, 2))


class TestDiskPrimitives:

    @pytest.mark.parametrize("p,q", [(4, 6), (3, 7), (5, 4), (7, 3)])
    def test_circumradius_closed_form(self, p, q):
        expected = tanh(acosh(1 / (tan(pi / p) * tan(pi / q))) / 2)
        assert circumradius(p, q) == pytest.approx(expected, abs=1e-10)

    def test_distance_from_origin(self):
        assert hyperbolic_distance(0j, tanh(0.5)) == pytest.approx(1.0, abs=1e-12)

    def test_reflection_is_an_involution(self):
        a, b, z = 0.1 + 0.2j, -0.3 + 0.1j, 0.25 - 0.4j
        once = reflect_across(a, b, z)
        assert abs(reflect_across(a, b, once) - z) < 1e-12
        assert abs(reflect_across(a, b, a) - a) < 1e-12

    def test_midpoint_halves_distance(self):
        a, b = 0.1 + 0.2j, -0.5 + 0.3j
        m = hyperbolic_midpoint(a, b)
        assert hyperbolic_distance(a, m) == pytest.approx(hyperbolic_distance(m, b), abs=1e-10)


class TestRealize:

    def test_tile_count(self, disk_46):
        assert len(disk_46.tiles) == 1 + 4 + 12 + 32 + 84

    def test_base_tile_at_origin(self, disk_46):
        assert disk_46.centers[disk_46.graph.base_tile] == 0j

    def test_tiles_are_regular(self, tiling_46):
        angle, length = regularity_defects(realize(tiling_46, 3))
        assert angle < 1e-9
        assert length < 1e-9

    def test_everything_inside_the_disk(self, disk_46):
        assert all(abs(z) < 1 for z in disk_46.vertex_pos.values())

    def test_depth_beyond_tiling(self, tiling_46):
        with pytest.raises(OutOfDepthError):
            realize(tiling_46, tiling_46.depth + 1)

    def test_negative_depth(self, tiling_46):
        with pytest.raises(ParameterError):
            realize(tiling_46, -1)

    @pytest.mark.parametrize("p,q", [(4, 6), (5, 4), (4, 5), (4, 8), (7, 3)])
    def test_realize_at_generated_depth(self, p, q):
        params = TilingParams(p, q)
        g = build_tiling(params, 3)

        r = realize(g)

        assert r.max_depth == 3
        assert len(r.tiles) == sum(series_coefficients(growth_series(params), 3))
        # the outer corners of the last layer are not closed vertices yet
        assert any(v is None for t in r.tiles for v in g.tile_corners[t])

    @pytest.mark.parametrize("p,q", [(4, 6), (5, 4), (4, 8)])
    def test_trace_to_the_last_generated_layer(self, p, q):
        g = build_tiling(TilingParams(p, q), 3)
        r = realize(g)
        base = g.base_tile
        for t in r.tiles_at(3):
            trace = trace_word(r, tile_point_segment(r, base, t), with_distance=False)
            assert trace.path.end == t
            assert trace.cl == 4


class TestTraceWord:

    def test_even_q_crossings_equal_distance(self, disk_46):
        r = disk_46
        base = r.graph.base_tile
        for n in (1, 2, 3):
            for t in r.tiles_at(n):
                trace = trace_word(r, tile_point_segment(r, base, t))
                assert trace.path.start == base
                assert trace.path.end == t
                assert trace.tl == n
                assert trace.cl == trace.tl + 1

    def test_odd_q_crossing_bounds(self, disk_45):
        r = disk_45
        q = r.q
        base = r.graph.base_tile
        for n in (1, 2, 3):
            for t in r.tiles_at(n):
                trace = trace_word(r, tile_point_segment(r, base, t))
                assert trace.tl + 1 <= trace.cl
                assert trace.cl <= (q + 1) / (q - 1) * trace.tl + 1

    def test_word_matches_path(self, disk_46):
        r = disk_46
        t = r.tiles_at(2)[3]
        trace = trace_word(r, tile_point_segment(r, r.graph.base_tile, t), with_distance=False)
        assert trace.tl is None
        assert len(trace.word) == trace.cl - 1

    def test_segment_along_an_edge(self, disk_46):
        g = disk_46.graph
        a, b = g.edge_ends[g.tile_slots[g.base_tile][0]]
        with pytest.raises(ParameterError, match="along an edge"):
            trace_word(disk_46, vertex_segment(disk_46, a, b))

    def test_endpoint_on_an_edge(self, disk_46):
        w = disk_46.corners[disk_46.graph.base_tile]
        start = hyperbolic_midpoint(w[0], w[1])
        end = disk_46.centers[disk_46.tiles_at(2)[0]]
        with pytest.raises(ParameterError):
            trace_word(disk_46, GeodesicSegment(start, end), with_distance=False)

    def test_segment_leaving_the_realization(self, tiling_46):
        r = realize(tiling_46, 1)
        with pytest.raises(OutOfDepthError):
            trace_word(r, GeodesicSegment(0j, 0.55 + 0.71j), with_distance=False)

    def test_crossing_cap(self, disk_46):
        r = disk_46
        t = r.tiles_at(3)[0]
        segment = tile_point_segment(r, r.graph.base_tile, t)
        assert trace_word(r, segment, with_distance=False, max_crossings=1) is None


class TestSharpSegment:

    def test_sharp_configuration_45(self, tiling_45):
        r = realize(tiling_45, 3)
        segment = sharp_segment(r)
        ccw = trace_word(r, segment)
        cw = trace_word(r, segment, clockwise=True)
        q = r.q
        # one nudge side passes (q+1)/2 edges, the other (q-1)/2
        assert sorted([ccw.cl, cw.cl]) == [(q - 1) // 2 + 1, (q + 1) // 2 + 1]
        assert ccw.tl == cw.tl == (q - 1) // 2

    def test_needs_odd_q(self, disk_46):
        with pytest.raises(ParameterError):
            sharp_segment(disk_46)


class TestClassRealization:

    def test_admissible_class_is_realized(self, tiling_48):
        r = realize(tiling_48, 4)
        cls = word_class((1, 2, 1, 2), P48)
        result = realize_word_class(r, cls)
        assert not result.refuted
        assert result.trace.word in cls
        assert result.attempts >= 1

    def test_inadmissible_class_is_refuted(self, tiling_48):
        r = realize(tiling_48, 2)
        result = realize_word_class(r, word_class(parse_word("12124141", 4), P48))
        assert result.refuted
        assert result.segment is None

    def test_needs_even_q(self, disk_45):
        with pytest.raises(ParameterError):
            realize_word_class(disk_45, word_class((1, 2), P48))


class TestDiagonalCensus:

    def test_census_46(self, disk_46_census):
        census = diagonal_census(disk_46_census, 2)
        p, q = 4, 6
        assert census.edges_skipped == q
        assert census.n_cl[1] == q * (p - 3)
        assert census.gd[0] == p
        assert census.gd[1] == Fraction(p * (p - 3), 2)
        assert set(census.n_cl) == {1, 2}

    def test_census_45(self, disk_45):
        census = diagonal_census(disk_45, 1)
        p, q = 4, 5
        assert census.edges_skipped == q
        assert census.n_cl[1] == q * (p - 3)
        assert census.gd[1] == Fraction(p * (p - 3), 2)

    def test_depth_covers_the_end_vertex_ring(self):
        assert census_depth(6, 2) == 3 + 1 + 3
        assert census_depth(5, 1) == 2 + 0 + 3

    def test_census_needs_depth(self, tiling_46):
        # cl=2 ends a tile beyond the start ring; its vertex ring needs 3 more layers
        with pytest.raises(OutOfDepthError, match="depth >= 7"):
            diagonal_census(realize(tiling_46, 6), 2)

    def test_census_at_generated_depth(self):
        g = build_tiling(TilingParams(4, 6), census_depth(6, 1))
        census = diagonal_census(realize(g), 1)
        assert census.n_cl[1] == 6
        assert census.edges_skipped == 6

    def test_k_max_positive(self, disk_46):
        with pytest.raises(ParameterError):
            diagonal_census(disk_46, 0)


class TestComplexityFromCensus:

    def setup_method(self):
        self.census = DiagonalCensus(
            p=4, q=6, k_max=4,
            n_cl={}, n_cl_prim={},
            gd={0: Fraction(4), 1: Fraction(2), 2: Fraction(3), 3: Fraction(5), 4: Fraction(7)},
        )

    def test_linear_part(self):
        assert complexity_p_n(self.census, 4, 12, 2) == 2 * 4 + 2 * 8

    def test_double_sum(self):
        # gd(3) for k=3, gd(3)+gd(4) for k=4
        assert complexity_p_n(self.census, 4, 12, 4) == 8 + 32 + 5 + 12

    def test_beyond_census(self):
        with pytest.raises(OutOfDepthError):
            complexity_p_n(self.census, 4, 12, 5)

    def test_non_integer_gd(self):
        self.census.gd[3] = Fraction(7, 2)
        with pytest.raises(NumericError):
            complexity_p_n(self.census, 4, 12, 3)

    def test_n_positive(self):
        with pytest.raises(ParameterError):
            complexity_p_n(self.census, 4, 12, 0)


class TestAppendixLemmas:

    def test_even_q_edge_geodesics_do_not_meet(self, tiling_48):
        report = check_appendix_lemmas(realize(tiling_48, 2))
        assert report.chord_intersections == 0
        assert report.chord_pairs_checked == 2 * len(realize(tiling_48, 2).tiles)
        assert report.passed

    @pytest.mark.parametrize("fixture", ["tiling_46", "tiling_48", "tiling_54"])
    def test_sampled_edge_geodesics_cut_no_tile(self, fixture, request):
        r = realize(request.getfixturevalue(fixture), 4)
        report = check_appendix_lemmas(r, samples=150, seed=2)
        assert report.geodesics_checked > 0
        assert report.max_line_deviation < 1e-8
        assert report.tiles_cut == 0
        assert report.passed

    def test_sample_size_caps_checked_geodesics(self, tiling_46):
        report = check_appendix_lemmas(realize(tiling_46, 4), samples=5)
        assert report.geodesics_checked == 5

    def test_odd_q_zigzag_lemmas(self, disk_45):
        report = check_appendix_lemmas(disk_45, samples=50, seed=1)
        assert report.windows_checked > 0
        assert report.max_midpoint_deviation < 1e-8
        assert report.consecutive_misses == 0
        assert report.passed
