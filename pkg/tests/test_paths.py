import networkx as nx
import numpy as np
import pytest

from domain.exceptions import OutOfDepthError, ParameterError
from domain.models import TilingParams
from domain.paths import (
    edge_on_geodesic,
    is_fellow_traveling,
    is_minimal,
    make_path,
    minimal_path,
    path_crossing_profile,
    separating_classes,
    shorten_by_reflection,
    shorten_to_minimal,
    tiling_distance,
)
from domain.tiling import build_tiling, edge_geodesic_classes
from domain.words import path_to_word, word_class, word_to_path


@pytest.fixture(scope="module")
def deep_54():
    """(5,4)-tiling trusted up to tile distance 5"""
    return build_tiling(TilingParams(5, 4), 8)


@pytest.fixture(scope="module")
def deep_45():
    """(4,5)-tiling trusted up to tile distance 5"""
    return build_tiling(TilingParams(4, 5), 9)


def random_pairs(g, count, seed=0):
    trusted = [t for t in range(g.num_tiles) if g.tile_distance[t] <= g.trusted_radius]
    rng = np.random.default_rng(seed)
    return [tuple(int(t) for t in rng.choice(trusted, 2)) for _ in range(count)]


class TestTilingDistance:

    def test_distance_to_base(self, tiling_46):
        g = tiling_46
        for t in g.tiles_at(3)[:10]:
            assert tiling_distance(g, g.base_tile, t) == 3

    def test_distance_is_symmetric(self, tiling_46):
        g = tiling_46
        a, b = g.tiles_at(2)[0], g.tiles_at(3)[-1]
        assert tiling_distance(g, a, b) == tiling_distance(g, b, a)

    def test_distance_beyond_trusted_radius(self, tiling_46):
        g = tiling_46
        with pytest.raises(OutOfDepthError):
            tiling_distance(g, g.base_tile, g.tiles_at(4)[0])

    def test_minimal_path_has_distance_length(self, tiling_46):
        g = tiling_46
        t = g.tiles_at(3)[5]
        path = minimal_path(g, g.base_tile, t)
        assert len(path) == 3
        assert (path.start, path.end) == (g.base_tile, t)

    def test_separating_geodesics_count_distance(self, tiling_46):
        g = tiling_46
        a, b = g.tiles_at(1)[0], g.tiles_at(3)[7]
        assert len(separating_classes(g, a, b)) == tiling_distance(g, a, b)

    def test_distance_counts_separating_geodesics_on_random_pairs(self, deep_54):
        g = deep_54
        pairs = random_pairs(g, 1000)
        assert max(tiling_distance(g, a, b) for a, b in pairs) >= 5
        for a, b in pairs:
            assert len(separating_classes(g, a, b)) == tiling_distance(g, a, b)

    def test_odd_q_distance_is_half_the_separating_zigzags(self, deep_45):
        g = deep_45
        for a, b in random_pairs(g, 1000, seed=1):
            assert len(separating_classes(g, a, b)) == 2 * tiling_distance(g, a, b)


class TestMakePath:

    def test_edges_are_recorded(self, tiling_46):
        g = tiling_46
        n = g.tiles_at(1)[0]
        path = make_path(g, [g.base_tile, n])
        assert len(path.edges) == 1
        assert g.edge_sides[path.edges[0]] in ((g.base_tile, n), (n, g.base_tile))

    def test_non_adjacent_tiles_rejected(self, tiling_46):
        g = tiling_46
        with pytest.raises(ParameterError, match="do not share an edge"):
            make_path(g, [g.base_tile, g.tiles_at(2)[0]])


class TestMinimality:

    def test_short_alternation_is_minimal(self, tiling_46):
        report = is_minimal(word_to_path((1, 2, 1), tiling_46))
        assert report.minimal
        assert report.witness_kind is None
        assert report.length == report.distance == 3

    def test_long_alternation_doubles_a_geodesic(self, tiling_46):
        # four steps around a vertex of six tiles overshoot the opposite tile
        path = word_to_path((1, 2, 1, 2), tiling_46)
        report = is_minimal(path)
        assert not report.minimal
        assert report.length == 4
        assert report.distance == 2
        assert report.witness_kind == "doubled-class"
        assert report.doubled_class in path_crossing_profile(path).doubled

    def test_backtrack_is_not_minimal(self, tiling_46):
        report = is_minimal(word_to_path((3, 3), tiling_46))
        assert not report.minimal
        assert report.distance == 0

    def test_profile_of_minimal_path(self, tiling_46):
        profile = path_crossing_profile(word_to_path((1, 2, 1), tiling_46))
        assert profile.doubled == []
        assert sum(profile.per_class.values()) == 3

    def test_odd_q_profile_counts_both_zigzags(self, tiling_45):
        profile = path_crossing_profile(word_to_path((1, 3), tiling_45))
        assert sum(profile.per_class.values()) == 4

    def test_minimal_paths_cross_no_zigzag_twice(self, deep_45):
        g = deep_45
        for a, b in random_pairs(g, 200, seed=2):
            path = minimal_path(g, a, b)
            assert path_crossing_profile(path).doubled == []
            assert set(path_crossing_profile(path).per_class) == separating_classes(g, a, b)

    @pytest.mark.parametrize("fixture, seed", [("tiling_46", 3), ("deep_54", 4)])
    def test_minimal_paths_between_the_same_tiles_are_word_equivalent(
        self, fixture, seed, request
    ):
        g = request.getfixturevalue(fixture)
        pairs = [(a, b) for a, b in random_pairs(g, 60, seed=seed) if a != b]
        for a, b in pairs:
            routes = [make_path(g, tiles) for tiles in nx.all_shortest_paths(g.dual_graph(), a, b)]
            cls = word_class(path_to_word(routes[0]), g.params)
            for route in routes:
                assert path_to_word(route) in cls


class TestShortening:

    def test_reflection_removes_two_crossings(self, tiling_46):
        path = word_to_path((1, 2, 1, 2), tiling_46)
        doubled = path_crossing_profile(path).doubled[0]
        shorter = shorten_by_reflection(path, doubled)
        assert len(shorter) == 2
        assert shorter.end == path.end

    def test_shorten_to_minimal(self, tiling_46):
        g = tiling_46
        path = word_to_path((1, 2, 1, 2), g)
        result = shorten_to_minimal(path)
        assert len(result) == tiling_distance(g, path.start, path.end)
        assert is_minimal(result).minimal

    def test_class_crossed_once_cannot_be_reflected(self, tiling_46):
        path = word_to_path((1, 2, 1), tiling_46)
        once = next(iter(path_crossing_profile(path).per_class))
        with pytest.raises(ParameterError):
            shorten_by_reflection(path, once)

    def test_reflection_needs_even_q(self, tiling_45):
        path = word_to_path((1, 1), tiling_45)
        with pytest.raises(ParameterError):
            shorten_by_reflection(path, 0)

    def test_shortened_word_drops_crossing_letters(self, tiling_46):
        path = word_to_path((3, 1, 2, 1, 2), tiling_46)
        doubled = path_crossing_profile(path).doubled[0]
        shorter = shorten_by_reflection(path, doubled)
        assert len(path_to_word(shorter)) == 3


class TestFellowTraveling:

    def test_path_along_a_geodesic(self, tiling_46):
        g = tiling_46
        classes = edge_geodesic_classes(g)
        e = g.tile_slots[g.base_tile][0]
        class_id = classes.class_of[e]
        # tiles around one endpoint of e, staying on the base side
        path = word_to_path((2,), g)
        assert edge_on_geodesic(g, g.base_tile, class_id) == e
        assert is_fellow_traveling(path, class_id)

    def test_crossing_path_does_not_fellow_travel(self, tiling_46):
        g = tiling_46
        class_id = edge_geodesic_classes(g).class_of[g.tile_slots[g.base_tile][0]]
        assert not is_fellow_traveling(word_to_path((1,), g), class_id)

    def test_backtracking_path_does_not_fellow_travel(self, tiling_46):
        g = tiling_46
        class_id = edge_geodesic_classes(g).class_of[g.tile_slots[g.base_tile][0]]
        assert not is_fellow_traveling(word_to_path((2, 2), g), class_id)

    def test_unknown_class(self, tiling_46):
        with pytest.raises(ParameterError):
            is_fellow_traveling(word_to_path((2,), tiling_46), -1)
