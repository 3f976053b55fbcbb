import pytest
from collections import Counter
from itertools import product

from domain.exceptions import OutOfDepthError, ParameterError
from domain.growth import growth_series, series_coefficients
from domain.models import Frame, TilingParams
from domain.words import path_to_word, word_to_path
from domain.tiling import (
    Layering,
    TilingGraph,
    build_tiling,
    edge_geodesic_classes,
    frame_of,
    has_double_minimum,
    label_edges,
    matches_distance_pattern,
    separation_signatures,
    stage_valence,
    tile_distance_pattern,
    tile_kind,
    tiles_at_distance,
    vertex_tile_map,
    zigzag_classes,
)


class TestTilingParams:

    def test_hyperbolic_pairs_accepted(self):
        params = TilingParams(4, 5)
        assert params.q_even is False
        assert str(params) == "(4,5)"

    @pytest.mark.parametrize("p,q", [(4, 4), (3, 6), (6, 3), (2, 9), (5, 2)])
    def test_non_hyperbolic_pairs_rejected(self, p, q):
        with pytest.raises(ParameterError):
            TilingParams(p, q)

    def test_parameter_error_is_value_error(self):
        with pytest.raises(ValueError):
            TilingParams(3, 3)


class TestFrame:

    def test_identity_frame_labels(self):
        frame = Frame(0, 1)
        assert [frame.label(s, 5) for s in range(5)] == [1, 2, 3, 4, 5]

    def test_slot_of_inverts_label(self):
        frame = Frame(3, -1)
        for s in range(6):
            assert frame.slot_of(frame.label(s, 6), 6) == s

    def test_reflect_flips_orientation(self):
        frame = Frame(0, 1)
        reflected = frame.reflect(1, 3, 4)
        assert reflected.sign == -1
        # the shared edge keeps its label on both sides
        assert reflected.label(3, 4) == frame.label(1, 4)


class TestBuildTiling:

    def test_depth_zero_is_base_tile(self):
        g = build_tiling(TilingParams(4, 6), 0)
        assert g.num_tiles == 1
        assert g.tile_distance == (0,)

    def test_negative_depth_rejected(self):
        with pytest.raises(ParameterError):
            build_tiling(TilingParams(4, 6), -1)

    def test_layer_counts_46(self, tiling_46):
        assert [tiles_at_distance(tiling_46, n) for n in range(4)] == [1, 4, 12, 32]

    def test_layer_counts_54(self, tiling_54):
        assert [tiles_at_distance(tiling_54, n) for n in range(4)] == [1, 5, 15, 40]

    def test_layer_beyond_depth(self, tiling_46):
        with pytest.raises(OutOfDepthError):
            tiles_at_distance(tiling_46, tiling_46.depth + 1)

    def test_negative_layer_rejected(self, tiling_46):
        with pytest.raises(ParameterError):
            tiles_at_distance(tiling_46, -1)

    def test_inner_tiles_have_p_neighbors(self, tiling_46):
        g = tiling_46
        for t in range(g.num_tiles):
            if g.tile_distance[t] < g.depth:
                assert g.is_tile_complete(t)
                neighbors = {g.tile_neighbor(t, s)[0] for s in range(g.p)}
                assert len(neighbors) == g.p

    def test_neighbor_slots_are_symmetric(self, tiling_45):
        g = tiling_45
        for t in g.tiles_at(2):
            for s in range(g.p):
                n, j = g.tile_neighbor(t, s)
                assert g.tile_neighbor(n, j) == (t, s)

    def test_complete_vertices_have_q_tiles(self, tiling_54):
        g = tiling_54
        complete = [v for v in range(g.num_vertices) if g.is_vertex_complete(v)]
        assert complete
        for v in complete:
            tiles = [t for t in g.vertex_tiles[v] if t is not None]
            assert len(set(tiles)) == g.q

    def test_seeded_build_has_same_layers(self):
        params = TilingParams(4, 6)
        plain = build_tiling(params, 4)
        shuffled = build_tiling(params, 4, seed=3)
        assert Counter(plain.tile_distance) == Counter(shuffled.tile_distance)

    def test_vertex_layering_agrees_inside_trusted_radius(self):
        params = TilingParams(4, 6)
        g = build_tiling(params, 6, layering=Layering.VERTICES)
        assert g.layering is Layering.VERTICES
        expected = series_coefficients(growth_series(params), 6)
        for n in range(g.trusted_radius + 1):
            assert tiles_at_distance(g, n) == expected[n]

    def test_dual_graph_matches_adjacency(self, tiling_46):
        g = tiling_46
        dual = g.dual_graph()
        assert dual.number_of_nodes() == g.num_tiles
        for t in g.tiles_at(1):
            assert dual.has_edge(g.base_tile, t)


class TestTrustedRegion:

    def test_trusted_radius(self, tiling_46):
        # frontier 7, minus one, minus ceil(q/2)
        assert tiling_46.trusted_radius == 3

    def test_require_trusted_rejects_far_tiles(self, tiling_46):
        far = tiling_46.tiles_at(5)[0]
        with pytest.raises(OutOfDepthError, match="trusted radius"):
            tiling_46.require_trusted(far)

    def test_require_trusted_rejects_unknown_tiles(self, tiling_46):
        with pytest.raises(OutOfDepthError):
            tiling_46.require_trusted(tiling_46.num_tiles)


class TestEdgeLabels:

    def test_base_tile_labels(self, tiling_48):
        g = tiling_48
        labeling = label_edges(g)
        assert [labeling.label[e] for e in g.tile_slots[g.base_tile]] == [1, 2, 3, 4]

    def test_every_tile_sees_each_label_once(self, tiling_48):
        g = tiling_48
        labeling = label_edges(g)
        for t in range(g.num_tiles):
            if g.is_tile_complete(t):
                assert sorted(labeling.label[e] for e in g.tile_slots[t]) == [1, 2, 3, 4]

    def test_custom_base_labels(self, tiling_48):
        g = tiling_48
        labeling = label_edges(g, (2, 3, 4, 1))
        assert labeling.label[g.tile_slots[g.base_tile][0]] == 2

    @pytest.mark.parametrize("seed", [1, 7, 42])
    def test_labeling_does_not_depend_on_expansion_order(self, seed):
        params = TilingParams(4, 8)
        plain = build_tiling(params, 4)
        shuffled = build_tiling(params, 4, seed=seed)
        labels = label_edges(shuffled)
        words = [w for n in range(1, 5) for w in product(range(1, 5), repeat=n)]
        for word in words:
            a, b = word_to_path(word, plain), word_to_path(word, shuffled)
            assert plain.tile_distance[a.end] == shuffled.tile_distance[b.end]
            assert path_to_word(b, labels) == word
        # four letters around a vertex of eight tiles reach the opposite tile
        assert shuffled.tile_distance[word_to_path((1, 2, 1, 2), shuffled).end] == 4

    def test_non_cyclic_base_labels_rejected(self, tiling_48):
        with pytest.raises(ParameterError):
            label_edges(tiling_48, (1, 3, 2, 4))

    def test_odd_q_has_no_global_labeling(self, tiling_45):
        with pytest.raises(ParameterError):
            label_edges(tiling_45)

    def test_frame_of_base_tile(self, tiling_48):
        assert frame_of(tiling_48, tiling_48.base_tile) == Frame(0, 1)

    def test_frame_of_needs_even_q(self, tiling_45):
        with pytest.raises(ParameterError):
            frame_of(tiling_45, tiling_45.base_tile)


class TestEdgeClasses:

    def test_opposite_edges_share_a_geodesic(self, tiling_46):
        g = tiling_46
        classes = edge_geodesic_classes(g)
        half = g.q // 2
        for v in range(g.num_vertices):
            if g.is_vertex_complete(v):
                slots = g.vertex_slots[v]
                for i in range(half):
                    assert classes.class_of[slots[i]] == classes.class_of[slots[i + half]]

    def test_separating_geodesics_count_distance(self, tiling_46):
        g = tiling_46
        sig = separation_signatures(g)
        for t in range(g.num_tiles):
            if g.tile_distance[t] <= g.trusted_radius:
                assert len(sig[t]) == g.tile_distance[t]

    def test_zigzags_through_an_edge_differ(self, tiling_45):
        zig = zigzag_classes(tiling_45)
        for left, right in zig.zigzags_of.values():
            assert left != right

    def test_zigzags_need_odd_q(self, tiling_46):
        with pytest.raises(ParameterError):
            zigzag_classes(tiling_46)

    def test_edge_geodesics_need_even_q(self, tiling_45):
        with pytest.raises(ParameterError):
            edge_geodesic_classes(tiling_45)


class TestDistancePatterns:

    def test_patterns(self):
        assert matches_distance_pattern([0, 1, 2, 2, 1])
        assert matches_distance_pattern([0, 0, 1, 2, 1])
        assert matches_distance_pattern([3, 4, 5, 4])
        assert not matches_distance_pattern([0, 1, 2, 3, 1])
        assert has_double_minimum([2, 2, 3])
        assert not has_double_minimum([2, 3, 3])

    def test_inner_tiles_match(self, tiling_46):
        g = tiling_46
        for t in [g.base_tile] + g.tiles_at(1):
            assert matches_distance_pattern(tile_distance_pattern(g, t))

    def test_base_tile_kind(self, tiling_54):
        assert tile_kind(tiling_54, tiling_54.base_tile) == "edge"

    def test_tile_kind_needs_odd_p(self, tiling_46):
        with pytest.raises(ParameterError):
            tile_kind(tiling_46, tiling_46.base_tile)

    def test_phi_fibers_are_bounded(self, tiling_46):
        phi = vertex_tile_map(tiling_46)
        assert phi.kind == "phi"
        assert max(len(f) for f in phi.fibers().values()) <= phi.fiber_bound


class TestGraphDocument:

    def test_document_restores_graph(self):
        g = build_tiling(TilingParams(5, 4), 3)
        doc = g.to_document()
        assert doc["schema"] == 1
        assert "labels" in doc
        restored = TilingGraph.from_document(doc)
        assert restored.params == g.params
        assert restored.tile_slots == g.tile_slots
        assert restored.vertex_tiles == g.vertex_tiles
        assert restored.base_tile == g.base_tile

    def test_odd_q_document_has_zigzags(self):
        doc = build_tiling(TilingParams(4, 5), 2).to_document()
        assert "zigzags" in doc

    def test_unknown_schema_rejected(self):
        doc = build_tiling(TilingParams(4, 6), 1).to_document()
        doc["schema"] = 99
        with pytest.raises(ParameterError):
            TilingGraph.from_document(doc)


class TestStageValence:

    @pytest.mark.parametrize("p,q,allowed", [(4, 6, {1, 2}), (5, 4, {1, 2}), (3, 8, {3, 4})])
    def test_new_vertices_have_small_valence(self, p, q, allowed):
        g = build_tiling(TilingParams(p, q), 3, layering=Layering.VERTICES)
        for v in range(g.num_vertices):
            if 1 <= g.vertex_distance[v] <= g.depth:
                assert stage_valence(g, v) in allowed
