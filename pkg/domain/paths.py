"""
Tiling paths: distance, minimality, separating classes and the reflection
shortening used to turn a path into a minimal one.
"""
from collections import Counter
from typing import FrozenSet, List, Optional

import networkx as nx

from .exceptions import OutOfDepthError, ParameterError
from .models import CrossingProfile, MinimalityReport, TilingPath
from .tiling import (
    TilingGraph,
    crossed_classes,
    edge_geodesic_classes,
    separation_signatures,
)
from .words import path_to_word, word_to_path


def make_path(g: TilingGraph, tiles: List[int]) -> TilingPath:
    """
    Path through the given tiles, recording the shared edges.

    Raises:
        ParameterError: If two consecutive tiles are not edge-adjacent
    """
    dual = g.dual_graph()
    edges = []
    for a, b in zip(tiles, tiles[1:]):
        if not dual.has_edge(a, b):
            raise ParameterError(f"tiles {a} and {b} do not share an edge")
        edges.append(dual.edges[a, b]["edge"])
    return TilingPath(tuple(tiles), tuple(edges), g)


def tiling_distance(g: TilingGraph, a: int, b: int) -> int:
    """
    Length of a minimal tiling path between two tiles.

    Raises:
        OutOfDepthError: If either tile lies outside the trusted region
    """
    g.require_trusted(a, b)
    return nx.shortest_path_length(g.dual_graph(), a, b)


def minimal_path(g: TilingGraph, a: int, b: int) -> TilingPath:
    """One breadth-first minimal path from a to b"""
    g.require_trusted(a, b)
    return make_path(g, nx.shortest_path(g.dual_graph(), a, b))


def path_crossing_profile(path: TilingPath) -> CrossingProfile:
    """Crossings per edge geodesic (even q) or zigzag (odd q) along the path"""
    counts: Counter = Counter()
    for e in path.edges:
        counts.update(crossed_classes(path.graph, e))
    return CrossingProfile(dict(counts))


def separating_classes(g: TilingGraph, a: int, b: int) -> FrozenSet[int]:
    """
    Classes with a and b on opposite sides.

    Raises:
        OutOfDepthError: If a tile is outside the trusted region or the side
            assignment is ambiguous there
    """
    g.require_trusted(a, b)
    sig = separation_signatures(g)
    return sig[a] ^ sig[b]


def is_minimal(path: TilingPath) -> MinimalityReport:
    """
    Decide minimality against the tiling distance of the endpoints.

    A non-minimal path comes with a witness: a class it crosses twice, or
    else a shorter path between the same tiles.
    """
    g = path.graph
    distance = tiling_distance(g, path.start, path.end)
    length = len(path)
    if length == distance:
        return MinimalityReport(True, length, distance)
    doubled = None
    seen = set()
    for e in path.edges:
        for c in crossed_classes(g, e):
            if c in seen:
                doubled = c
                break
            seen.add(c)
        if doubled is not None:
            break
    if doubled is not None:
        return MinimalityReport(False, length, distance, doubled_class=doubled)
    return MinimalityReport(
        False, length, distance, shortcut=minimal_path(g, path.start, path.end)
    )


def _crossing_positions(path: TilingPath, class_id: int) -> List[int]:
    return [i for i, e in enumerate(path.edges) if class_id in crossed_classes(path.graph, e)]


def shorten_by_reflection(path: TilingPath, class_id: int) -> TilingPath:
    """
    Remove two crossings of an edge geodesic by reflecting the part between them.

    Reflecting the subpath between consecutive crossings of the geodesic
    keeps every letter except the two crossing letters, so the shorter path
    is rebuilt from the remaining word.

    Raises:
        ParameterError: If q is odd or the path does not cross the class twice
        OutOfDepthError: If the rebuilt path leaves the generated region
    """
    g = path.graph
    if not g.params.q_even:
        raise ParameterError("reflection shortening is defined for even q only")
    positions = _crossing_positions(path, class_id)
    if len(positions) < 2:
        raise ParameterError(f"path does not cross class {class_id} twice")
    first, second = positions[0], positions[1]
    word = path_to_word(path)
    shorter = tuple(w for i, w in enumerate(word) if i not in (first, second))
    result = word_to_path(shorter, g, base=path.start)
    if result.end != path.end:
        raise OutOfDepthError("reflected path does not close up inside the generated region")
    return result


def shorten_to_minimal(path: TilingPath) -> TilingPath:
    """Apply reflection shortening until no edge geodesic is crossed twice"""
    current = path
    while True:
        doubled = path_crossing_profile(current).doubled
        if not doubled:
            return current
        current = shorten_by_reflection(current, doubled[0])


def is_fellow_traveling(path: TilingPath, class_id: int) -> bool:
    """
    True when the path never backtracks, stays on one side of the edge
    geodesic and every tile touches a vertex of it (even q).
    """
    g = path.graph
    if not g.params.q_even:
        raise ParameterError("fellow traveling is defined for even q only")
    classes = edge_geodesic_classes(g)
    if class_id not in classes.chains:
        raise ParameterError(f"unknown edge geodesic {class_id}")
    for a, _, c in zip(path.tiles, path.tiles[1:], path.tiles[2:]):
        if a == c:
            return False
    g.require_trusted(*path.tiles)
    sig = separation_signatures(g)
    sides = {class_id in sig[t] for t in path.tiles}
    if len(sides) > 1:
        return False
    on_geodesic = classes.vertices_of(g, class_id)
    return all(on_geodesic.intersection(g.tile_vertices(t)) for t in path.tiles)


def edge_on_geodesic(g: TilingGraph, t: int, class_id: int) -> Optional[int]:
    """Edge of tile t lying on the given edge geodesic, if any"""
    classes = edge_geodesic_classes(g)
    for e in g.tile_slots[t]:
        if e is not None and classes.class_of.get(e) == class_id:
            return e
    return None
