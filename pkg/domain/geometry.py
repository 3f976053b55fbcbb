"""
Poincare-disk realization of a generated tiling.

The base tile is centred at the origin and every other tile is placed by
reflecting a realized neighbour across their shared edge. Segments are traced
by moving their start to the origin and their end onto the positive real
axis; in the Klein model the segment and all tile edges are then straight,
so crossings reduce to line intersections.

Vertex hits are resolved by the counter-clockwise nudge: the traced line is
shifted a tiny distance to the right of the direction of travel, so it passes
every vertex it hits on the clockwise side of the vertex, through the tiles a
small counter-clockwise half-circle around the vertex would visit.
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import atanh, ceil, cos, pi, sin, tanh
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .exceptions import (
    NumericError,
    OutOfDepthError,
    ParameterError,
    PrecisionError,
)
from .models import DiagonalCensus, GeodesicSegment, TilingPath, Word, WordClass
from .paths import tiling_distance
from .tiling import TilingGraph, edge_geodesic_classes, zigzag_classes
from .words import path_to_word, word_to_path

INCIDENCE_EPS = 1e-9
DEDUP_EPS = 1e-12
NUDGE = 1e-9
VERTEX_HIT = 1e-10
AMBIGUOUS = 1e-7
ANGLE_SNAP = 1e-9
ANGLE_AMBIGUOUS = 1e-6
ENDPOINT_CLEARANCE = 1e-7
TWO_PI = 2 * pi


def to_origin(v: complex, z):
    """Disk isometry sending v to 0"""
    return (z - v) / (1 - np.conj(v) * z)


def from_origin(v: complex, w):
    """Inverse of to_origin"""
    return (w + v) / (1 + np.conj(v) * w)


def to_klein(z):
    return 2 * z / (1 + np.abs(z) ** 2)


def reflect_across(a: complex, b: complex, z):
    """Reflection in the geodesic through a and b"""
    w = to_origin(a, b)
    rot = (w / abs(w)) ** 2
    return from_origin(a, rot * np.conj(to_origin(a, z)))


def hyperbolic_distance(a: complex, b: complex) -> float:
    return 2 * atanh(min(abs(to_origin(a, b)), 1 - 1e-16))


def hyperbolic_midpoint(a: complex, b: complex) -> complex:
    w = to_origin(a, b)
    r = abs(w)
    return complex(from_origin(a, w / r * tanh(atanh(r) / 2)))


def _corner_angle(v: complex, before: complex, after: complex) -> float:
    """Interior angle at v between the geodesics to before and after"""
    u1 = to_origin(v, before)
    u2 = to_origin(v, after)
    return abs(float(np.angle(u2 / u1)))


def _base_corners(p: int, r: float) -> np.ndarray:
    s = np.arange(p)
    return r * np.exp(1j * (TWO_PI * s / p + pi / p))


def circumradius(p: int, q: int) -> float:
    """Euclidean disk radius of the corners of a regular p-gon with angles 2pi/q"""

    def excess(r: float) -> float:
        w = _base_corners(p, r)
        return _corner_angle(w[0], w[p - 1], w[1]) - TWO_PI / q

    try:
        return brentq(excess, 1e-6, 1 - 1e-12, xtol=1e-15, maxiter=500)
    except (ValueError, RuntimeError) as e:
        raise NumericError(f"no circumradius for ({p},{q}): {e}") from e


@dataclass
class DiskRealization:
    """
    Floating-point placement of the tiles up to max_depth.

    corners[t][s] is the position of g.tile_corners[t][s]; edge slot s of a
    tile runs from corner s-1 to corner s. Frontier corners whose vertex the
    truncation has not closed yet still get a point, with id -1.
    """
    graph: TilingGraph
    max_depth: int
    radius: float
    inradius: float
    edge_length: float
    corners: Dict[int, np.ndarray] = field(repr=False)
    centers: Dict[int, complex] = field(repr=False)
    vertex_pos: Dict[int, complex] = field(repr=False)
    eps: float = INCIDENCE_EPS

    def __post_init__(self) -> None:
        self.tiles = sorted(self.centers)
        ids = sorted(self.vertex_pos)
        index = {v: i for i, v in enumerate(ids)}
        points = [self.vertex_pos[v] for v in ids]
        self._tile_corner_index: Dict[int, np.ndarray] = {}
        for t in self.tiles:
            row = []
            for s, v in enumerate(self.graph.tile_corners[t]):
                if v is None:
                    row.append(len(points))
                    points.append(complex(self.corners[t][s]))
                else:
                    row.append(index[v])
            self._tile_corner_index[t] = np.array(row, dtype=int)
        self._point_ids = np.array(ids + [-1] * (len(points) - len(ids)), dtype=int)
        self._points = np.array(points, dtype=complex)
        centers = np.array([self.centers[t] for t in self.tiles])
        self._center_tree = cKDTree(np.column_stack([centers.real, centers.imag]))

    @property
    def p(self) -> int:
        return self.graph.p

    @property
    def q(self) -> int:
        return self.graph.q

    def is_realized(self, t: int) -> bool:
        return t in self.centers

    def tiles_at(self, n: int) -> List[int]:
        return [t for t in self.tiles if self.graph.tile_distance[t] == n]

    def vertex_complete(self, v: int) -> bool:
        return all(t is not None and t in self.centers for t in self.graph.vertex_tiles[v])


def realize(
    g: TilingGraph, max_depth: Optional[int] = None, eps: float = INCIDENCE_EPS
) -> DiskRealization:
    """
    Place every tile of tile distance <= max_depth in the Poincare disk.

    Raises:
        OutOfDepthError: If max_depth exceeds the generated depth
        PrecisionError: If two tiles land on the same spot or a shared
            vertex receives two positions further apart than eps
    """
    depth = g.depth if max_depth is None else max_depth
    if depth < 0:
        raise ParameterError(f"realization depth must be >= 0, got {depth}")
    if depth > g.depth:
        raise OutOfDepthError(f"cannot realize depth {depth} of a depth-{g.depth} tiling")
    p, q = g.p, g.q
    r = circumradius(p, q)
    base = _base_corners(p, r)
    corners: Dict[int, np.ndarray] = {g.base_tile: base}
    centers: Dict[int, complex] = {g.base_tile: 0j}
    queue = deque([g.base_tile])
    while queue:
        t = queue.popleft()
        w = corners[t]
        for s in range(p):
            nb = g.tile_neighbor(t, s)
            if nb is None:
                continue
            n, j = nb
            if n in corners or g.tile_distance[n] > depth:
                continue
            a, b = w[(s - 1) % p], w[s]
            placed = np.empty(p, dtype=complex)
            for m in range(p):
                placed[(j - 1 - m) % p] = reflect_across(a, b, w[(s + m) % p])
            corners[n] = placed
            centers[n] = complex(reflect_across(a, b, centers[t]))
            queue.append(n)

    vertex_pos: Dict[int, complex] = {}
    for t, w in corners.items():
        for s, v in enumerate(g.tile_corners[t]):
            if v is None:
                continue
            if v in vertex_pos and abs(vertex_pos[v] - w[s]) > eps:
                raise PrecisionError(
                    f"vertex {v} placed {abs(vertex_pos[v] - w[s]):.3g} apart by two tiles"
                )
            vertex_pos.setdefault(v, complex(w[s]))

    pts = np.array([centers[t] for t in sorted(centers)])
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    if tree.query_pairs(DEDUP_EPS):
        raise PrecisionError("two distinct tiles were realized at the same position")

    mirror = complex(reflect_across(base[p - 1], base[0], 0j))
    inradius = tanh(atanh(abs(mirror)) / 2)
    return DiskRealization(
        graph=g,
        max_depth=depth,
        radius=r,
        inradius=inradius,
        edge_length=hyperbolic_distance(base[0], base[1]),
        corners=corners,
        centers=centers,
        vertex_pos=vertex_pos,
        eps=eps,
    )


def regularity_defects(
    r: DiskRealization, tiles: Optional[Sequence[int]] = None
) -> Tuple[float, float]:
    """Largest deviation of interior angles from 2pi/q and of edge lengths"""
    p = r.p
    target = TWO_PI / r.q
    angle_defect = 0.0
    length_defect = 0.0
    for t in r.tiles if tiles is None else tiles:
        w = r.corners[t]
        for s in range(p):
            angle = _corner_angle(w[s], w[s - 1], w[(s + 1) % p])
            angle_defect = max(angle_defect, abs(angle - target))
            length = hyperbolic_distance(w[s - 1], w[s])
            length_defect = max(length_defect, abs(length - r.edge_length))
    return angle_defect, length_defect


@dataclass(frozen=True)
class Trace:
    """Combinatorial record of a (nudged) geodesic segment"""
    word: Word
    path: TilingPath
    cl: int
    tl: Optional[int]
    vertex_hits: Tuple[int, ...] = ()


def vertex_segment(r: DiskRealization, v0: int, v1: int) -> GeodesicSegment:
    for v in (v0, v1):
        if v not in r.vertex_pos:
            raise OutOfDepthError(f"vertex {v} is not realized")
    return GeodesicSegment(r.vertex_pos[v0], r.vertex_pos[v1], v0, v1)


def tile_point_segment(r: DiskRealization, a: int, b: int) -> GeodesicSegment:
    """Segment between the centres of two realized tiles"""
    for t in (a, b):
        if not r.is_realized(t):
            raise OutOfDepthError(f"tile {t} is not realized")
    return GeodesicSegment(r.centers[a], r.centers[b])


def _sector_tile(
    r: DiskRealization, v: int, chart: np.ndarray, direction: float, side: int
) -> int:
    """
    Tile at v containing the direction turned slightly clockwise (side -1) or
    counter-clockwise (side +1).

    chart holds the realization's corner points, in r._points order, moved so
    that v sits at the origin. The sector of a tile at v runs counter-clockwise
    from its next corner to its previous one.
    """
    g = r.graph
    around = g.vertex_tiles[v]
    if any(t is None or not r.is_realized(t) for t in around):
        raise OutOfDepthError(f"tiles around vertex {v} are not all realized")
    starts = []
    for t in around:
        s = g.tile_corners[t].index(v)
        nxt = r._tile_corner_index[t][(s + 1) % g.p]
        ang = (float(np.angle(chart[nxt])) - direction) % TWO_PI
        gap = min(ang, TWO_PI - ang)
        if gap < ANGLE_SNAP:
            ang = 0.0
        elif gap < ANGLE_AMBIGUOUS:
            raise PrecisionError(
                f"segment direction at vertex {v} is {gap:.3g} rad from an edge"
            )
        starts.append(ang)
    if side > 0 and 0.0 in starts:
        j = starts.index(0.0)
    else:
        j = int(np.argmax(starts))
    return around[j]


def _containing_tile(r: DiskRealization, z: complex, klein: np.ndarray, point: complex) -> int:
    """Realized tile containing a point, given in original and normalized Klein coordinates"""
    k = min(8, len(r.tiles))
    _, idx = r._center_tree.query([z.real, z.imag], k=k)
    for i in np.atleast_1d(idx):
        t = r.tiles[int(i)]
        c = klein[r._tile_corner_index[t]]
        prev = np.roll(c, 1)
        edge = c - prev
        cross = edge.real * (point.imag - prev.imag) - edge.imag * (point.real - prev.real)
        dist = cross / np.abs(edge)
        if np.all(dist > -ENDPOINT_CLEARANCE):
            if np.any(np.abs(dist) < ENDPOINT_CLEARANCE):
                raise ParameterError(
                    "segment endpoint lies on a tile edge; move it into a tile interior"
                )
            return t
    raise OutOfDepthError("segment endpoint lies outside the realized region")


def _walk(
    r: DiskRealization,
    klein: np.ndarray,
    start: int,
    end: int,
    x_end: float,
    shift: float,
    limit: Optional[int],
) -> Optional[Tuple[List[int], List[int]]]:
    g = r.graph
    p = g.p
    t = start
    tiles = [t]
    edges: List[int] = []
    x_cur = 0.0
    while t != end:
        c = klein[r._tile_corner_index[t]]
        prev = np.roll(c, 1)
        ya = prev.imag - shift
        yb = c.imag - shift
        straddle = ya * yb < 0
        if not straddle.any():
            raise PrecisionError(f"traced line misses tile {t}")
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = prev.real - ya * (c.real - prev.real) / (c.imag - prev.imag)
        xs = np.where(straddle, xs, -np.inf)
        s = int(np.argmax(xs))
        if xs[s] < x_cur - 1e-12 or xs[s] > x_end + 1e-9:
            raise PrecisionError(f"inconsistent exit from tile {t}")
        nb = g.tile_neighbor(t, s % p)
        if nb is None or not r.is_realized(nb[0]):
            raise OutOfDepthError(f"segment leaves the realized region at tile {t}")
        edges.append(g.tile_slots[t][s])
        t = nb[0]
        tiles.append(t)
        x_cur = float(xs[s])
        if limit is not None and len(edges) > limit:
            return None
    return tiles, edges


def trace_word(
    r: DiskRealization,
    segment: GeodesicSegment,
    clockwise: bool = False,
    with_distance: bool = True,
    max_crossings: Optional[int] = None,
) -> Optional[Trace]:
    """
    Tiles and edge labels met by a geodesic segment.

    Args:
        r: Disk realization
        segment: Endpoints inside tiles or at realized vertices
        clockwise: Nudge around vertex hits clockwise instead
        with_distance: Also compute tl, the tiling distance of the end tiles
        max_crossings: Give up (returning None) after this many crossings

    Returns:
        Trace with word, path, cl = crossings + 1 and tl

    Raises:
        ParameterError: If an endpoint lies on an edge or the segment is an edge
        PrecisionError: If a vertex lies too close to the segment to decide
        OutOfDepthError: If the segment leaves the realized region
    """
    g = r.graph
    z0, z1 = segment.start, segment.end
    v0, v1 = segment.start_vertex, segment.end_vertex
    if v0 is not None and v1 is not None:
        for e in g.vertex_slots[v0]:
            if e is not None and v1 in g.edge_ends[e]:
                raise ParameterError(f"segment from {v0} to {v1} runs along an edge")
    theta = float(np.angle(to_origin(z0, z1)))
    rot = complex(np.exp(-1j * theta))
    local = rot * to_origin(z0, r._points)
    klein = to_klein(local)
    end_local = complex(rot * to_origin(z0, z1))
    x_end = float(to_klein(end_local).real)
    shift = NUDGE if clockwise else -NUDGE

    ys = klein.imag
    inside = (klein.real > 0) & (klein.real < x_end)
    hits = inside & (np.abs(ys) < VERTEX_HIT)
    unclear = inside & (np.abs(ys) >= VERTEX_HIT) & (np.abs(ys) < AMBIGUOUS)
    if unclear.any():
        raise PrecisionError(
            f"{int(unclear.sum())} vertices are too close to the segment to resolve"
        )
    # id -1 marks a frontier corner; it still counts as a hit
    hit_ids = tuple(sorted(
        {int(v) for v in r._point_ids[hits] if int(v) not in (v0, v1)}
    ))

    side = 1 if clockwise else -1
    if v0 is not None:
        start = _sector_tile(r, v0, local, 0.0, side)
    else:
        start = _containing_tile(r, z0, klein, 0j)
    if v1 is not None:
        end = _sector_tile(r, v1, to_origin(end_local, local), pi, -side)
    else:
        end = _containing_tile(r, z1, klein, complex(x_end, 0.0))

    walked = _walk(r, klein, start, end, x_end, shift, max_crossings)
    if walked is None:
        return None
    tiles, edges = walked
    path = TilingPath(tuple(tiles), tuple(edges), g)
    tl = tiling_distance(g, tiles[0], tiles[-1]) if with_distance else None
    return Trace(path_to_word(path), path, len(edges) + 1, tl, hit_ids)


def sharp_segment(r: DiskRealization, v: Optional[int] = None) -> GeodesicSegment:
    """
    Segment through a vertex between two nearly opposite tiles (odd q), passing
    (q+1)/2 edges on its counter-clockwise nudge side.
    """
    g = r.graph
    if g.params.q_even:
        raise ParameterError("the sharp configuration exists for odd q only")
    v = g.base_vertex if v is None else v
    if v not in r.vertex_pos or not r.vertex_complete(v):
        raise OutOfDepthError(f"vertex {v} and its tiles must be realized")
    zv = r.vertex_pos[v]
    e = g.vertex_slots[v][0]
    a, b = g.edge_ends[e]
    other = b if a == v else a
    edge_dir = float(np.angle(to_origin(zv, r.vertex_pos[other])))
    width = TWO_PI / g.q
    back = edge_dir - 0.1 * width
    forward = back + pi
    reach = tanh(0.25 * r.edge_length / 2)
    start = complex(from_origin(zv, reach * complex(cos(back), sin(back))))
    end = complex(from_origin(zv, reach * complex(cos(forward), sin(forward))))
    return GeodesicSegment(start, end)


@dataclass(frozen=True)
class ClassRealization:
    """Segment whose traced word lies in the class, or a refutation"""
    refuted: bool
    segment: Optional[GeodesicSegment] = None
    trace: Optional[Trace] = None
    attempts: int = 0


def realize_word_class(
    r: DiskRealization,
    cls: WordClass,
    base: Optional[int] = None,
    attempts: int = 32,
    seed: int = 0,
) -> ClassRealization:
    """
    Find a segment from the base tile to the class's end tile tracing a
    member of the class.

    Inadmissible classes are refuted without a search. The first attempt
    joins the tile centres; later ones use seeded interior points.

    Raises:
        ParameterError: If q is odd
        OutOfDepthError: If the end tile is not realized
        NumericError: If no attempt traces a member of the class
    """
    g = r.graph
    if not g.params.q_even:
        raise ParameterError("word classes are realized for even q only")
    if not cls.class_admissible:
        return ClassRealization(refuted=True)
    a = g.base_tile if base is None else base
    b = word_to_path(cls.canonical, g, base=a).end
    if not (r.is_realized(a) and r.is_realized(b)):
        raise OutOfDepthError(f"tiles {a} and {b} must both be realized")
    rng = np.random.default_rng(seed)

    def interior(t: int) -> complex:
        w = 0.5 * r.inradius * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, TWO_PI))
        return complex(from_origin(r.centers[t], w))

    for k in range(attempts):
        if k == 0 and a != b:
            segment = tile_point_segment(r, a, b)
        elif k == 0:
            segment = GeodesicSegment(r.centers[a], interior(a))
        else:
            segment = GeodesicSegment(interior(a), interior(b))
        try:
            trace = trace_word(r, segment, with_distance=False)
        except (PrecisionError, ParameterError):
            continue
        if trace is not None and trace.word in cls:
            return ClassRealization(False, segment, trace, k + 1)
    raise NumericError(f"no segment realizing the class found in {attempts} attempts")


def census_depth(q: int, k_max: int) -> int:
    """
    Realization depth diagonal_census needs from a corner of the base tile.

    The start vertex's ring reaches q // 2, a segment of combinatorial length
    k_max ends in a tile k_max - 1 further, and the end vertex's ring adds up
    to ceil(q/2) more.
    """
    return q // 2 + k_max - 1 + ceil(q / 2)


def diagonal_census(
    r: DiskRealization, k_max: int, base_vertex: Optional[int] = None
) -> DiagonalCensus:
    """
    Count vertex-to-vertex segments from one vertex by combinatorial length.

    Edges of the tiling are skipped. A segment is primitive when it meets no
    vertex in its interior. Segments too close to a vertex to classify are
    excluded and counted. Only vertices with a tile within k_max - 1 of the
    start vertex's ring can end a segment of length <= k_max; the rest are
    not traced.

    Raises:
        OutOfDepthError: If the realization cannot hold every segment with
            combinatorial length up to k_max together with the tiles around
            its end vertex
    """
    g = r.graph
    v0 = g.base_vertex if base_vertex is None else base_vertex
    if k_max < 1:
        raise ParameterError(f"k_max must be >= 1, got {k_max}")
    ring = g.vertex_tiles[v0]
    if any(t is None for t in ring):
        raise OutOfDepthError(f"tiles around vertex {v0} were not all generated")
    reach = max(g.tile_distance[t] for t in ring)
    last = reach + k_max - 1
    need = last + ceil(g.q / 2)
    if need > r.max_depth:
        raise OutOfDepthError(
            f"census up to cl={k_max} needs a realization of depth >= {need}"
        )
    p, q = g.p, g.q
    neighbours = set()
    for e in g.vertex_slots[v0]:
        if e is not None:
            neighbours.update(g.edge_ends[e])
    n_cl = {k: 0 for k in range(1, k_max + 1)}
    n_prim = {k: 0 for k in range(1, k_max + 1)}
    excluded = 0
    skipped = 0
    for v in sorted(r.vertex_pos):
        if v == v0:
            continue
        if v in neighbours:
            skipped += 1
            continue
        if min(g.tile_distance[t] for t in g.vertex_tiles[v] if t is not None) > last:
            continue
        try:
            trace = trace_word(
                r, vertex_segment(r, v0, v), with_distance=False, max_crossings=k_max - 1
            )
        except PrecisionError:
            excluded += 1
            continue
        if trace is None:
            continue
        n_cl[trace.cl] += 1
        if not trace.vertex_hits:
            n_prim[trace.cl] += 1
    gd = {0: Fraction(p)}
    for k in range(1, k_max + 1):
        gd[k] = Fraction(p * n_prim[k], 2 * q)
    return DiagonalCensus(p, q, k_max, n_cl, n_prim, gd, excluded, skipped)


def complexity_p_n(census: DiagonalCensus, p1: int, p2: int, n: int) -> int:
    """
    p(n) = 2 p(1) + n (p(2) - p(1)) + sum_{k=3..n} sum_{j=3..k} gd(j)

    Raises:
        OutOfDepthError: If the census stops below n
        NumericError: If a needed gd(j) is not an integer
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if n > census.k_max:
        raise OutOfDepthError(f"census reaches cl={census.k_max}, p({n}) needs cl={n}")
    total = Fraction(2 * p1 + n * (p2 - p1))
    for k in range(3, n + 1):
        for j in range(3, k + 1):
            if census.gd[j].denominator != 1:
                raise NumericError(f"gd({j}) = {census.gd[j]} is not an integer")
            total += census.gd[j]
    return int(total)


@dataclass
class AppendixReport:
    max_midpoint_deviation: Optional[float] = None
    windows_checked: int = 0
    consecutive_misses: Optional[int] = None
    segments_checked: int = 0
    chord_intersections: Optional[int] = None
    chord_pairs_checked: int = 0
    max_line_deviation: Optional[float] = None
    tiles_cut: Optional[int] = None
    geodesics_checked: int = 0

    @property
    def passed(self) -> bool:
        return (
            (self.max_midpoint_deviation is None or self.max_midpoint_deviation < 1e-8)
            and (self.max_line_deviation is None or self.max_line_deviation < 1e-8)
            and not self.consecutive_misses
            and not self.chord_intersections
            and not self.tiles_cut
        )


def _collinearity_defect(m1: complex, m2: complex, m3: complex) -> float:
    """Distance of m2 from the geodesic through m1 and m3, in Klein coordinates"""
    w3 = to_origin(m1, m3)
    rot = np.conj(w3) / abs(w3)
    return abs(float(to_klein(rot * to_origin(m1, m2)).imag))


def _ideal_ends(a: complex, b: complex) -> Tuple[float, float]:
    w = to_origin(a, b)
    u = w / abs(w)
    return (
        float(np.angle(from_origin(a, u))) % TWO_PI,
        float(np.angle(from_origin(a, -u))) % TWO_PI,
    )


def _interleaved(x: Tuple[float, float], y: Tuple[float, float]) -> bool:
    lo, hi = sorted(x)
    if min(abs(a - b) for a in x for b in y) < 1e-12:
        return False
    inside = [lo < a < hi for a in y]
    return inside[0] != inside[1]


def check_appendix_lemmas(r: DiskRealization, samples: int = 1000, seed: int = 0) -> AppendixReport:
    """
    Numerical checks of the zigzag and edge-geodesic lemmas.

    Odd q: midpoints of consecutive zigzag edges lie on one geodesic, and a
    segment meeting a zigzag at two edges meets every edge between them.
    Even q: the geodesics extending two non-adjacent edges of a tile never
    meet inside the disk, and for up to `samples` edge-geodesic classes every
    realized edge of the class lies on one geodesic that cuts through no
    realized tile.
    """
    g = r.graph
    rng = np.random.default_rng(seed)
    report = AppendixReport()
    if g.params.q_even:
        hits = 0
        pairs = 0
        p = g.p
        for t in r.tiles:
            w = r.corners[t]
            lines = [_ideal_ends(w[s - 1], w[s]) for s in range(p)]
            for s in range(p):
                for u in range(s + 2, p):
                    if (u - s) % p in (1, p - 1):
                        continue
                    pairs += 1
                    hits += _interleaved(lines[s], lines[u])
        report.chord_intersections = hits
        report.chord_pairs_checked = pairs

        classes = edge_geodesic_classes(g)
        members: Dict[int, List[int]] = {}
        for e, c in classes.class_of.items():
            if all(v is not None and v in r.vertex_pos for v in g.edge_ends[e]):
                members.setdefault(c, []).append(e)
        picked = sorted(members)
        if len(picked) > samples:
            picked = sorted(int(c) for c in rng.choice(picked, size=samples, replace=False))
        corner_index = np.array([r._tile_corner_index[t] for t in r.tiles])
        cut = 0
        worst = 0.0
        for c in picked:
            a, b = (r.vertex_pos[v] for v in g.edge_ends[members[c][0]])
            w = to_origin(a, b)
            rot = np.conj(w) / abs(w)
            side = to_klein(rot * to_origin(a, r._points)).imag
            on_line = np.array([r.vertex_pos[v] for e in members[c] for v in g.edge_ends[e]])
            worst = max(worst, float(np.abs(to_klein(rot * to_origin(a, on_line)).imag).max()))
            ys = side[corner_index]
            cut += int(np.sum((ys.max(axis=1) > AMBIGUOUS) & (ys.min(axis=1) < -AMBIGUOUS)))
        report.max_line_deviation = worst
        report.tiles_cut = cut
        report.geodesics_checked = len(picked)
        return report

    zig = zigzag_classes(g)
    realized = [
        e for e in range(g.num_edges)
        if all(v is not None and v in r.vertex_pos for v in g.edge_ends[e])
    ]
    realized_set = set(realized)
    windows = []
    for chain in zig.chains.values():
        for i in range(len(chain) - 2):
            if all(e in realized_set for e in chain[i:i + 3]):
                windows.append(chain[i:i + 3])
    if len(windows) > samples:
        picks = rng.choice(len(windows), size=samples, replace=False)
        windows = [windows[int(i)] for i in picks]
    worst = 0.0
    for triple in windows:
        mids = [
            hyperbolic_midpoint(*(r.vertex_pos[v] for v in g.edge_ends[e])) for e in triple
        ]
        worst = max(worst, _collinearity_defect(*mids))
    report.max_midpoint_deviation = worst
    report.windows_checked = len(windows)

    position = {z: {e: i for i, e in enumerate(chain)} for z, chain in zig.chains.items()}
    misses = 0
    checked = 0
    tiles = r.tiles
    for _ in range(samples):
        a, b = (tiles[int(i)] for i in rng.choice(len(tiles), size=2, replace=False))
        try:
            trace = trace_word(r, tile_point_segment(r, a, b), with_distance=False)
        except (PrecisionError, OutOfDepthError, ParameterError):
            continue
        if trace is None:
            continue
        checked += 1
        met: Dict[int, List[int]] = {}
        for e in trace.path.edges:
            for z in zig.zigzags_of[e]:
                i = position.get(z, {}).get(e)
                if i is not None:
                    met.setdefault(z, []).append(i)
        for idx in met.values():
            idx = sorted(idx)
            if len(idx) > 1 and idx != list(range(idx[0], idx[-1] + 1)):
                misses += 1
    report.consecutive_misses = misses
    report.segments_checked = checked
    return report
