"""
Combinatorial (p,q)-tilings grown distance layer by distance layer.

The tiling is held as a rotation system: every vertex keeps its incident edges
in counter-clockwise slot order, and faces are recovered by walking corners.
Growing the map whose vertices are tiling vertices gives tiles as faces;
growing the dual map (parameters swapped) gives tiles as vertices. Either way
the finished `TilingGraph` exposes both views.
"""
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from math import ceil
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .exceptions import HypBillError, OutOfDepthError, ParameterError
from .models import Frame, TilingParams

Slots = Tuple[Optional[int], ...]

GRAPH_SCHEMA_VERSION = 1


class Layering(Enum):
    """Which cells the construction grows by distance"""
    VERTICES = "vertices"
    TILES = "tiles"


class _UnionFind:
    def __init__(self, size: int):
        self.parents: List[int] = list(range(size))
        self.heights: List[int] = [1] * size

    def join(self, v1: int, v2: int) -> None:
        r1 = self.root(v1)
        r2 = self.root(v2)
        if r1 == r2:
            return
        h1 = self.heights[r1]
        h2 = self.heights[r2]
        if h1 <= h2:
            self.parents[r1] = r2
            self.heights[r2] = max(h2, h1 + 1)
        else:
            self.parents[r2] = r1
            self.heights[r1] = max(h1, h2 + 1)

    def root(self, v: int) -> int:
        while self.parents[v] != v:
            v = self.parents[v]
        return v


class _MapBuilder:
    """Grows a planar map whose closed faces have `face_size` sides and whose
    vertices have `degree` slots"""

    def __init__(self, face_size: int, degree: int, rng: Optional[Any] = None):
        self.a = face_size
        self.b = degree
        self.rng = rng
        self.slots: List[List[Optional[int]]] = []
        self.ends: List[List[int]] = []
        self.dist: List[int] = []
        self.alive: List[bool] = []
        self.valence: List[int] = []

    def _new_vertex(self, dist: int) -> int:
        self.slots.append([None] * self.b)
        self.dist.append(dist)
        self.alive.append(True)
        self.valence.append(0)
        return len(self.slots) - 1

    def _add_edge(self, u: int, su: int, v: int, sv: int) -> int:
        e = len(self.ends)
        self.ends.append([u, su, v, sv])
        self.slots[u][su] = e
        self.slots[v][sv] = e
        return e

    def across(self, v: int, s: int) -> Tuple[int, int]:
        """Far endpoint and its slot for the edge in slot s of v"""
        u, su, w, sw = self.ends[self.slots[v][s]]
        if u == v and su == s:
            return w, sw
        return u, su

    def grow(self, depth: int) -> None:
        self._new_vertex(0)
        for k in range(depth):
            frontier = [
                v for v in range(len(self.slots)) if self.alive[v] and self.dist[v] == k
            ]
            if self.rng is not None:
                self.rng.shuffle(frontier)
            fresh = []
            for v in frontier:
                for j in range(self.b):
                    if self.slots[v][j] is None:
                        w = self._new_vertex(k + 1)
                        self._add_edge(v, j, w, 0)
                        fresh.append(w)
            self._close(fresh, k)
            for w in fresh:
                if self.alive[w]:
                    self.valence[w] = sum(e is not None for e in self.slots[w])

    def _close(self, fresh: List[int], k: int) -> None:
        b = self.b
        changed = True
        while changed:
            changed = False
            for x0 in fresh:
                if not self.alive[x0]:
                    continue
                for j0 in range(b):
                    if self.slots[x0][j0] is not None or self.slots[x0][(j0 + 1) % b] is None:
                        continue
                    found = self._walk_open(x0, j0, k)
                    if found is None:
                        continue
                    xm, im, m = found
                    if m == self.a - 1:
                        self._add_edge(x0, j0, xm, (im + 1) % b)
                    elif m == self.a:
                        self._merge(x0, j0, xm, im)
                    else:
                        continue
                    changed = True
                    break

    def _walk_open(self, x0: int, j0: int, k: int) -> Optional[Tuple[int, int, int]]:
        # follow the open face from corner (x0, j0) to the first corner whose next slot is empty
        b = self.b
        v, j = x0, j0
        interior_old = False
        for m in range(1, self.a + 1):
            w, i = self.across(v, (j + 1) % b)
            if self.slots[w][(i + 1) % b] is None:
                if w == x0 or not interior_old:
                    return None
                return w, i, m
            if self.dist[w] <= k:
                interior_old = True
            v, j = w, i
        return None

    def _merge(self, x0: int, j0: int, xm: int, im: int) -> None:
        b = self.b
        offset = (im - j0) % b
        moves = [(s, (s + offset) % b) for s in range(b) if self.slots[x0][s] is not None]
        for _, t in moves:
            if self.slots[xm][t] is not None:
                raise HypBillError(f"slot collision while identifying {x0} with {xm}")
        for s, t in moves:
            e = self.slots[x0][s]
            rec = self.ends[e]
            if rec[0] == x0 and rec[1] == s:
                rec[0], rec[1] = xm, t
            else:
                rec[2], rec[3] = xm, t
            if rec[0] == rec[2]:
                raise HypBillError(f"identifying {x0} with {xm} would create a loop")
            self.slots[xm][t] = e
        self.slots[x0] = [None] * b
        self.alive[x0] = False

    def compact(self) -> None:
        remap: Dict[int, int] = {}
        for v, ok in enumerate(self.alive):
            if ok:
                remap[v] = len(remap)
        keep = sorted(remap, key=remap.get)
        self.slots = [self.slots[v] for v in keep]
        self.dist = [self.dist[v] for v in keep]
        self.valence = [self.valence[v] for v in keep]
        self.alive = [True] * len(keep)
        for rec in self.ends:
            rec[0] = remap[rec[0]]
            rec[2] = remap[rec[2]]

    def faces(self) -> List[Tuple[List[int], List[int], List[Tuple[int, int]]]]:
        """Closed faces as clockwise walks of (edges, vertices, corners)"""
        seen = set()
        found = []
        for v in range(len(self.slots)):
            for j in range(self.b):
                if (v, j) in seen:
                    continue
                walk = self._face_walk(v, j)
                if walk is not None:
                    seen.update(walk[2])
                    found.append(walk)
        return found

    def _face_walk(self, v: int, j: int) -> Optional[Tuple[List[int], List[int], List[Tuple[int, int]]]]:
        b = self.b
        edges: List[int] = []
        verts: List[int] = []
        corners: List[Tuple[int, int]] = []
        cv, cj = v, j
        for _ in range(self.a):
            e = self.slots[cv][(cj + 1) % b]
            if e is None:
                return None
            corners.append((cv, cj))
            verts.append(cv)
            edges.append(e)
            cv, cj = self.across(cv, (cj + 1) % b)
            if (cv, cj) == (v, j) and len(edges) < self.a:
                return None
        if (cv, cj) != (v, j):
            return None
        return edges, verts, corners


def _bfs_distances(n: int, adjacency: List[List[int]], source: int) -> List[int]:
    dist = [-1] * n
    if n == 0:
        return dist
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


class TilingGraph:
    """
    Finite truncation of a (p,q)-tiling with both the vertex and the tile view.

    - vertex_slots[v]: the q edges at v in counter-clockwise order
    - tile_slots[t]: the p boundary edges of t in counter-clockwise order
    - tile_corners[t][s]: vertex shared by tile slots s and s+1
    - vertex_tiles[v][j]: tile between vertex slots j and j+1
    - edge_ends[e] / edge_sides[e]: endpoints and the tiles on either side

    Entries are None where the truncation has not produced the cell yet.
    Instances are treated as immutable once built.
    """

    def __init__(
        self,
        params: TilingParams,
        depth: int,
        layering: Layering,
        vertex_slots: Sequence[Slots],
        tile_slots: Sequence[Slots],
        tile_corners: Sequence[Slots],
        vertex_tiles: Sequence[Slots],
        edge_ends: Sequence[Tuple[Optional[int], Optional[int]]],
        edge_sides: Sequence[Tuple[Optional[int], Optional[int]]],
        vertex_distance: Sequence[int],
        tile_distance: Sequence[int],
        stage_valence: Sequence[int],
        base_vertex: int,
        base_tile: int,
    ):
        self.params = params
        self.depth = depth
        self.layering = layering
        self.vertex_slots = tuple(tuple(s) for s in vertex_slots)
        self.tile_slots = tuple(tuple(s) for s in tile_slots)
        self.tile_corners = tuple(tuple(s) for s in tile_corners)
        self.vertex_tiles = tuple(tuple(s) for s in vertex_tiles)
        self.edge_ends = tuple(tuple(e) for e in edge_ends)
        self.edge_sides = tuple(tuple(e) for e in edge_sides)
        self.vertex_distance = tuple(vertex_distance)
        self.tile_distance = tuple(tile_distance)
        self.stage_valence = tuple(stage_valence)
        self.base_vertex = base_vertex
        self.base_tile = base_tile

        self._slot_in_tile: Dict[Tuple[int, int], int] = {}
        for t, slots in enumerate(self.tile_slots):
            for s, e in enumerate(slots):
                if e is not None:
                    self._slot_in_tile[(t, e)] = s
        self._slot_at_vertex: Dict[Tuple[int, int], int] = {}
        for v, slots in enumerate(self.vertex_slots):
            for j, e in enumerate(slots):
                if e is not None:
                    self._slot_at_vertex[(v, e)] = j
        self._tile_counts = Counter(self.tile_distance)
        self._cache: Dict[str, Any] = {}

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_slots)

    @property
    def num_tiles(self) -> int:
        return len(self.tile_slots)

    @property
    def num_edges(self) -> int:
        return len(self.edge_ends)

    def tile_neighbor(self, t: int, s: int) -> Optional[Tuple[int, int]]:
        """Tile across slot s of t and the slot of the shared edge in that tile"""
        e = self.tile_slots[t][s]
        if e is None:
            return None
        a, b = self.edge_sides[e]
        other = b if a == t else a
        if other is None:
            return None
        return other, self._slot_in_tile[(other, e)]

    def slot_in_tile(self, t: int, e: int) -> int:
        return self._slot_in_tile[(t, e)]

    def slot_at_vertex(self, v: int, e: int) -> int:
        return self._slot_at_vertex[(v, e)]

    def tile_corner_vertex(self, t: int, s: int) -> Optional[int]:
        return self.tile_corners[t][s % self.p]

    def tile_vertices(self, t: int) -> List[int]:
        return [v for v in self.tile_corners[t] if v is not None]

    def is_vertex_complete(self, v: int) -> bool:
        return all(e is not None for e in self.vertex_slots[v])

    def is_tile_complete(self, t: int) -> bool:
        return all(self.tile_neighbor(t, s) is not None for s in range(self.p))

    @property
    def trusted_radius(self) -> int:
        """Largest tile distance at which class, label and path queries are exact"""
        if "trusted_radius" not in self._cache:
            incomplete = [
                self.tile_distance[t]
                for t in range(self.num_tiles)
                if not self.is_tile_complete(t)
            ]
            frontier = min(incomplete) if incomplete else max(self.tile_distance, default=-1) + 1
            self._cache["trusted_radius"] = frontier - 1 - ceil(self.q / 2)
        return self._cache["trusted_radius"]

    def require_trusted(self, *tiles: int) -> None:
        radius = self.trusted_radius
        for t in tiles:
            if not 0 <= t < self.num_tiles:
                raise OutOfDepthError(f"tile {t} was not generated")
            if self.tile_distance[t] > radius:
                raise OutOfDepthError(
                    f"tile {t} at distance {self.tile_distance[t]} is beyond the "
                    f"trusted radius {radius} of a depth-{self.depth} tiling; "
                    f"rebuild with depth >= {self.tile_distance[t] + ceil(self.q / 2) + 1}"
                )

    def tiles_at(self, n: int) -> List[int]:
        return [t for t, d in enumerate(self.tile_distance) if d == n]

    def dual_graph(self) -> nx.Graph:
        """Tiles joined across shared edges; the `edge` attribute holds the edge id"""
        if "dual" not in self._cache:
            graph = nx.Graph()
            graph.add_nodes_from(range(self.num_tiles))
            for e, (a, b) in enumerate(self.edge_sides):
                if a is not None and b is not None:
                    graph.add_edge(a, b, edge=e)
            self._cache["dual"] = graph
        return self._cache["dual"]

    def to_document(self) -> Dict[str, Any]:
        """Versioned plain-data form of the graph"""
        doc: Dict[str, Any] = {
            "schema": GRAPH_SCHEMA_VERSION,
            "p": self.p,
            "q": self.q,
            "depth": self.depth,
            "layering": self.layering.value,
            "base_vertex": self.base_vertex,
            "base_tile": self.base_tile,
            "vertices": [
                {
                    "id": v,
                    "distance": self.vertex_distance[v],
                    "slots": list(self.vertex_slots[v]),
                    "tiles": list(self.vertex_tiles[v]),
                }
                for v in range(self.num_vertices)
            ],
            "tiles": [
                {
                    "id": t,
                    "distance": self.tile_distance[t],
                    "slots": list(self.tile_slots[t]),
                    "corners": list(self.tile_corners[t]),
                }
                for t in range(self.num_tiles)
            ],
            "edges": [
                {"id": e, "ends": list(self.edge_ends[e]), "sides": list(self.edge_sides[e])}
                for e in range(self.num_edges)
            ],
            "stage_valence": list(self.stage_valence),
        }
        if self.params.q_even:
            labeling = label_edges(self)
            doc["labels"] = {str(e): lab for e, lab in sorted(labeling.label.items())}
            doc["classes"] = {
                str(e): c for e, c in sorted(edge_geodesic_classes(self).class_of.items())
            }
        else:
            doc["zigzags"] = {
                str(e): list(z) for e, z in sorted(zigzag_classes(self).zigzags_of.items())
            }
        return doc

    @classmethod
    def from_document(cls, doc: Dict[str, Any]) -> "TilingGraph":
        if doc.get("schema") != GRAPH_SCHEMA_VERSION:
            raise ParameterError(f"unsupported graph document schema: {doc.get('schema')}")
        vertices = sorted(doc["vertices"], key=lambda d: d["id"])
        tiles = sorted(doc["tiles"], key=lambda d: d["id"])
        edges = sorted(doc["edges"], key=lambda d: d["id"])
        return cls(
            params=TilingParams(doc["p"], doc["q"]),
            depth=doc["depth"],
            layering=Layering(doc["layering"]),
            vertex_slots=[d["slots"] for d in vertices],
            tile_slots=[d["slots"] for d in tiles],
            tile_corners=[d["corners"] for d in tiles],
            vertex_tiles=[d["tiles"] for d in vertices],
            edge_ends=[tuple(d["ends"]) for d in edges],
            edge_sides=[tuple(d["sides"]) for d in edges],
            vertex_distance=[d["distance"] for d in vertices],
            tile_distance=[d["distance"] for d in tiles],
            stage_valence=doc["stage_valence"],
            base_vertex=doc["base_vertex"],
            base_tile=doc["base_tile"],
        )


def build_tiling(
    params: TilingParams,
    depth: int,
    layering: Layering = Layering.TILES,
    seed: Optional[int] = None,
) -> TilingGraph:
    """
    Generate every cell of the chosen kind up to `depth` layers from the base.

    Args:
        params: Hyperbolic (p, q)
        depth: Number of layers to grow
        layering: Grow by tiling vertices or by tiles
        seed: If given, each layer expands its frontier in a shuffled order;
            the result is isomorphic, only the ids differ

    Returns:
        TilingGraph holding both views
    """
    if depth < 0:
        raise ParameterError(f"depth must be >= 0, got {depth}")
    p, q = params.p, params.q
    face_size, degree = (p, q) if layering is Layering.VERTICES else (q, p)
    rng = np.random.default_rng(seed) if seed is not None else None

    builder = _MapBuilder(face_size, degree, rng)
    builder.grow(depth)
    builder.compact()
    faces = builder.faces()

    corner_face: Dict[Tuple[int, int], int] = {}
    for f, (_, _, corners) in enumerate(faces):
        for c in corners:
            corner_face[c] = f

    n_map = len(builder.slots)
    map_slots = [tuple(s) for s in builder.slots]
    map_around = [
        tuple(corner_face.get((x, j)) for j in range(degree)) for x in range(n_map)
    ]
    face_slots = [tuple(reversed(edges)) for edges, _, _ in faces]
    face_around = [
        tuple(verts[(face_size - 1 - s) % face_size] for s in range(face_size))
        for _, verts, _ in faces
    ]
    map_ends = [(u, v) for u, _, v, _ in builder.ends]
    face_pairs = [
        (corner_face.get((u, su)), corner_face.get((u, (su - 1) % degree)))
        for u, su, _, _ in builder.ends
    ]

    def adjacency(n: int, pairs: List[Tuple[Optional[int], Optional[int]]]) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(n)]
        for a, b in pairs:
            if a is not None and b is not None:
                adj[a].append(b)
                adj[b].append(a)
        return adj

    if layering is Layering.VERTICES:
        base_vertex = 0
        base_tile = corner_face.get((0, 0), 0)
        tile_distance = _bfs_distances(len(faces), adjacency(len(faces), face_pairs), base_tile)
        return TilingGraph(
            params, depth, layering,
            vertex_slots=map_slots, tile_slots=face_slots,
            tile_corners=face_around, vertex_tiles=map_around,
            edge_ends=map_ends, edge_sides=face_pairs,
            vertex_distance=builder.dist, tile_distance=tile_distance,
            stage_valence=builder.valence,
            base_vertex=base_vertex, base_tile=base_tile,
        )

    base_tile = 0
    base_vertex = corner_face.get((0, 0), 0)
    vertex_distance = _bfs_distances(len(faces), adjacency(len(faces), face_pairs), base_vertex)
    return TilingGraph(
        params, depth, layering,
        vertex_slots=face_slots, tile_slots=map_slots,
        tile_corners=map_around, vertex_tiles=face_around,
        edge_ends=face_pairs, edge_sides=map_ends,
        vertex_distance=vertex_distance, tile_distance=builder.dist,
        stage_valence=builder.valence,
        base_vertex=base_vertex, base_tile=base_tile,
    )


def tiles_at_distance(g: TilingGraph, n: int) -> int:
    """
    Number of tiles at tiling distance n from the base tile.

    Raises:
        OutOfDepthError: If layer n is not exact in this truncation
    """
    if n < 0:
        raise ParameterError(f"distance must be >= 0, got {n}")
    # a tile-layered build is exact on every generated layer
    limit = g.depth if g.layering is Layering.TILES else g.trusted_radius
    if n > limit:
        raise OutOfDepthError(
            f"N_td({n}) needs a deeper tiling (depth {g.depth}, exact up to {limit})"
        )
    return g._tile_counts.get(n, 0)


def stage_valence(g: TilingGraph, x: int) -> int:
    """Degree of a grown cell at the end of the stage that created it"""
    return g.stage_valence[x]


@dataclass(frozen=True)
class EdgeLabeling:
    label: Dict[int, int]
    frames: Dict[int, Frame]


def _frame_from_labels(labels: Sequence[int], p: int) -> Frame:
    if sorted(labels) != list(range(1, p + 1)):
        raise ParameterError(f"base labels must be a permutation of 1..{p}")
    offset = labels[0] - 1
    sign = 1 if labels[1] == labels[0] % p + 1 else -1
    frame = Frame(offset, sign)
    if any(frame.label(s, p) != labels[s] for s in range(p)):
        raise ParameterError("base labels must be cyclic up to orientation")
    return frame


def tile_frames(g: TilingGraph, base_frame: Frame = Frame(0, 1)) -> Dict[int, Frame]:
    """Frames reached by reflecting breadth-first out of the base tile"""
    key = f"frames:{base_frame.offset}:{base_frame.sign}"
    if key not in g._cache:
        frames = {g.base_tile: base_frame}
        queue = deque([g.base_tile])
        while queue:
            t = queue.popleft()
            for s in range(g.p):
                nb = g.tile_neighbor(t, s)
                if nb is None or nb[0] in frames:
                    continue
                frames[nb[0]] = frames[t].reflect(s, nb[1], g.p)
                queue.append(nb[0])
        g._cache[key] = frames
    return g._cache[key]


def label_edges(g: TilingGraph, base_labels: Optional[Sequence[int]] = None) -> EdgeLabeling:
    """
    Reflection-consistent edge labels in {1..p} for even q.

    Args:
        g: Generated tiling
        base_labels: Labels of the base tile's slots, a rotation or reversal
            of 1..p; defaults to (1, 2, ..., p)

    Raises:
        ParameterError: If q is odd or base_labels is not cyclic
    """
    if not g.params.q_even:
        raise ParameterError("a global edge labeling exists only for even q; use path frames")
    base = _frame_from_labels(base_labels, g.p) if base_labels else Frame(0, 1)
    frames = tile_frames(g, base)
    labels: Dict[int, int] = {}
    for t, frame in frames.items():
        for s, e in enumerate(g.tile_slots[t]):
            if e is None:
                continue
            lab = frame.label(s, g.p)
            if labels.setdefault(e, lab) != lab:
                raise HypBillError(f"edge {e} received labels {labels[e]} and {lab}")
    return EdgeLabeling(labels, dict(frames))


@dataclass(frozen=True)
class EdgeGeodesicClasses:
    class_of: Dict[int, int]
    chains: Dict[int, Tuple[int, ...]]

    def vertices_of(self, g: TilingGraph, class_id: int) -> FrozenSet[int]:
        return frozenset(
            v for e in self.chains[class_id] for v in g.edge_ends[e] if v is not None
        )


@dataclass(frozen=True)
class ZigzagClasses:
    zigzags_of: Dict[int, Tuple[int, int]]
    chains: Dict[int, Tuple[int, ...]]


def _order_chain(members: List[int], links: Dict[int, List[int]]) -> Tuple[int, ...]:
    ends = [e for e in members if len(links.get(e, ())) < 2]
    start = min(ends) if ends else min(members)
    chain = [start]
    prev, cur = None, start
    while True:
        nxt = [f for f in links.get(cur, ()) if f != prev and f not in chain[-2:]]
        if not nxt or nxt[0] == start:
            break
        prev, cur = cur, nxt[0]
        chain.append(cur)
        if len(chain) > len(members):
            raise HypBillError("edge chain does not close up consistently")
    return tuple(chain)


def edge_geodesic_classes(g: TilingGraph) -> EdgeGeodesicClasses:
    """Partition edges by the opposite-at-a-vertex relation (even q)"""
    if not g.params.q_even:
        raise ParameterError("edge geodesics are defined for even q; use zigzag_classes")
    if "edge_classes" in g._cache:
        return g._cache["edge_classes"]
    half = g.q // 2
    uf = _UnionFind(g.num_edges)
    links: Dict[int, List[int]] = {}
    for v in range(g.num_vertices):
        if not g.is_vertex_complete(v):
            continue
        slots = g.vertex_slots[v]
        for i in range(half):
            e, f = slots[i], slots[i + half]
            uf.join(e, f)
            links.setdefault(e, []).append(f)
            links.setdefault(f, []).append(e)
    groups: Dict[int, List[int]] = {}
    for e in range(g.num_edges):
        groups.setdefault(uf.root(e), []).append(e)
    class_of: Dict[int, int] = {}
    chains: Dict[int, Tuple[int, ...]] = {}
    for members in groups.values():
        cid = min(members)
        for e in members:
            class_of[e] = cid
        chains[cid] = _order_chain(members, links)
    result = EdgeGeodesicClasses(class_of, chains)
    g._cache["edge_classes"] = result
    return result


def zigzag_classes(g: TilingGraph) -> ZigzagClasses:
    """
    The two zigzags through every edge (odd q).

    A zigzag leaving an edge at a vertex turns right (slot offset (q-1)/2 from
    the incoming edge) or left (offset (q+1)/2), and the turns alternate. The
    zigzag that turns right when leaving e in one direction also does so in
    the other, so each edge carries an L token and an R token.
    """
    if g.params.q_even:
        raise ParameterError("zigzags are defined for odd q; use edge_geodesic_classes")
    if "zigzags" in g._cache:
        return g._cache["zigzags"]
    q = g.q
    h = (q - 1) // 2
    uf = _UnionFind(2 * g.num_edges)
    pairs: List[Tuple[int, int]] = []
    for v in range(g.num_vertices):
        if not g.is_vertex_complete(v):
            continue
        slots = g.vertex_slots[v]
        for i in range(q):
            # (edge, R) continues as (edge h slots further ccw, L)
            e, f = slots[i], slots[(i + h) % q]
            uf.join(2 * e + 1, 2 * f)
            pairs.append((e, f))
    zig_id: Dict[int, int] = {}
    for token in range(2 * g.num_edges):
        r = uf.root(token)
        zig_id[r] = min(zig_id.get(r, token), token)
    zigzags_of = {
        e: (zig_id[uf.root(2 * e)], zig_id[uf.root(2 * e + 1)]) for e in range(g.num_edges)
    }
    members: Dict[int, List[int]] = {}
    for e, (zl, zr) in zigzags_of.items():
        members.setdefault(zl, []).append(e)
        members.setdefault(zr, []).append(e)
    links: Dict[int, Dict[int, List[int]]] = {}
    for e, f in pairs:
        z = zig_id[uf.root(2 * e + 1)]
        links.setdefault(z, {}).setdefault(e, []).append(f)
        links[z].setdefault(f, []).append(e)
    chains = {z: _order_chain(sorted(set(ms)), links.get(z, {})) for z, ms in members.items()}
    result = ZigzagClasses(zigzags_of, chains)
    g._cache["zigzags"] = result
    return result


def crossed_classes(g: TilingGraph, e: int) -> Tuple[int, ...]:
    """Edge-geodesic class (even q) or both zigzags (odd q) crossed through edge e"""
    if g.params.q_even:
        return (edge_geodesic_classes(g).class_of[e],)
    return zigzag_classes(g).zigzags_of[e]


def separation_signatures(g: TilingGraph) -> Dict[int, FrozenSet[int]]:
    """
    For every tile, the classes separating it from the base tile.

    Raises:
        OutOfDepthError: If two trusted tiles disagree on a side assignment
    """
    if "signatures" in g._cache:
        return g._cache["signatures"]
    radius = g.trusted_radius
    sig: Dict[int, FrozenSet[int]] = {g.base_tile: frozenset()}
    queue = deque([g.base_tile])
    while queue:
        t = queue.popleft()
        for s in range(g.p):
            nb = g.tile_neighbor(t, s)
            if nb is None:
                continue
            n = nb[0]
            toggled = sig[t].symmetric_difference(crossed_classes(g, g.tile_slots[t][s]))
            if n not in sig:
                sig[n] = toggled
                queue.append(n)
            elif sig[n] != toggled and max(g.tile_distance[t], g.tile_distance[n]) <= radius:
                raise OutOfDepthError(f"ambiguous side assignment between tiles {t} and {n}")
    g._cache["signatures"] = sig
    return sig


@dataclass(frozen=True)
class VertexTileMap:
    """phi (vertices to tiles) or psi (tiles to vertices)"""
    kind: str
    mapping: Dict[int, int]
    fiber_bound: int

    def fibers(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for src, dst in self.mapping.items():
            out.setdefault(dst, []).append(src)
        return out


def _first_minimum(values: Sequence[int]) -> int:
    low = min(values)
    n = len(values)
    at = [i for i in range(n) if values[i] == low]
    if len(at) == 1:
        return at[0]
    for i in at:
        if values[(i + 1) % n] == low:
            return i
    raise HypBillError(f"non-adjacent minima in cyclic distances {list(values)}")


def vertex_tile_map(g: TilingGraph) -> VertexTileMap:
    """
    Send each closed face of the grown map to its nearest grown cell.

    In a vertex-layered build the faces are tiles and the map is psi; in a
    tile-layered build the faces are vertices and the map is phi. Ties between
    two adjacent minima go to the first of them in counter-clockwise order.
    """
    mapping: Dict[int, int] = {}
    if g.layering is Layering.VERTICES:
        for t in range(g.num_tiles):
            around = g.tile_corners[t]
            mapping[t] = around[_first_minimum([g.vertex_distance[v] for v in around])]
        return VertexTileMap("psi", mapping, g.q)
    for v in range(g.num_vertices):
        around = g.vertex_tiles[v]
        mapping[v] = around[_first_minimum([g.tile_distance[t] for t in around])]
    return VertexTileMap("phi", mapping, g.p)


def tile_distance_pattern(g: TilingGraph, t: int) -> List[int]:
    """Vertex distances around tile t, counter-clockwise from its nearest vertex"""
    corners = g.tile_corners[t]
    if any(v is None for v in corners):
        raise OutOfDepthError(f"tile {t} is not closed")
    values = [g.vertex_distance[v] for v in corners]
    i = _first_minimum(values)
    return values[i:] + values[:i]


def has_double_minimum(pattern: Sequence[int]) -> bool:
    return len(pattern) > 1 and pattern[0] == pattern[1]


def matches_distance_pattern(pattern: Sequence[int]) -> bool:
    """Rise by one from the minimum to the far side of the tile, then fall back"""
    p = len(pattern)
    k = pattern[0]
    if p % 2 == 0:
        up = list(range(k, k + p // 2 + 1))
        return list(pattern) == up + up[-2:0:-1]
    h = (p - 1) // 2
    up = list(range(k, k + h + 1))
    single = up + up[:0:-1]
    double = [k] + up + list(range(k + h - 1, k, -1))
    return list(pattern) in (single, double)


def tile_kind(g: TilingGraph, t: int) -> str:
    """
    Where the vertex distances of tile t peak (odd p): at a single "vertex"
    when the minimum is shared by two corners, otherwise along an "edge".
    """
    if g.p % 2 == 0:
        raise ParameterError("tile kinds are defined for odd p")
    return "vertex" if has_double_minimum(tile_distance_pattern(g, t)) else "edge"


def frame_of(g: TilingGraph, t: int) -> Frame:
    """Reflection frame of tile t in the global labeling (even q)"""
    if not g.params.q_even:
        raise ParameterError("tile frames are path dependent for odd q")
    frames = tile_frames(g)
    if t not in frames:
        raise OutOfDepthError(f"tile {t} is not connected to the base tile")
    return frames[t]
