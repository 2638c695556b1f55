"""Graph family generators: grids, walls, doubled walls, the per-vertex
gadget constructions, disjoint sub-wall tilings, and seeded random suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import BadSize, Infeasible
from .multigraph import EdgeRef, Multigraph, fresh_vertex


@dataclass(frozen=True)
class WallCoordinates:
    """Positional record for grid/wall vertices.

    `coord` maps vertex id -> (row, col); `at` is the inverse. Wall
    generators also expose the vertical/horizontal paths as vertex-id
    sequences; grids leave them empty.
    """

    coord: dict
    at: dict
    vertical_paths: tuple = ()
    horizontal_paths: tuple = ()


def grid(k: int, r: int):
    """(k x r)-grid: Cartesian product of paths on k and r vertices."""
    if k < 2 or r < 2:
        raise BadSize(f"grid needs k, r >= 2, got {k}, {r}")
    g = Multigraph()
    coord, at = {}, {}
    vid = 1
    for x in range(1, k + 1):
        for y in range(1, r + 1):
            g.add_vertex(vid)
            coord[vid] = (x, y)
            at[(x, y)] = vid
            vid += 1
    for (x, y), v in at.items():
        if (x + 1, y) in at:
            g.add_edge(v, at[(x + 1, y)])
        if (x, y + 1) in at:
            g.add_edge(v, at[(x, y + 1)])
    return g, WallCoordinates(coord, at)


def wall(k: int):
    """k-wall: (k+1) x (2k+2) grid minus alternating vertical edges, pruned.

    Vertical edges {(x,y),(x+1,y)} with x+y odd are dropped, then degree-1
    vertices are deleted (iterated to a fixed point; one pass suffices but
    iterating is a safe superset). Vertical paths P_j (j in [k]) and
    horizontal paths P_i (i in [k+1]) are recorded as vertex sequences.
    """
    if k < 2:
        raise BadSize(f"wall needs k >= 2, got {k}")
    rows, cols = k + 1, 2 * k + 2
    g = Multigraph()
    at = {}
    vid = 1
    for x in range(1, rows + 1):
        for y in range(1, cols + 1):
            g.add_vertex(vid)
            at[(x, y)] = vid
            vid += 1
    for (x, y), v in at.items():
        if (x, y + 1) in at:
            g.add_edge(v, at[(x, y + 1)])
        if (x + 1, y) in at and (x + y) % 2 == 0:
            g.add_edge(v, at[(x + 1, y)])
    while True:
        pruned = [v for v in g.vertices() if g.mdeg(v) <= 1]
        if not pruned:
            break
        g = g.without_vertices(pruned)
    coord = {v: xy for xy, v in at.items() if g.has_vertex(v)}
    at = {xy: v for v, xy in coord.items()}

    verticals = []
    for j in range(1, k + 1):
        x, c = 1, 2 * j
        path = [at[(x, c)]]
        while x < rows:
            if (x + c) % 2 == 0:
                x += 1
            else:
                c = 4 * j - 1 - c  # switch between columns 2j-1 and 2j
            path.append(at[(x, c)])
        if c != 2 * j:
            path.append(at[(x, 2 * j)])
        verticals.append(tuple(path))
    horizontals = []
    for i in range(1, rows + 1):
        ys = sorted(y for (x, y) in at if x == i)
        horizontals.append(tuple(at[(i, y)] for y in ys))

    return g, WallCoordinates(coord, at, tuple(verticals), tuple(horizontals))


def _path_edges(path):
    return {frozenset(p) for p in zip(path, path[1:])}


def wall_plus(k: int):
    """Wall with every edge shared by a vertical and a horizontal path doubled."""
    g, coords = wall(k)
    horiz = set()
    for hp in coords.horizontal_paths:
        horiz |= _path_edges(hp)
    doubled = set()
    for vp in coords.vertical_paths:
        doubled |= _path_edges(vp) & horiz
    out = g.copy()
    for pair in sorted(doubled, key=lambda p: sorted(coords.coord[v] for v in p)):
        u, v = tuple(pair)
        out.add_edge(u, v)
    return out, coords


class Zone(NamedTuple):
    prime: int
    dprime: int
    edges: tuple  # the four EdgeRefs of the zone


@dataclass(frozen=True)
class StarZoneMap:
    """Bookkeeping for the per-multidegree gadget construction."""

    originals: frozenset
    zones: dict = field(default_factory=dict)  # (v, i) -> Zone
    zone_of_vertex: dict = field(default_factory=dict)  # aux vertex -> (v, i)

    def is_original_vertex(self, x) -> bool:
        return x in self.originals

    def is_original_edge(self, ref) -> bool:
        return ref[0] in self.originals and ref[1] in self.originals

    def zone_of_edge(self, ref):
        """(v, i) owning this edge, or None for an original edge."""
        for x in (ref[0], ref[1]):
            if x in self.zone_of_vertex:
                return self.zone_of_vertex[x]
        return None


def plus_graph(g: Multigraph) -> Multigraph:
    """Attach one 3-vertex pendant gadget per vertex (doubled edge v'v'')."""
    out = g.copy()
    nxt = fresh_vertex(g)
    for v in g.vertices():
        p, q = nxt, nxt + 1
        nxt += 2
        out.add_vertex(p)
        out.add_vertex(q)
        out.add_edge(p, q, 2)
        out.add_edge(v, p)
        out.add_edge(v, q)
    return out


def star_graph(g: Multigraph):
    """Attach one gadget per vertex per unit of multidegree; zones recorded."""
    out = g.copy()
    zones, zone_of_vertex = {}, {}
    nxt = fresh_vertex(g)
    for v in g.vertices():
        for i in range(1, g.mdeg(v) + 1):
            p, q = nxt, nxt + 1
            nxt += 2
            out.add_vertex(p)
            out.add_vertex(q)
            out.add_edge(p, q, 2)
            out.add_edge(v, p)
            out.add_edge(v, q)
            refs = (
                out.edge_ref(p, q, 1),
                out.edge_ref(p, q, 2),
                out.edge_ref(v, p, 1),
                out.edge_ref(v, q, 1),
            )
            zones[(v, i)] = Zone(p, q, refs)
            zone_of_vertex[p] = (v, i)
            zone_of_vertex[q] = (v, i)
    return out, StarZoneMap(frozenset(g.vertices()), zones, zone_of_vertex)


class SubwallTiling(NamedTuple):
    host: Multigraph
    host_coords: WallCoordinates
    tile: Multigraph
    tile_coords: WallCoordinates
    embeddings: list  # per tile: dict tile-vertex-id -> host-vertex-id


def disjoint_subwalls(h: int, k: int) -> SubwallTiling:
    """Wall of height (h+1)*ceil(sqrt(k+1)) tiled with >= k+1 disjoint h-walls.

    Tiles sit on a q x q lattice (q = ceil(sqrt(k+1))) with (h+1)-row and
    (2h+2)-column strides; rows whose offset breaks the wall's vertical-edge
    parity are shifted one column right, which the two spare columns absorb.
    """
    if h < 2 or k < 0:
        raise BadSize(f"disjoint_subwalls needs h >= 2, k >= 0, got {h}, {k}")
    q = math.isqrt(k + 1)
    if q * q < k + 1:
        q += 1
    big, big_coords = wall((h + 1) * q)
    small, small_coords = wall(h)
    embeddings = []
    for a in range(q):
        dr = a * (h + 1)
        shift = dr % 2
        for b in range(q):
            dc = b * (2 * h + 2) + shift
            emb = {}
            for v, (x, y) in small_coords.coord.items():
                emb[v] = big_coords.at[(x + dr, y + dc)]
            embeddings.append(emb)
    return SubwallTiling(big, big_coords, small, small_coords, embeddings)


# -- small named families ----------------------------------------------------


def theta(r: int) -> Multigraph:
    """Two vertices joined by an edge of multiplicity r."""
    if r < 1:
        raise BadSize("theta needs r >= 1")
    g = Multigraph(vertices=[1, 2])
    g.add_edge(1, 2, r)
    return g


def path_graph(n: int) -> Multigraph:
    if n < 1:
        raise BadSize("path needs n >= 1")
    g = Multigraph(vertices=range(1, n + 1))
    for i in range(1, n):
        g.add_edge(i, i + 1)
    return g


def cycle_graph(n: int) -> Multigraph:
    if n < 3:
        raise BadSize("cycle needs n >= 3")
    g = path_graph(n)
    g.add_edge(n, 1)
    return g


def complete_graph(n: int) -> Multigraph:
    if n < 1:
        raise BadSize("complete needs n >= 1")
    g = Multigraph(vertices=range(1, n + 1))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            g.add_edge(i, j)
    return g


def star_tree(leaves: int) -> Multigraph:
    """K_{1,leaves}: center vertex 1."""
    if leaves < 1:
        raise BadSize("star needs >= 1 leaf")
    g = Multigraph(vertices=range(1, leaves + 2))
    for i in range(2, leaves + 2):
        g.add_edge(1, i)
    return g


# -- seeded random instances --------------------------------------------------

_MASK = (1 << 64) - 1

RNG_VERSION = "rng-v1"  # SplitMix64 stream + partial Fisher-Yates sampling


class _SplitMix64:
    """Deterministic 64-bit generator (Steele et al. constants)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform in [0, n) by rejection."""
        limit = _MASK - (_MASK + 1) % n
        while True:
            x = self.next64()
            if x <= limit:
                return x % n


def random_multigraph(n: int, m: int, max_mult: int, seed: int) -> Multigraph:
    """Loopless multigraph on vertices 1..n with exactly m edge instances.

    The m instances are a uniform sample (without replacement) of the
    n(n-1)/2 * max_mult capacity slots, drawn from a SplitMix64 stream
    seeded with `seed`; output is stable under RNG_VERSION.
    """
    if n < 2 or m < 0 or max_mult < 1:
        raise BadSize(f"need n >= 2, m >= 0, max_mult >= 1, got {n}, {m}, {max_mult}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    capacity = len(pairs) * max_mult
    if m > capacity:
        raise Infeasible(f"{m} instances exceed capacity {capacity}")
    g = Multigraph(vertices=range(1, n + 1))
    if m == 0:
        return g
    rng = _SplitMix64(seed)
    slots = [p for p in pairs for _ in range(max_mult)]
    for i in range(m):
        j = i + rng.below(len(slots) - i)
        slots[i], slots[j] = slots[j], slots[i]
    for u, v in slots[:m]:
        g.add_edge(u, v)
    return g


def random_connected_multigraph(n: int, m: int, max_mult: int, seed: int) -> Multigraph:
    """First connected graph in the seed, seed+1, ... sequence (m >= n-1 required)."""
    if m < n - 1:
        raise Infeasible(f"{m} edges cannot connect {n} vertices")
    s = seed
    while True:
        g = random_multigraph(n, m, max_mult, s)
        if g.is_connected():
            return g
        s += 1
