"""Loopless multigraph with edge multiplicities, plus the three elementary
edge operations (lift, dissolve, subdivide) and the text/DOT formats.

Vertices are opaque hashable identifiers kept in insertion order; every
iteration over vertices or edges follows that order, so downstream searches
are reproducible. Library operations never mutate their inputs: they copy
and return fresh values.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, NamedTuple

from .errors import BadDegree, MissingEdge, NotIncident, ParseError

VertexId = Hashable


class EdgeRef(NamedTuple):
    """One instance of a multiedge: unordered pair plus 1-based index."""

    u: VertexId
    v: VertexId
    index: int


class Multigraph:
    """Loopless multigraph: ordered vertex set, pair -> multiplicity map."""

    __slots__ = ("_order", "_adj", "_mult", "_num_edges")

    def __init__(self, vertices: Iterable[VertexId] = (), edges: Iterable = ()):
        self._order: dict = {}
        self._adj: dict = {}
        self._mult: dict = {}
        self._num_edges = 0
        for v in vertices:
            self.add_vertex(v)
        for u, v, *rest in edges:
            self.add_edge(u, v, rest[0] if rest else 1)

    # -- construction -----------------------------------------------------

    def add_vertex(self, v: VertexId) -> None:
        if v not in self._order:
            self._order[v] = len(self._order)
            self._adj[v] = {}

    def add_edge(self, u: VertexId, v: VertexId, mult: int = 1) -> None:
        """Add `mult` parallel instances between u and v (loops forbidden)."""
        if u == v:
            raise ValueError(f"loop at {u!r} not allowed")
        if mult < 1:
            raise ValueError("multiplicity must be >= 1")
        self.add_vertex(u)
        self.add_vertex(v)
        key = self.pair_key(u, v)
        self._mult[key] = self._mult.get(key, 0) + mult
        self._adj[u][v] = self._adj[u].get(v, 0) + mult
        self._adj[v][u] = self._adj[v].get(u, 0) + mult
        self._num_edges += mult

    # -- basic queries -----------------------------------------------------

    def pair_key(self, u: VertexId, v: VertexId) -> tuple:
        """Canonical unordered pair, ordered by vertex insertion index."""
        return (u, v) if self._order[u] <= self._order[v] else (v, u)

    def vertices(self) -> list:
        return list(self._order)

    def has_vertex(self, v: VertexId) -> bool:
        return v in self._order

    def edge_multiplicities(self) -> list:
        """(pair, multiplicity) in pair insertion order."""
        return list(self._mult.items())

    def edge_instances(self) -> Iterator[EdgeRef]:
        for (u, v), m in self._mult.items():
            for i in range(1, m + 1):
                yield EdgeRef(u, v, i)

    def mult(self, u: VertexId, v: VertexId) -> int:
        if u not in self._order or v not in self._order or u == v:
            return 0
        return self._mult.get(self.pair_key(u, v), 0)

    def deg(self, v: VertexId) -> int:
        return len(self._adj[v])

    def mdeg(self, v: VertexId) -> int:
        return sum(self._adj[v].values())

    def neighbors(self, v: VertexId) -> list:
        return list(self._adj[v])

    @property
    def num_vertices(self) -> int:
        return len(self._order)

    @property
    def num_edges(self) -> int:
        """Total number of edge instances, counting multiplicities."""
        return self._num_edges

    @property
    def num_distinct_edges(self) -> int:
        return len(self._mult)

    def edge_ref(self, u: VertexId, v: VertexId, index: int) -> EdgeRef:
        """Normalized live reference; raises MissingEdge when stale."""
        if u not in self._order or v not in self._order:
            raise MissingEdge(f"no such pair {{{u!r},{v!r}}}")
        a, b = self.pair_key(u, v)
        if not 1 <= index <= self._mult.get((a, b), 0):
            raise MissingEdge(f"{{{u!r},{v!r}}}_{index} is not a live edge")
        return EdgeRef(a, b, index)

    # -- derived values ----------------------------------------------------

    def copy(self) -> "Multigraph":
        g = Multigraph()
        g._order = dict(self._order)
        g._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        g._mult = dict(self._mult)
        g._num_edges = self._num_edges
        return g

    def same_structure(self, other: "Multigraph") -> bool:
        """Equal vertex sets and pair multiplicities (not isomorphism)."""
        if set(self._order) != set(other._order):
            return False
        return {frozenset(p): m for p, m in self._mult.items()} == {
            frozenset(p): m for p, m in other._mult.items()
        }

    def without_vertices(self, drop: Iterable[VertexId]) -> "Multigraph":
        drop = set(drop)
        g = Multigraph()
        for v in self._order:
            if v not in drop:
                g.add_vertex(v)
        for (u, v), m in self._mult.items():
            if u not in drop and v not in drop:
                g.add_edge(u, v, m)
        return g

    def induced(self, keep: Iterable[VertexId]) -> "Multigraph":
        keep = set(keep)
        g = Multigraph()
        for v in self._order:
            if v in keep:
                g.add_vertex(v)
        for (u, v), m in self._mult.items():
            if u in keep and v in keep:
                g.add_edge(u, v, m)
        return g

    def without_edge_instances(self, refs: Iterable) -> "Multigraph":
        """Remove the listed instances (counts per pair; indices not tracked)."""
        counts: dict = {}
        for r in refs:
            u, v, _ = r if isinstance(r, tuple) else (r.u, r.v, r.index)
            key = self.pair_key(u, v)
            counts[key] = counts.get(key, 0) + 1
        for key, c in counts.items():
            if c > self._mult.get(key, 0):
                raise MissingEdge(f"removing {c} instances of {key}, only {self._mult.get(key, 0)} live")
        g = Multigraph()
        for v in self._order:
            g.add_vertex(v)
        for (u, v), m in self._mult.items():
            m -= counts.get((u, v), 0)
            if m > 0:
                g.add_edge(u, v, m)
        return g

    def connected_components(self) -> list:
        """Vertex sets of components, each in insertion order."""
        seen: set = set()
        comps = []
        for start in self._order:
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            queue = [start]
            while queue:
                x = queue.pop()
                for w in self._adj[x]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp, key=self._order.__getitem__))
        return comps

    def is_connected(self) -> bool:
        return self.num_vertices <= 1 or len(self.connected_components()) == 1

    def __repr__(self) -> str:
        return f"Multigraph(|V|={self.num_vertices}, |E|={self.num_edges})"


# -- elementary operations (all pure) --------------------------------------


def _resolve(g: Multigraph, e) -> EdgeRef:
    u, v, i = e if isinstance(e, tuple) else (e.u, e.v, e.index)
    return g.edge_ref(u, v, i)


def lift(g: Multigraph, e1, e2) -> Multigraph:
    """Remove two incident instances {x,y},{y,z}; add {x,z} when x != z.

    Two parallel instances are incident (x = z): both are removed and
    nothing is added. Identical instances or disjoint edges are rejected.
    """
    r1, r2 = _resolve(g, e1), _resolve(g, e2)
    if r1 == r2:
        raise NotIncident("cannot lift an edge instance with itself")
    shared = {r1.u, r1.v} & {r2.u, r2.v}
    if not shared:
        raise NotIncident(f"{r1} and {r2} share no endpoint")
    if len(shared) == 2:
        # parallel instances: the non-shared endpoints coincide
        x = z = None
    else:
        y = next(iter(shared))
        x = r1.u if r1.v == y else r1.v
        z = r2.u if r2.v == y else r2.v
    out = g.without_edge_instances([r1, r2])
    if x is not None and x != z:
        out.add_edge(x, z)
    return out


def dissolve(g: Multigraph, v) -> Multigraph:
    """Remove a multidegree-2 vertex, joining its neighbors by a new edge.

    When both incident instances reach the same neighbor, the vertex is
    simply deleted (no loop is created).
    """
    if not g.has_vertex(v):
        raise MissingEdge(f"no vertex {v!r}")
    if g.mdeg(v) != 2:
        raise BadDegree(f"mdeg({v!r}) = {g.mdeg(v)}, need 2")
    nbrs = g.neighbors(v)
    out = g.without_vertices([v])
    if len(nbrs) == 2:
        out.add_edge(nbrs[0], nbrs[1])
    return out


def fresh_vertex(g: Multigraph):
    """Smallest unused int above every int vertex id already present."""
    ints = [v for v in g.vertices() if isinstance(v, int)]
    return (max(ints) + 1) if ints else 0


def subdivide(g: Multigraph, e) -> tuple:
    """Replace one edge instance {u,v} by a path u-s-v through a fresh vertex."""
    r = _resolve(g, e)
    s = fresh_vertex(g)
    out = g.without_edge_instances([r])
    out.add_vertex(s)
    out.add_edge(r.u, s)
    out.add_edge(s, r.v)
    return out, s


# -- text format -------------------------------------------------------------
#
# One graph per file:
#   c optional comments
#   p mgraph <n> <m-distinct>
#   e <u> <v> <mult>        (1-based integer vertices, no loops)


def serialize_graph_text(g: Multigraph) -> str:
    """Emit the text format; non 1..n integer ids are renumbered by insertion order."""
    ids = g.vertices()
    if all(isinstance(v, int) for v in ids) and set(ids) == set(range(1, len(ids) + 1)):
        label = {v: v for v in ids}
    else:
        label = {v: i + 1 for i, v in enumerate(ids)}
    lines = [f"p mgraph {g.num_vertices} {g.num_distinct_edges}"]
    rows = sorted(
        (min(label[u], label[v]), max(label[u], label[v]), m)
        for (u, v), m in g.edge_multiplicities()
    )
    lines += [f"e {a} {b} {m}" for a, b, m in rows]
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> Multigraph:
    g = None
    declared = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if g is not None:
                raise ParseError(f"line {ln}: duplicate header")
            if len(parts) != 4 or parts[1] != "mgraph":
                raise ParseError(f"line {ln}: expected 'p mgraph <n> <m>'")
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: non-integer header fields") from None
            if n < 0:
                raise ParseError(f"line {ln}: negative vertex count")
            g = Multigraph(vertices=range(1, n + 1))
        elif parts[0] == "e":
            if g is None:
                raise ParseError(f"line {ln}: edge before header")
            if len(parts) != 4:
                raise ParseError(f"line {ln}: expected 'e <u> <v> <mult>'")
            try:
                u, v, m = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: non-integer edge fields") from None
            if u == v:
                raise ParseError(f"line {ln}: loop {u}-{v} not allowed")
            if not (g.has_vertex(u) and g.has_vertex(v)):
                raise ParseError(f"line {ln}: vertex outside 1..n")
            if m < 1:
                raise ParseError(f"line {ln}: multiplicity must be >= 1")
            g.add_edge(u, v, m)
        else:
            raise ParseError(f"line {ln}: unknown record {parts[0]!r}")
    if g is None:
        raise ParseError("missing 'p mgraph' header")
    if declared is not None and declared != g.num_distinct_edges:
        raise ParseError(
            f"header declares {declared} distinct edges, file has {g.num_distinct_edges}"
        )
    return g


def read_graph(path) -> Multigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def write_graph(path, g: Multigraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph_text(g))


def to_dot(g: Multigraph, name: str = "G") -> str:
    """DOT export; parallel edges are emitted once per instance."""
    lines = [f"graph {name} {{"]
    for v in g.vertices():
        lines.append(f'  "{v}";')
    for (u, v), m in g.edge_multiplicities():
        lines.extend(f'  "{u}" -- "{v}";' for _ in range(m))
    lines.append("}")
    return "\n".join(lines) + "\n"
