"""Tree-partitions and tree-cut decompositions: validation, torsos,
3-centers, nice-ification, and exact small-instance width solvers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BudgetExhausted,
    InvalidDecomposition,
    InvalidNode,
    IterationBudgetExceeded,
    TooLarge,
)
from .multigraph import Multigraph, dissolve

DECOMP_SCHEMA = "immersionep-decomp-v1"


@dataclass(frozen=True)
class RootedTreeCutDecomposition:
    """Rooted tree (parent array, root parent -1) with a near-partition into bags."""

    parent: tuple
    bags: tuple  # frozensets; empties allowed

    def __post_init__(self):
        _check_tree(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def num_nodes(self) -> int:
        return len(self.parent)

    def children(self, t: int) -> list:
        return [i for i, p in enumerate(self.parent) if p == t]

    def subtree(self, t: int) -> list:
        """Nodes of the subtree rooted at t (preorder)."""
        kids: dict = {}
        for i, p in enumerate(self.parent):
            kids.setdefault(p, []).append(i)
        out, stack = [], [t]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(kids.get(x, [])))
        return out

    def subtree_union(self, t: int) -> frozenset:
        out: set = set()
        for x in self.subtree(t):
            out |= self.bags[x]
        return frozenset(out)

    def heights(self) -> list:
        h = [0] * len(self.parent)
        for t in self._postorder():
            for c in self.children(t):
                h[t] = max(h[t], h[c] + 1)
        return h

    def _postorder(self) -> list:
        return list(reversed(self._preorder()))

    def _preorder(self) -> list:
        return self.subtree(self.root)


class RootedTreePartition(RootedTreeCutDecomposition):
    """Same skeleton; validation demands a true partition and edge locality."""


def _check_tree(parent) -> None:
    n = len(parent)
    roots = [i for i, p in enumerate(parent) if p == -1]
    if n == 0 or len(roots) != 1:
        raise InvalidDecomposition("parent array must define exactly one root")
    for i, p in enumerate(parent):
        if p != -1 and not (0 <= p < n):
            raise InvalidDecomposition(f"parent[{i}] = {p} out of range")
    seen = set()
    for i in range(n):
        trail = []
        x = i
        while x != -1 and x not in seen:
            trail.append(x)
            x = parent[x]
            if len(trail) > n:
                raise InvalidDecomposition("parent array has a cycle")
        seen.update(trail)


@dataclass(frozen=True)
class WidthReport:
    width: int
    kind: str  # "tree-partition" | "tree-cut"
    max_bag: int = 0
    max_cut: int = 0  # tree-partition: max |E_f|
    adhesions: tuple = ()
    torso_orders: tuple = ()  # tree-cut: |3-center| per node


# -- torso and 3-center --------------------------------------------------------


def three_center(g: Multigraph, x_set, _order: str = "delete-first") -> Multigraph:
    """Fixed point of deleting mdeg-1 and dissolving mdeg-2 vertices outside X.

    The two reduction orders are confluent; `_order` exists so tests can
    assert that.
    """
    keep = set(x_set)
    cur = g
    rules = ("delete", "dissolve") if _order == "delete-first" else ("dissolve", "delete")
    while True:
        target = None
        action = None
        for rule in rules:
            want = 1 if rule == "delete" else 2
            for v in cur.vertices():
                if v not in keep and cur.mdeg(v) == want:
                    target, action = v, rule
                    break
            if target is not None:
                break
        if target is None:
            return cur
        if action == "delete":
            cur = cur.without_vertices([target])
        else:
            cur = dissolve(cur, target)


def torso(g: Multigraph, d: RootedTreeCutDecomposition, t: int):
    """Graph at node t with each tree-neighbor component consolidated.

    Returns (torso graph, consolidation map: new vertex -> frozenset of
    original vertices). Consolidating an empty vertex set is a no-op.
    """
    if not 0 <= t < d.num_nodes():
        raise InvalidNode(f"node {t} out of range")
    if d.num_nodes() == 1:
        return g.copy(), {}
    groups = []
    for c in sorted(d.children(t)):
        groups.append(d.subtree_union(c))
    if t != d.root:
        inside = set(d.subtree_union(t))
        groups.append(frozenset(v for v in g.vertices() if v not in inside))
    out = Multigraph()
    consolidation = {}
    owner = {}
    nxt = max((v for v in g.vertices() if isinstance(v, int)), default=-1) + 1
    for grp in groups:
        grp = frozenset(v for v in grp if g.has_vertex(v))
        if not grp:
            continue
        z = nxt
        nxt += 1
        out.add_vertex(z)
        consolidation[z] = grp
        for v in grp:
            owner[v] = z
    for v in d.bags[t]:
        if g.has_vertex(v):
            out.add_vertex(v)
            owner[v] = v
    for (u, v), m in g.edge_multiplicities():
        a, b = owner.get(u), owner.get(v)
        if a is None or b is None:
            continue  # vertex outside every bag: validator reports it
        if a != b:
            out.add_edge(a, b, m)
    return out, consolidation


def _adhesions(g: Multigraph, d: RootedTreeCutDecomposition) -> list:
    adh = []
    for t in range(d.num_nodes()):
        inside = d.subtree_union(t)
        cut = 0
        for (u, v), m in g.edge_multiplicities():
            if (u in inside) != (v in inside):
                cut += m
        adh.append(cut)
    return adh


def validate_tcd(g: Multigraph, d: RootedTreeCutDecomposition) -> WidthReport:
    """Near-partition check plus adhesion/torso/3-center widths."""
    seen: set = set()
    for i, bag in enumerate(d.bags):
        dup = seen & bag
        if dup:
            raise InvalidDecomposition(f"vertex {next(iter(dup))!r} in two bags")
        seen |= bag
        for v in bag:
            if not g.has_vertex(v):
                raise InvalidDecomposition(f"bag {i} mentions unknown vertex {v!r}")
    missing = set(g.vertices()) - seen
    if missing:
        raise InvalidDecomposition(f"vertices not in any bag: {sorted(map(str, missing))}")
    adh = _adhesions(g, d)
    orders = []
    for t in range(d.num_nodes()):
        torso_g, _ = torso(g, d, t)
        orders.append(three_center(torso_g, d.bags[t]).num_vertices)
    width = max(max(adh[t], orders[t]) for t in range(d.num_nodes()))
    return WidthReport(
        width=width,
        kind="tree-cut",
        max_bag=max((len(b) for b in d.bags), default=0),
        adhesions=tuple(adh),
        torso_orders=tuple(orders),
    )


def validate_partition(g: Multigraph, d: RootedTreePartition) -> WidthReport:
    """True-partition, edge-locality, and width = max(bag sizes, |E_f|)."""
    seen: set = set()
    for i, bag in enumerate(d.bags):
        if not bag:
            raise InvalidDecomposition(f"bag {i} is empty (partitions forbid empties)")
        dup = seen & bag
        if dup:
            raise InvalidDecomposition(f"vertex {next(iter(dup))!r} in two bags")
        seen |= bag
        for v in bag:
            if not g.has_vertex(v):
                raise InvalidDecomposition(f"bag {i} mentions unknown vertex {v!r}")
    missing = set(g.vertices()) - seen
    if missing:
        raise InvalidDecomposition(f"vertices not in any bag: {sorted(map(str, missing))}")
    node_of = {}
    for i, bag in enumerate(d.bags):
        for v in bag:
            node_of[v] = i
    cuts: dict = {}
    if d.num_nodes() > 1:
        tree_edges = {frozenset((i, p)) for i, p in enumerate(d.parent) if p != -1}
        for (u, v), m in g.edge_multiplicities():
            a, b = node_of[u], node_of[v]
            if a == b:
                continue
            f = frozenset((a, b))
            if f not in tree_edges:
                raise InvalidDecomposition(
                    f"edge {{{u!r},{v!r}}} joins bags {a} and {b}, not adjacent in the tree"
                )
            cuts[f] = cuts.get(f, 0) + m
    width = max(
        max(len(b) for b in d.bags),
        max(cuts.values(), default=0),
    )
    return WidthReport(
        width=width,
        kind="tree-partition",
        max_bag=max(len(b) for b in d.bags),
        max_cut=max(cuts.values(), default=0),
    )


# -- nice-ification -------------------------------------------------------------


def _thin_violation(g: Multigraph, d: RootedTreeCutDecomposition):
    """Lowest (height, id) thin node with an edge into a sibling subtree.

    Returns (t, target_sibling) or None.
    """
    adh = _adhesions(g, d)
    heights = d.heights()
    unions = [d.subtree_union(t) for t in range(d.num_nodes())]
    nbrs = {}
    for t in range(d.num_nodes()):
        out: set = set()
        for (u, v), _ in g.edge_multiplicities():
            if u in unions[t] and v not in unions[t]:
                out.add(v)
            elif v in unions[t] and u not in unions[t]:
                out.add(u)
        nbrs[t] = out
    candidates = []
    for t in range(d.num_nodes()):
        if adh[t] > 2 or d.parent[t] == -1:
            continue
        sibs = [b for b in d.children(d.parent[t]) if b != t]
        hit = [b for b in sorted(sibs) if nbrs[t] & unions[b]]
        if hit:
            candidates.append(((heights[t], t), t, hit[0]))
    if not candidates:
        return None
    _, t, b = min(candidates)
    return t, b


def make_nice(g: Multigraph, d: RootedTreeCutDecomposition, debug: bool = False) -> RootedTreeCutDecomposition:
    """Re-hang thin nodes below the sibling they touch until nice; width never grows."""
    report = validate_tcd(g, d)
    width = report.width
    budget = max(16, d.num_nodes() ** 2)
    cur = d
    for _ in range(budget):
        viol = _thin_violation(g, cur)
        if viol is None:
            return cur
        t, b = viol
        parent = list(cur.parent)
        parent[t] = b
        cur = RootedTreeCutDecomposition(tuple(parent), cur.bags)
        new_width = validate_tcd(g, cur).width
        if new_width > width:
            raise InvalidDecomposition(
                f"nice-ification move increased width {width} -> {new_width}"
            )
        if debug:
            validate_tcd(g, cur)
        width = new_width
    raise IterationBudgetExceeded(f"nice-ification did not settle in {budget} moves")


def is_nice(g: Multigraph, d: RootedTreeCutDecomposition) -> bool:
    return _thin_violation(g, d) is None


# -- exact small solvers ---------------------------------------------------------


def _cut_size(g: Multigraph, inside: frozenset) -> int:
    cut = 0
    for (u, v), m in g.edge_multiplicities():
        if (u in inside) != (v in inside):
            cut += m
    return cut


def _torso_order(g: Multigraph, bag, parts, outside) -> int:
    """|3-center| of the torso with the given bag, child parts, and parent side."""
    out = Multigraph()
    owner = {}
    nxt = max((v for v in g.vertices() if isinstance(v, int)), default=-1) + 1
    for grp in list(parts) + ([outside] if outside else []):
        if not grp:
            continue
        z = nxt
        nxt += 1
        out.add_vertex(z)
        for v in grp:
            owner[v] = z
    for v in bag:
        out.add_vertex(v)
        owner[v] = v
    for (u, v), m in g.edge_multiplicities():
        a, b = owner[u], owner[v]
        if a != b:
            out.add_edge(a, b, m)
    return three_center(out, bag).num_vertices


def _partitions_of(items: tuple):
    """All set partitions, parts anchored by their smallest element (canonical)."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            part = (first,) + extra
            remaining = tuple(x for x in rest if x not in extra)
            for tail in _partitions_of(remaining):
                yield (part,) + tail


class _TcwSearch:
    """Is tcw(g) <= w? Subset DP over subtree unions, bitmask state.

    A decomposition node is a bag (submask of its subtree union) plus a
    partition of the rest into child subtree unions, each recursively
    feasible with boundary cut <= w; the node passes when the 3-center of
    its torso has order <= w. Parts are pruned during construction, which
    is what makes the enumeration usable.
    """

    def __init__(self, g: Multigraph, w: int, budget):
        self.g = g
        self.w = w
        self.budget = budget
        self.nodes = 0
        self.memo: dict = {}
        self.cut_memo: dict = {}
        self.verts = g.vertices()
        self.index = {v: i for i, v in enumerate(self.verts)}
        self.full = (1 << len(self.verts)) - 1
        self.edges = [
            (1 << self.index[u], 1 << self.index[v], m)
            for (u, v), m in g.edge_multiplicities()
        ]

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExhausted(f"tcw search budget {self.budget} exhausted")

    def cut(self, mask: int) -> int:
        if mask not in self.cut_memo:
            total = 0
            for bu, bv, m in self.edges:
                if bool(mask & bu) != bool(mask & bv):
                    total += m
            self.cut_memo[mask] = total
        return self.cut_memo[mask]

    def _vset(self, mask: int) -> frozenset:
        return frozenset(self.verts[i] for i in range(len(self.verts)) if mask >> i & 1)

    def _torso_ok(self, bag_mask: int, part_masks, outside_mask: int) -> bool:
        parts = [self._vset(p) for p in part_masks]
        outside = self._vset(outside_mask)
        return _torso_order(self.g, self._vset(bag_mask), parts, outside) <= self.w

    def feasible(self, mask: int, is_root: bool):
        """Witness (bag_mask, part_masks) or None; memoized on the mask."""
        key = (mask, is_root)
        if key in self.memo:
            return self.memo[key]
        result = None
        outside = 0 if is_root else self.full & ~mask
        # bags in descending submask order, small |H-tilde| floor |bag| <= w
        bag = mask
        while True:
            self.tick()
            if bin(bag).count("1") <= self.w:
                rest = mask & ~bag
                if rest == 0:
                    if self._torso_ok(bag, [], outside):
                        result = (bag, [])
                elif bag or _has_two_part_split(rest):
                    found = self._split(bag, rest, outside)
                    if found is not None:
                        result = (bag, found)
            if result is not None or bag == 0:
                break
            bag = (bag - 1) & mask
        self.memo[key] = result
        return result

    def _split(self, bag_mask: int, rest: int, outside: int):
        min_parts = 1 if bag_mask else 2
        parts: list = []

        def rec(remaining: int):
            if remaining == 0:
                if len(parts) >= min_parts and self._torso_ok(bag_mask, parts, outside):
                    return list(parts)
                return None
            anchor = remaining & -remaining
            others = remaining & ~anchor
            sub = others
            while True:
                self.tick()
                part = sub | anchor
                # a lone part equal to the whole union (empty bag) can never
                # reach min_parts and would recurse into this same subproblem
                degenerate = min_parts == 2 and not parts and part == rest
                if (
                    not degenerate
                    and self.cut(part) <= self.w
                    and self.feasible(part, False) is not None
                ):
                    parts.append(part)
                    found = rec(remaining & ~part)
                    parts.pop()
                    if found is not None:
                        return found
                if sub == 0:
                    return None
                sub = (sub - 1) & others

        return rec(rest)


def _has_two_part_split(rest: int) -> bool:
    return bin(rest).count("1") >= 2


def exact_tcw_small(g: Multigraph, node_budget: Optional[int] = None, cap: int = 8):
    """Optimal tree-cut width with witness, by exhaustive memoized search."""
    if g.num_vertices > cap:
        raise TooLarge(f"{g.num_vertices} vertices exceed the exact cap {cap}")
    if g.num_vertices == 0:
        raise TooLarge("empty graph has no decomposition")
    for w in range(0, g.num_vertices + g.num_edges + 1):
        search = _TcwSearch(g, w, node_budget)
        found = search.feasible(search.full, True)
        if found is not None:
            d = _materialize_tcd(search, search.full, True)
            report = validate_tcd(g, d)
            if report.width != w:  # internal consistency with the validator
                raise InvalidDecomposition(
                    f"solver width {w} but validator reports {report.width}"
                )
            return w, d
    raise InvalidDecomposition("unreachable: single-bag decomposition always exists")


def _materialize_tcd(search: _TcwSearch, mask: int, is_root: bool) -> RootedTreeCutDecomposition:
    parent: list = []
    bags: list = []

    def build(sub: int, root_flag: bool, parent_id: int) -> None:
        entry = search.memo.get((sub, root_flag))
        if entry is None:
            entry = search.feasible(sub, root_flag)
        bag, parts = entry
        me = len(parent)
        parent.append(parent_id)
        bags.append(search._vset(bag))
        for part in parts:
            build(part, False, me)

    build(mask, is_root, -1)
    return RootedTreeCutDecomposition(tuple(parent), tuple(bags))


def exact_tpw_small(g: Multigraph, node_budget: Optional[int] = None, cap: int = 8):
    """Optimal tree-partition width with witness.

    For a fixed partition, a valid tree must contain every bag-quotient edge,
    so feasibility is exactly quotient-acyclicity and the width is partition
    determined; the search is over set partitions only.
    """
    if g.num_vertices > cap:
        raise TooLarge(f"{g.num_vertices} vertices exceed the exact cap {cap}")
    if g.num_vertices == 0:
        raise TooLarge("empty graph has no partition")
    verts = tuple(g.vertices())
    best = None
    best_parts = None
    nodes = 0
    for parts in _partitions_of(verts):
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise BudgetExhausted(f"tpw search budget {node_budget} exhausted")
        width = max(len(p) for p in parts)
        if best is not None and width >= best:
            continue
        node_of = {}
        for i, p in enumerate(parts):
            for v in p:
                node_of[v] = i
        cuts: dict = {}
        acyclic = True
        dsu = list(range(len(parts)))

        def find(x):
            while dsu[x] != x:
                dsu[x] = dsu[dsu[x]]
                x = dsu[x]
            return x

        for (u, v), m in g.edge_multiplicities():
            a, b = node_of[u], node_of[v]
            if a == b:
                continue
            key = frozenset((a, b))
            if key not in cuts:
                ra, rb = find(a), find(b)
                if ra == rb:
                    acyclic = False
                    break
                dsu[ra] = rb
            cuts[key] = cuts.get(key, 0) + m
        if not acyclic:
            continue
        width = max(width, max(cuts.values(), default=0))
        if best is None or width < best:
            best, best_parts = width, parts
    d = _tree_from_partition(g, best_parts)
    report = validate_partition(g, d)
    if report.width != best:
        raise InvalidDecomposition(f"solver width {best} but validator reports {report.width}")
    return best, d


def _tree_from_partition(g: Multigraph, parts) -> RootedTreePartition:
    node_of = {}
    for i, p in enumerate(parts):
        for v in p:
            node_of[v] = i
    n = len(parts)
    adj = [set() for _ in range(n)]
    for (u, v), _ in g.edge_multiplicities():
        a, b = node_of[u], node_of[v]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    parent = [-2] * n
    order = []
    for start in range(n):
        if parent[start] != -2:
            continue
        parent[start] = -1 if not order else order[0]  # chain extra components to node 0
        stack = [start]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in sorted(adj[x]):
                if parent[y] == -2:
                    parent[y] = x
                    stack.append(y)
    return RootedTreePartition(tuple(parent), tuple(frozenset(p) for p in parts))


def heuristic_tcd(g: Multigraph) -> RootedTreeCutDecomposition:
    """DFS-tree with singleton bags; valid and deterministic, no optimality claim."""
    if g.num_vertices == 0:
        raise TooLarge("empty graph has no decomposition")
    verts = g.vertices()
    index = {v: i for i, v in enumerate(verts)}
    node_of = {}
    parent: list = []
    bags: list = []
    seen: set = set()
    for start in verts:
        if start in seen:
            continue
        seen.add(start)
        node_of[start] = len(parent)
        parent.append(-1 if not parent else 0)  # chain component roots under node 0
        bags.append(frozenset([start]))
        stack = [start]
        while stack:
            x = stack[-1]
            nxt = None
            for y in sorted(g.neighbors(x), key=index.__getitem__):
                if y not in seen:
                    nxt = y
                    break
            if nxt is None:
                stack.pop()
                continue
            seen.add(nxt)
            node_of[nxt] = len(parent)
            parent.append(node_of[x])
            bags.append(frozenset([nxt]))
            stack.append(nxt)
    return RootedTreeCutDecomposition(tuple(parent), tuple(bags))


# -- exact treewidth (underlying simple graph) -----------------------------------


def _simple_adj(g: Multigraph) -> dict:
    return {v: set(g.neighbors(v)) for v in g.vertices()}


def exact_treewidth_small(g: Multigraph, cap: int = 10) -> int:
    """Minimum over elimination orderings of the maximum elimination degree."""
    if g.num_vertices > cap:
        raise TooLarge(f"{g.num_vertices} vertices exceed the exact cap {cap}")
    verts = g.vertices()
    n = len(verts)
    if n == 0:
        return 0
    index = {v: i for i, v in enumerate(verts)}
    nbr = [0] * n
    for v in verts:
        for w in g.neighbors(v):
            nbr[index[v]] |= 1 << index[w]

    full = (1 << n) - 1

    def elim_degree(remaining: int, v: int) -> int:
        """Neighbors of v inside `remaining`, joining through eliminated vertices."""
        seen = 1 << v
        stack = [v]
        deg_mask = 0
        while stack:
            x = stack.pop()
            m = nbr[x] & ~seen
            seen |= m
            inside = m & remaining
            deg_mask |= inside
            outside = m & ~remaining
            while outside:
                y = (outside & -outside).bit_length() - 1
                outside &= outside - 1
                stack.append(y)
        return bin(deg_mask).count("1")

    best = {0: 0}
    for size in range(1, n + 1):
        cur = {}
        for remaining in itertools.combinations(range(n), size):
            mask = 0
            for i in remaining:
                mask |= 1 << i
            val = None
            for v in remaining:
                sub = best[mask & ~(1 << v)]
                d = elim_degree(mask, v)
                cand = max(sub, d)
                if val is None or cand < val:
                    val = cand
            cur[mask] = val
        best.update(cur)
    return best[full]


# -- JSON round trip --------------------------------------------------------------


def decomposition_to_json_dict(g: Multigraph, d: RootedTreeCutDecomposition) -> dict:
    kind = "tree-partition" if isinstance(d, RootedTreePartition) else "tree-cut"
    width = (
        validate_partition(g, d).width if kind == "tree-partition" else validate_tcd(g, d).width
    )
    return {
        "schema": DECOMP_SCHEMA,
        "kind": kind,
        "parent": list(d.parent),
        "bags": [sorted(b, key=str) for b in d.bags],
        "width": width,
    }


def decomposition_from_json_dict(g: Multigraph, data: dict) -> RootedTreeCutDecomposition:
    cls = RootedTreePartition if data["kind"] == "tree-partition" else RootedTreeCutDecomposition
    d = cls(tuple(data["parent"]), tuple(frozenset(b) for b in data["bags"]))
    width = (
        validate_partition(g, d).width
        if data["kind"] == "tree-partition"
        else validate_tcd(g, d).width
    )
    if width != data["width"]:
        raise InvalidDecomposition(
            f"stored width {data['width']} does not match recomputed {width}"
        )
    return d


def save_decomposition(path, g: Multigraph, d: RootedTreeCutDecomposition) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(decomposition_to_json_dict(g, d), fh, sort_keys=True, indent=2)


def load_decomposition(path, g: Multigraph) -> RootedTreeCutDecomposition:
    with open(path, "r", encoding="utf-8") as fh:
        return decomposition_from_json_dict(g, json.load(fh))
