"""Immersion / strong-immersion / topological-minor models: validation,
exhaustive search, brute-force packing and covering oracles, and the
explicit grid-in-doubled-wall model.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import backend
from .errors import BadSize, BudgetExhausted, MalformedModel, MissingEdge
from .generators import wall_plus
from .multigraph import EdgeRef, Multigraph

MODES = ("immersion", "strong", "topological-minor")
_MODE_CODE = {"immersion": 0, "strong": 1, "topological-minor": 2}

MODEL_SCHEMA = "immersionep-model-v1"


@dataclass(frozen=True)
class ImmersionModel:
    """Injective branch map plus one certifying path per pattern edge instance."""

    phi: dict
    psi: dict  # H EdgeRef -> tuple of G EdgeRefs
    mode: str = "immersion"

    def branch_vertices(self):
        return set(self.phi.values())

    def to_json_dict(self) -> dict:
        return {
            "schema": MODEL_SCHEMA,
            "mode": self.mode,
            "phi": [[hv, gv] for hv, gv in self.phi.items()],
            "psi": [
                {"edge": list(he), "path": [list(r) for r in path]}
                for he, path in self.psi.items()
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "ImmersionModel":
        phi = {hv: gv for hv, gv in d["phi"]}
        psi = {
            EdgeRef(*entry["edge"]): tuple(EdgeRef(*r) for r in entry["path"])
            for entry in d["psi"]
        }
        return ImmersionModel(phi=phi, psi=psi, mode=d["mode"])

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @staticmethod
    def loads(text: str) -> "ImmersionModel":
        return ImmersionModel.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    mode: str
    checks: dict
    witness: Optional[str] = None

    def __bool__(self):
        return self.valid


class BudgetPool:
    """Shared node budget across the kernel calls of one operation."""

    def __init__(self, budget: Optional[int]):
        self.budget = budget
        self.used = 0

    def remaining(self) -> int:
        if self.budget is None:
            return -1
        left = self.budget - self.used
        if left < 0:
            raise BudgetExhausted(f"budget {self.budget} exhausted")
        return left

    def charge(self, nodes: int) -> None:
        self.used += nodes
        if self.budget is not None and self.used > self.budget:
            raise BudgetExhausted(f"budget {self.budget} exhausted")


# -- dense encoding for the kernel -------------------------------------------


class _HostArrays(NamedTuple):
    verts: list
    index: dict
    adj_start: list
    adj_nbr: list
    adj_pid: list
    pairs: list  # canonical pair per pid
    pair_mult: list
    mdeg: list


def _host_arrays(g: Multigraph) -> _HostArrays:
    verts = g.vertices()
    index = {v: i for i, v in enumerate(verts)}
    pairs, pair_mult = [], []
    pid_of = {}
    for (u, v), m in g.edge_multiplicities():
        pid_of[(u, v)] = len(pairs)
        pairs.append((u, v))
        pair_mult.append(m)
    adj_lists = [[] for _ in verts]
    for (u, v), _ in g.edge_multiplicities():
        pid = pid_of[(u, v)]
        adj_lists[index[u]].append((index[v], pid))
        adj_lists[index[v]].append((index[u], pid))
    adj_start, adj_nbr, adj_pid = [0], [], []
    for lst in adj_lists:
        lst.sort()
        for w, pid in lst:
            adj_nbr.append(w)
            adj_pid.append(pid)
        adj_start.append(len(adj_nbr))
    mdeg = [g.mdeg(v) for v in verts]
    return _HostArrays(verts, index, adj_start, adj_nbr, adj_pid, pairs, pair_mult, mdeg)


class _PatternArrays(NamedTuple):
    verts: list
    index: dict
    mdeg: list
    inst_a: list
    inst_b: list
    same_pair: list
    h_refs: list  # H EdgeRef per instance, canonical order


def _pattern_arrays(h: Multigraph) -> _PatternArrays:
    if h.num_edges < 1:
        raise ValueError("pattern needs at least one edge")
    if not h.is_connected():
        raise ValueError("pattern must be connected")
    verts = h.vertices()
    index = {v: i for i, v in enumerate(verts)}
    mdeg = [h.mdeg(v) for v in verts]
    # vertex priority: descending multidegree, insertion order breaking ties
    pos = {}
    for rank, v in enumerate(sorted(verts, key=lambda v: (-h.mdeg(v), index[v]))):
        pos[v] = rank
    pending = []
    for pnum, ((u, v), m) in enumerate(h.edge_multiplicities()):
        for i in range(1, m + 1):
            pending.append((u, v, i, pnum))
    anchor = min(verts, key=lambda v: pos[v])
    seen = {anchor}
    order = []
    while pending:
        best = None
        best_key = None
        for entry in pending:
            u, v, i, pnum = entry
            if u not in seen and v not in seen:
                continue
            sp = min(pos[x] for x in (u, v) if x in seen)
            op = max(pos[u], pos[v]) if (u in seen and v in seen) else pos[v if u in seen else u]
            key = (sp, op, pnum, i)
            if best_key is None or key < best_key:
                best, best_key = entry, key
        u, v, i, pnum = best
        pending.remove(best)
        first = u if (u in seen and (v not in seen or pos[u] <= pos[v])) else v
        second = v if first == u else u
        order.append((first, second, (u, v, i)))
        seen.update((u, v))
    inst_a = [index[a] for a, _, _ in order]
    inst_b = [index[b] for _, b, _ in order]
    h_refs = [EdgeRef(*ref) for _, _, ref in order]
    same_pair = [0] * len(order)
    for i in range(1, len(order)):
        if (h_refs[i].u, h_refs[i].v) == (h_refs[i - 1].u, h_refs[i - 1].v):
            same_pair[i] = 1
    return _PatternArrays(verts, index, mdeg, inst_a, inst_b, same_pair, h_refs)


def _raw_to_model(host: _HostArrays, pat: _PatternArrays, raw, mode: str) -> ImmersionModel:
    phi_arr, paths = raw
    phi = {pat.verts[i]: host.verts[phi_arr[i]] for i in range(len(pat.verts))}
    counters: dict = {}
    psi = {}
    for ei, path in enumerate(paths):
        refs = []
        for a, b in zip(path, path[1:]):
            u, v = host.verts[a], host.verts[b]
            key = (u, v) if host.index[u] <= host.index[v] else (v, u)
            counters[key] = counters.get(key, 0) + 1
            refs.append(EdgeRef(key[0], key[1], counters[key]))
        psi[pat.h_refs[ei]] = tuple(refs)
    return ImmersionModel(phi=phi, psi=psi, mode=mode)


def _run_kernel(g, h, mode, pool: BudgetPool, find_all: bool, max_models: int = -1):
    host = _host_arrays(g)
    pat = _pattern_arrays(h)
    status, models, nodes = backend.search_models(
        len(host.verts),
        host.adj_start,
        host.adj_nbr,
        host.adj_pid,
        host.pair_mult,
        host.mdeg,
        len(pat.verts),
        pat.mdeg,
        pat.inst_a,
        pat.inst_b,
        pat.same_pair,
        _MODE_CODE[mode],
        pool.remaining(),
        find_all,
        max_models,
    )
    pool.charge(nodes)
    return status, [(host, pat, raw) for raw in models]


# -- public search operations -------------------------------------------------


def find_expansion(
    g: Multigraph, h: Multigraph, mode: str = "immersion", budget: Optional[int] = None
) -> Optional[ImmersionModel]:
    """First model in canonical search order, or None (definitive) if none exists.

    Raises BudgetExhausted when the node budget is hit before an answer.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if h.num_vertices > g.num_vertices or h.num_edges > g.num_edges:
        return None
    pool = BudgetPool(budget)
    try:
        status, found = _run_kernel(g, h, mode, pool, find_all=False)
    except BudgetExhausted:
        raise
    if status == backend.BUDGET:
        raise BudgetExhausted("search interrupted before a definitive answer")
    if not found:
        return None
    return _raw_to_model(*found[0], mode=mode)


def expansion_vertices(model: ImmersionModel) -> set:
    vs = set(model.phi.values())
    for path in model.psi.values():
        for r in path:
            vs.add(r.u)
            vs.add(r.v)
    return vs


def expansion_edge_counts(model: ImmersionModel) -> dict:
    """Multiset of used pairs: unordered pair -> count."""
    counts: dict = {}
    for path in model.psi.values():
        for r in path:
            key = frozenset((r.u, r.v))
            counts[key] = counts.get(key, 0) + 1
    return counts


def expansion_subgraph(g: Multigraph, model: ImmersionModel) -> Multigraph:
    """The expansion: branch and path vertices, path edges as a multiset."""
    sub = Multigraph()
    for v in g.vertices():
        if v in model.phi.values():
            sub.add_vertex(v)
    for path in model.psi.values():
        for r in path:
            sub.add_vertex(r.u)
            sub.add_vertex(r.v)
    for key, c in expansion_edge_counts(model).items():
        u, v = tuple(key)
        sub.add_edge(u, v, c)
    return sub


def enumerate_expansions(
    g: Multigraph,
    h: Multigraph,
    mode: str = "immersion",
    budget: Optional[int] = None,
    dedup: bool = True,
    disjointness: str = "edge",
    max_models: int = -1,
):
    """All models (dedup collapses equal expansions); returns (models, complete).

    With dedup, one witness is kept per expansion edge multiset (plus vertex
    set when disjointness='vertex'), in canonical search order.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if h.num_vertices > g.num_vertices or h.num_edges > g.num_edges:
        return [], True
    pool = BudgetPool(budget)
    status, found = _run_kernel(g, h, mode, pool, find_all=True, max_models=max_models)
    complete = status == backend.COMPLETE
    models = [_raw_to_model(*f, mode=mode) for f in found]
    if dedup:
        seen = set()
        unique = []
        for m in models:
            sig = tuple(
                sorted((tuple(sorted(k, key=str)), c) for k, c in expansion_edge_counts(m).items())
            )
            if disjointness == "vertex":
                sig = (tuple(sorted(expansion_vertices(m), key=str)), sig)
            if sig not in seen:
                seen.add(sig)
                unique.append(m)
        models = unique
    return models, complete


@dataclass
class PackingResult:
    models: list
    exact: bool
    budget_exhausted: bool = False

    @property
    def size(self) -> int:
        return len(self.models)


def _edge_usage(model: ImmersionModel) -> dict:
    return expansion_edge_counts(model)


def _reindex_packing(g: Multigraph, models: list) -> list:
    """Give packed models pairwise-distinct instance indices within g."""
    counters: dict = {}
    out = []
    for m in models:
        psi = {}
        for he, path in m.psi.items():
            refs = []
            for r in path:
                key = frozenset((r.u, r.v))
                counters[key] = counters.get(key, 0) + 1
                if counters[key] > g.mult(r.u, r.v):
                    raise MalformedModel("packing exceeds multiplicity; models not disjoint")
                refs.append(EdgeRef(r.u, r.v, counters[key]))
            psi[he] = tuple(refs)
        out.append(ImmersionModel(phi=m.phi, psi=psi, mode=m.mode))
    return out


def max_packing(
    g: Multigraph,
    h: Multigraph,
    mode: str = "immersion",
    disjointness: str = "edge",
    budget: Optional[int] = None,
) -> PackingResult:
    """Maximum family of pairwise disjoint expansions (exact when unbudgeted).

    Enumerates all distinct expansions, then solves the selection problem by
    branch and bound. On budget exhaustion a greedy witness list is returned,
    flagged as a lower bound only.
    """
    if disjointness not in ("edge", "vertex"):
        raise ValueError(f"unknown disjointness {disjointness!r}")
    models, complete = enumerate_expansions(
        g, h, mode=mode, budget=budget, dedup=True, disjointness=disjointness
    )
    if not models:
        return PackingResult([], exact=complete, budget_exhausted=not complete)
    if disjointness == "edge":
        chosen = _max_edge_disjoint(g, h, models)
        chosen = _reindex_packing(g, chosen)
    else:
        chosen = _max_vertex_disjoint(g, h, models)
    if not complete:
        return PackingResult(chosen, exact=False, budget_exhausted=True)
    return PackingResult(chosen, exact=True)


def _max_edge_disjoint(g: Multigraph, h: Multigraph, models: list) -> list:
    usages = [_edge_usage(m) for m in models]
    caps = {frozenset(p): m for p, m in g.edge_multiplicities()}
    e_h = h.num_edges
    best: list = []

    def dfs(i, caps_left, chosen, cap_total):
        nonlocal best
        if len(chosen) + cap_total // e_h <= len(best):
            return
        if i == len(models):
            if len(chosen) > len(best):
                best = list(chosen)
            return
        use = usages[i]
        copies = min(caps_left[k] // c for k, c in use.items())
        need = sum(use.values())
        for c in range(copies, -1, -1):
            if c:
                for k, cnt in use.items():
                    caps_left[k] -= cnt * c
                chosen.extend([models[i]] * c)
            dfs(i + 1, caps_left, chosen, cap_total - need * c)
            if c:
                for k, cnt in use.items():
                    caps_left[k] += cnt * c
                del chosen[len(chosen) - c :]

    dfs(0, dict(caps), [], sum(caps.values()))
    return best


def _max_vertex_disjoint(g: Multigraph, h: Multigraph, models: list) -> list:
    vsets = [frozenset(expansion_vertices(m)) for m in models]
    n_h = h.num_vertices
    best: list = []

    def dfs(i, used, chosen, free):
        nonlocal best
        if len(chosen) + free // n_h <= len(best):
            return
        if i == len(models):
            if len(chosen) > len(best):
                best = list(chosen)
            return
        vs = vsets[i]
        if not (vs & used):
            chosen.append(models[i])
            dfs(i + 1, used | vs, chosen, free - len(vs))
            chosen.pop()
        dfs(i + 1, used, chosen, free)

    dfs(0, frozenset(), [], g.num_vertices)
    return best


def min_cover(
    g: Multigraph,
    h: Multigraph,
    mode: str = "immersion",
    disjointness: str = "edge",
    budget: Optional[int] = None,
) -> list:
    """Minimum cover by plain enumeration: cardinality 0, 1, 2, ...

    Candidates are restricted to elements touched by at least one expansion
    of g (removing anything else cannot help), enumerated lexicographically;
    the first hitting set whose removal leaves g expansion-free is returned.
    Edge covers are canonical: per pair, instances 1..c.
    """
    if disjointness not in ("edge", "vertex"):
        raise ValueError(f"unknown disjointness {disjointness!r}")
    pool = BudgetPool(budget)
    if h.num_vertices > g.num_vertices or h.num_edges > g.num_edges:
        return []
    status, found = _run_kernel(g, h, mode, pool, find_all=True)
    if status != backend.COMPLETE:
        raise BudgetExhausted("model enumeration for cover candidates interrupted")
    if not found:
        return []
    models = [_raw_to_model(*f, mode=mode) for f in found]
    if disjointness == "edge":
        relevant_pairs = set()
        for m in models:
            relevant_pairs.update(expansion_edge_counts(m))
        candidates = [
            EdgeRef(u, v, i)
            for (u, v), mm in g.edge_multiplicities()
            if frozenset((u, v)) in relevant_pairs
            for i in range(1, mm + 1)
        ]
    else:
        relevant = set()
        for m in models:
            relevant.update(expansion_vertices(m))
        candidates = [v for v in g.vertices() if v in relevant]
    for c in range(len(candidates) + 1):
        for combo in itertools.combinations(range(len(candidates)), c):
            if disjointness == "edge" and not _prefix_canonical(candidates, combo):
                continue
            subset = [candidates[i] for i in combo]
            if disjointness == "edge":
                reduced = g.without_edge_instances(subset)
            else:
                reduced = g.without_vertices(subset)
            if reduced.num_edges < h.num_edges:
                return subset
            status, hit = _run_kernel(reduced, h, mode, pool, find_all=False)
            if status != backend.COMPLETE:
                raise BudgetExhausted("cover emptiness check interrupted")
            if not hit:
                return subset
    return candidates  # unreachable: removing every candidate always covers


def _prefix_canonical(candidates, combo) -> bool:
    """Per pair, the chosen instance indices must be 1..j (instances are interchangeable)."""
    per_pair: dict = {}
    for i in combo:
        r = candidates[i]
        per_pair.setdefault((r.u, r.v), []).append(r.index)
    return all(sorted(ix) == list(range(1, len(ix) + 1)) for ix in per_pair.values())


# -- model validation ----------------------------------------------------------


def validate_model(g: Multigraph, h: Multigraph, model: ImmersionModel) -> ValidityReport:
    """Check every defining clause; reports, never raises, on well-formed input."""
    mode = model.mode
    if mode not in MODES:
        raise MalformedModel(f"unknown mode {mode!r}")
    for hv in model.phi:
        if not h.has_vertex(hv):
            raise MalformedModel(f"phi key {hv!r} not in pattern")
    for gv in model.phi.values():
        if not g.has_vertex(gv):
            raise MalformedModel(f"phi value {gv!r} not in host")
    for he, path in model.psi.items():
        try:
            h.edge_ref(he[0], he[1], he[2])
        except MissingEdge as exc:
            raise MalformedModel(f"psi key {he} not an edge instance of the pattern") from exc
        for r in path:
            try:
                g.edge_ref(r.u, r.v, r.index)
            except MissingEdge as exc:
                raise MalformedModel(f"psi path edge {r} not in host") from exc
    checks = {}
    witness = None

    def fail(name, w):
        nonlocal witness
        checks[name] = False
        if witness is None:
            witness = w

    # phi total and injective
    if set(model.phi) == set(h.vertices()):
        checks["phi-total"] = True
    else:
        fail("phi-total", f"phi domain != V(H): missing {set(h.vertices()) - set(model.phi)}")
    if len(set(model.phi.values())) == len(model.phi):
        checks["phi-injective"] = True
    else:
        seen: dict = {}
        w = None
        for k, v in model.phi.items():
            if v in seen:
                w = f"phi({seen[v]!r}) = phi({k!r}) = {v!r}"
                break
            seen[v] = k
        fail("phi-injective", w)
    # psi covers exactly the instances of H
    want = {h.edge_ref(u, v, i) for (u, v), m in h.edge_multiplicities() for i in range(1, m + 1)}
    got = {h.edge_ref(e[0], e[1], e[2]) for e in model.psi}
    if want == got and len(model.psi) == len(want):
        checks["psi-total"] = True
    else:
        fail("psi-total", f"psi instances differ from E(H) by {want ^ got}")

    # each path: a simple path between the right branch vertices
    paths_ok = True
    internals = []
    used_refs: dict = {}
    reuse_witness = None
    for he, path in model.psi.items():
        hu, hv = he[0], he[1]
        a = model.phi.get(hu)
        b = model.phi.get(hv)
        seq = _walk_sequence(path, a)
        if seq is None or seq[-1] != b or len(path) == 0:
            paths_ok = False
            if witness is None:
                witness = f"psi({he}) is not a path from phi({hu!r}) to phi({hv!r})"
            continue
        if len(set(seq)) != len(seq):
            paths_ok = False
            if witness is None:
                witness = f"psi({he}) revisits a vertex"
        internals.append((he, seq[1:-1]))
        for r in path:
            key = (g.pair_key(r.u, r.v), r.index)
            if key in used_refs:
                reuse_witness = f"edge {r} used by {used_refs[key]} and {he}"
            used_refs[key] = he
    checks["paths-connect"] = paths_ok
    if not paths_ok and witness is None:
        witness = "certifying path mismatch"
    if reuse_witness is None:
        checks["edge-disjoint"] = True
    else:
        fail("edge-disjoint", reuse_witness)

    branch = set(model.phi.values())
    if mode in ("strong", "topological-minor"):
        ok = True
        for he, inner in internals:
            hit = branch.intersection(inner)
            if hit:
                ok = False
                if witness is None:
                    witness = f"branch vertex {next(iter(hit))!r} internal to psi({he})"
                break
        checks["no-internal-branch"] = ok
    if mode == "topological-minor":
        ok = True
        seen_internal: dict = {}
        for he, inner in internals:
            for x in inner:
                if x in seen_internal and seen_internal[x] != he:
                    ok = False
                    if witness is None:
                        witness = f"vertex {x!r} internal to psi({seen_internal[x]}) and psi({he})"
                    break
                seen_internal[x] = he
            if not ok:
                break
        checks["internally-vertex-disjoint"] = ok

    # multidegree bound at branch vertices (implied, asserted anyway)
    ok = True
    for hv, gv in model.phi.items():
        if h.mdeg(hv) > g.mdeg(gv):
            ok = False
            if witness is None:
                witness = f"mdeg_H({hv!r})={h.mdeg(hv)} > mdeg_G({gv!r})={g.mdeg(gv)}"
            break
    checks["branch-multidegree"] = ok

    return ValidityReport(valid=all(checks.values()), mode=mode, checks=checks, witness=witness)


def _walk_sequence(path, start):
    """Vertex sequence of a chain of edge refs starting at `start`, or None."""
    seq = [start]
    cur = start
    for r in path:
        if r.u == cur:
            cur = r.v
        elif r.v == cur:
            cur = r.u
        else:
            return None
        seq.append(cur)
    return seq


def restrict_model(model: ImmersionModel, h: Multigraph, keep_vertices) -> tuple:
    """Model of the induced sub-pattern on keep_vertices; returns (H_sub, model_sub)."""
    keep = set(keep_vertices)
    h_sub = h.induced(keep)
    phi = {v: gv for v, gv in model.phi.items() if v in keep}
    psi = {he: p for he, p in model.psi.items() if he[0] in keep and he[1] in keep}
    return h_sub, ImmersionModel(phi=phi, psi=psi, mode=model.mode)


def components_met(g: Multigraph, x_set, model: ImmersionModel) -> int:
    """Number of components of g minus X that the expansion touches."""
    reduced = g.without_vertices(x_set)
    comp_of = {}
    for i, comp in enumerate(reduced.connected_components()):
        for v in comp:
            comp_of[v] = i
    met = {comp_of[v] for v in expansion_vertices(model) if v in comp_of}
    return len(met)


# -- explicit grid model in the doubled wall ----------------------------------


class GridWallModel(NamedTuple):
    host: Multigraph
    host_coords: object
    grid: Multigraph
    grid_coords: dict  # hosted-grid vertex id -> (row i, col j), j in [0, k]
    model: ImmersionModel


def grid_in_wallplus(k: int) -> GridWallModel:
    """Strong-immersion model of a square grid on the branch lattice
    {(i, 2j+1) : 1 <= i <= k+1, 0 <= j <= k} of the doubled wall.

    For even k the wall's pruning removes lattice point (k+1, 1); the hosted
    grid then misses that one corner but still contains the k x k grid by
    restriction. Horizontal pattern edges ride along wall rows; vertical
    ones use the wall's vertical edges where parity admits them, second
    copies of doubled edges otherwise, and the spare rightmost column for
    the last grid column.
    """
    if k < 2:
        raise BadSize(f"grid_in_wallplus needs k >= 2, got {k}")
    host, coords = wall_plus(k)
    at = coords.at

    lattice = {}
    for i in range(1, k + 2):
        for j in range(0, k + 1):
            if (i, 2 * j + 1) in at:
                lattice[(i, j)] = at[(i, 2 * j + 1)]

    grid_g = Multigraph()
    grid_coords = {}
    gid = {}
    nxt = 1
    for (i, j) in sorted(lattice):
        gid[(i, j)] = nxt
        grid_coords[nxt] = (i, j)
        grid_g.add_vertex(nxt)
        nxt += 1
    h_edges = []
    for (i, j) in sorted(lattice):
        if (i, j + 1) in lattice:
            grid_g.add_edge(gid[(i, j)], gid[(i, j + 1)])
            h_edges.append(((i, j), (i, j + 1)))
        if (i + 1, j) in lattice:
            grid_g.add_edge(gid[(i, j)], gid[(i + 1, j)])
            h_edges.append(((i, j), (i + 1, j)))

    def ref(x1, y1, x2, y2, idx):
        return host.edge_ref(at[(x1, y1)], at[(x2, y2)], idx)

    psi = {}
    for (p, q) in h_edges:
        (i, j), (i2, j2) = p, q
        he = grid_g.edge_ref(gid[p], gid[q], 1)
        if i == i2:  # horizontal: (i,2j+1) - (i,2j+2) - (i,2j+3)
            psi[he] = (
                ref(i, 2 * j + 1, i, 2 * j + 2, 1),
                ref(i, 2 * j + 2, i, 2 * j + 3, 1),
            )
        elif i % 2 == 1:  # direct vertical edge exists at odd rows
            psi[he] = (ref(i, 2 * j + 1, i + 1, 2 * j + 1, 1),)
        elif j < k:  # detour right through the doubled column pair (2j+1, 2j+2)
            psi[he] = (
                ref(i, 2 * j + 1, i, 2 * j + 2, 2),
                ref(i, 2 * j + 2, i + 1, 2 * j + 2, 1),
                ref(i + 1, 2 * j + 2, i + 1, 2 * j + 1, 2),
            )
        else:  # last column: use the spare gutter column 2k+2 (single edges)
            psi[he] = (
                ref(i, 2 * k + 1, i, 2 * k + 2, 1),
                ref(i, 2 * k + 2, i + 1, 2 * k + 2, 1),
                ref(i + 1, 2 * k + 2, i + 1, 2 * k + 1, 1),
            )
    phi = {gid[p]: lattice[p] for p in lattice}
    model = ImmersionModel(phi=phi, psi=psi, mode="strong")
    return GridWallModel(host, coords, grid_g, grid_coords, model)
