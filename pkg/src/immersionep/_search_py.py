"""Pure-Python search kernel for immersion-model enumeration.

Backtracking over pattern edge instances in a fixed connected order: branch
vertices are assigned lazily (a certifying path may end at any admissible
host vertex, which then becomes the image of the pattern endpoint), and
paths are enumerated depth-first over unused edge capacity with ascending
neighbor order. Parallel pattern instances are forced into nondecreasing
lexicographic path order, which removes permutation-equivalent duplicates
without losing completeness.

The compiled twin (`_search_c.pyx`) mirrors this file statement for
statement; behavioral changes must be made in both.

Host/pattern come in as flat integer arrays (dense vertex indices). Modes:
0 immersion, 1 strong immersion, 2 topological minor.
"""

COMPLETE = 0
BUDGET = 2


def search_models(
    n,
    adj_start,
    adj_nbr,
    adj_pid,
    pair_mult,
    mdeg_g,
    hn,
    mdeg_h,
    inst_a,
    inst_b,
    same_pair,
    mode,
    budget,
    find_all,
    max_models,
):
    """Enumerate (phi, paths) models; returns (status, models, nodes).

    status COMPLETE means the answer is definitive (first model found, or
    the space was exhausted); BUDGET means the node budget (or max_models
    cap) interrupted the search. Each model is (phi tuple, tuple of vertex
    sequences, one per instance in canonical order).
    """
    n_inst = len(inst_a)
    phi = [-1] * hn
    inv = [-1] * n
    cap = list(pair_mult)
    on_path = [0] * n
    internal = [0] * n
    rem_deg = list(mdeg_h)
    paths = []
    cur = []
    models = []
    nodes = [0]

    def tick():
        nodes[0] += 1
        return budget >= 0 and nodes[0] > budget

    def free_cap(w):
        total = 0
        for t in range(adj_start[w], adj_start[w + 1]):
            total += cap[adj_pid[t]]
        return total

    def admissible(w, hv, slack):
        # slack 1 when the arrival edge is already booked, 0 at the anchor
        if inv[w] >= 0 or mdeg_g[w] < mdeg_h[hv]:
            return False
        if mode != 0 and internal[w] > 0:
            return False
        return free_cap(w) + slack >= rem_deg[hv]

    def advance(ei):
        if ei == n_inst:
            models.append((tuple(phi), tuple(tuple(p) for p in paths)))
            if not find_all:
                return 1
            if 0 <= max_models <= len(models):
                return 2
            return 0
        return route(ei)

    def route(ei):
        a = phi[inst_a[ei]]
        cur.append(a)
        on_path[a] = 1
        r = extend(ei, a)
        on_path[a] = 0
        cur.pop()
        return r

    def commit(ei, w, assign_pb):
        # parallel instances of one pattern multiedge in nondecreasing order
        if same_pair[ei] and cur + [w] < paths[ei - 1]:
            return 0
        pa, pb = inst_a[ei], inst_b[ei]
        if assign_pb:
            phi[pb] = w
            inv[w] = pb
        rem_deg[pa] -= 1
        rem_deg[pb] -= 1
        for i in range(1, len(cur)):
            internal[cur[i]] += 1
        paths.append(cur + [w])
        # suspend the current path: deeper instances build their own
        saved = cur[:]
        for x in saved:
            on_path[x] = 0
        cur[:] = []
        r = advance(ei + 1)
        cur[:] = saved
        for x in saved:
            on_path[x] = 1
        paths.pop()
        for i in range(1, len(cur)):
            internal[cur[i]] -= 1
        rem_deg[pa] += 1
        rem_deg[pb] += 1
        if assign_pb:
            phi[pb] = -1
            inv[w] = -1
        return r

    def extend(ei, u):
        pb = inst_b[ei]
        for t in range(adj_start[u], adj_start[u + 1]):
            pid = adj_pid[t]
            if cap[pid] == 0:
                continue
            w = adj_nbr[t]
            if on_path[w]:
                continue
            if tick():
                return 2
            b = phi[pb]
            cap[pid] -= 1
            if b >= 0:
                if w == b:
                    r = commit(ei, w, False)
                    if r:
                        cap[pid] += 1
                        return r
            elif admissible(w, pb, 1):
                r = commit(ei, w, True)
                if r:
                    cap[pid] += 1
                    return r
            # pass through w and keep walking
            if w != b and (mode == 0 or inv[w] < 0) and (mode != 2 or internal[w] == 0):
                on_path[w] = 1
                cur.append(w)
                r = extend(ei, w)
                cur.pop()
                on_path[w] = 0
                if r:
                    cap[pid] += 1
                    return r
            cap[pid] += 1
        return 0

    # anchor: assign the first pattern vertex over all admissible hosts
    status = COMPLETE
    pa0 = inst_a[0] if n_inst else -1
    if n_inst == 0:
        return COMPLETE, [], 0
    for w in range(n):
        if tick():
            status = BUDGET
            break
        if admissible(w, pa0, 0):
            phi[pa0] = w
            inv[w] = pa0
            r = route(0)
            phi[pa0] = -1
            inv[w] = -1
            if r == 1:
                break
            if r == 2:
                status = BUDGET
                break
    return status, models, nodes[0]
