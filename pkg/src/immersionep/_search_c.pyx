# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of `_search_py`: identical semantics, C-typed state.

Any behavioral change here must be mirrored in `_search_py.py`; the parity
test suite runs both backends on the same corpus and compares outputs.
"""

from libc.stdlib cimport free, malloc

COMPLETE = 0
BUDGET = 2


cdef struct State:
    int n
    int hn
    int n_inst
    int mode
    long long budget
    long long nodes
    bint find_all
    long long max_models
    int *adj_start
    int *adj_nbr
    int *adj_pid
    int *cap
    int *mdeg_g
    int *mdeg_h
    int *inst_a
    int *inst_b
    int *same_pair
    int *phi
    int *inv
    int *on_path
    int *internal
    int *rem_deg
    int *cur
    int cur_len
    int *path_buf
    int *path_start
    int n_paths


cdef int *_to_ints(list xs) except NULL:
    cdef Py_ssize_t m = len(xs)
    cdef int *p = <int *> malloc((m if m > 0 else 1) * sizeof(int))
    if p == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        p[i] = xs[i]
    return p


cdef inline bint _tick(State *s) noexcept:
    s.nodes += 1
    return s.budget >= 0 and s.nodes > s.budget


cdef inline int _free_cap(State *s, int w) noexcept:
    cdef int total = 0
    cdef int t
    for t in range(s.adj_start[w], s.adj_start[w + 1]):
        total += s.cap[s.adj_pid[t]]
    return total


cdef inline bint _admissible(State *s, int w, int hv, int slack) noexcept:
    if s.inv[w] >= 0 or s.mdeg_g[w] < s.mdeg_h[hv]:
        return False
    if s.mode != 0 and s.internal[w] > 0:
        return False
    return _free_cap(s, w) + slack >= s.rem_deg[hv]


cdef bint _new_lt_prev(State *s, int ei, int w) noexcept:
    # compare cur + [w] against the committed path of instance ei-1
    cdef int ps = s.path_start[ei - 1]
    cdef int plen = s.path_start[ei] - ps
    cdef int nlen = s.cur_len + 1
    cdef int m = plen if plen < nlen else nlen
    cdef int i, a, b
    for i in range(m):
        a = s.cur[i] if i < s.cur_len else w
        b = s.path_buf[ps + i]
        if a != b:
            return a < b
    return nlen < plen


cdef int _advance(State *s, list models, int ei) except? -9:
    cdef int i, j
    if ei == s.n_inst:
        phi_t = tuple([s.phi[i] for i in range(s.hn)])
        paths = []
        for i in range(s.n_paths):
            paths.append(tuple([s.path_buf[j] for j in range(s.path_start[i], s.path_start[i + 1])]))
        models.append((phi_t, tuple(paths)))
        if not s.find_all:
            return 1
        if 0 <= s.max_models <= <long long> len(models):
            return 2
        return 0
    return _route(s, models, ei)


cdef int _route(State *s, list models, int ei) except? -9:
    cdef int a = s.phi[s.inst_a[ei]]
    s.cur[s.cur_len] = a
    s.cur_len += 1
    s.on_path[a] = 1
    cdef int r = _extend(s, models, ei, a)
    s.on_path[a] = 0
    s.cur_len -= 1
    return r


cdef int _commit(State *s, list models, int ei, int w, bint assign_pb) except? -9:
    if s.same_pair[ei] and _new_lt_prev(s, ei, w):
        return 0
    cdef int pa = s.inst_a[ei]
    cdef int pb = s.inst_b[ei]
    if assign_pb:
        s.phi[pb] = w
        s.inv[w] = pb
    s.rem_deg[pa] -= 1
    s.rem_deg[pb] -= 1
    cdef int i
    for i in range(1, s.cur_len):
        s.internal[s.cur[i]] += 1
    cdef int base = s.path_start[s.n_paths]
    for i in range(s.cur_len):
        s.path_buf[base + i] = s.cur[i]
    s.path_buf[base + s.cur_len] = w
    s.n_paths += 1
    s.path_start[s.n_paths] = base + s.cur_len + 1
    # suspend the current path: deeper instances build their own
    cdef int saved_len = s.cur_len
    for i in range(saved_len):
        s.on_path[s.cur[i]] = 0
    s.cur_len = 0
    cdef int r = _advance(s, models, ei + 1)
    s.cur_len = saved_len
    for i in range(saved_len):
        s.cur[i] = s.path_buf[base + i]
        s.on_path[s.cur[i]] = 1
    s.n_paths -= 1
    for i in range(1, s.cur_len):
        s.internal[s.cur[i]] -= 1
    s.rem_deg[pa] += 1
    s.rem_deg[pb] += 1
    if assign_pb:
        s.phi[pb] = -1
        s.inv[w] = -1
    return r


cdef int _extend(State *s, list models, int ei, int u) except? -9:
    cdef int pb = s.inst_b[ei]
    cdef int t, pid, w, b, r
    for t in range(s.adj_start[u], s.adj_start[u + 1]):
        pid = s.adj_pid[t]
        if s.cap[pid] == 0:
            continue
        w = s.adj_nbr[t]
        if s.on_path[w]:
            continue
        if _tick(s):
            return 2
        b = s.phi[pb]
        s.cap[pid] -= 1
        if b >= 0:
            if w == b:
                r = _commit(s, models, ei, w, False)
                if r:
                    s.cap[pid] += 1
                    return r
        elif _admissible(s, w, pb, 1):
            r = _commit(s, models, ei, w, True)
            if r:
                s.cap[pid] += 1
                return r
        # pass through w and keep walking
        if w != b and (s.mode == 0 or s.inv[w] < 0) and (s.mode != 2 or s.internal[w] == 0):
            s.on_path[w] = 1
            s.cur[s.cur_len] = w
            s.cur_len += 1
            r = _extend(s, models, ei, w)
            s.cur_len -= 1
            s.on_path[w] = 0
            if r:
                s.cap[pid] += 1
                return r
        s.cap[pid] += 1
    return 0


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
    """Drop-in equivalent of `_search_py.search_models`."""
    cdef State s
    cdef list models = []
    cdef int status = COMPLETE
    cdef int w, r, pa0
    s.n = n
    s.hn = hn
    s.n_inst = len(inst_a)
    s.mode = mode
    s.budget = budget
    s.nodes = 0
    s.find_all = bool(find_all)
    s.max_models = max_models
    s.cur_len = 0
    s.n_paths = 0
    if s.n_inst == 0:
        return COMPLETE, [], 0
    s.adj_start = _to_ints(list(adj_start))
    s.adj_nbr = _to_ints(list(adj_nbr))
    s.adj_pid = _to_ints(list(adj_pid))
    s.cap = _to_ints(list(pair_mult))
    s.mdeg_g = _to_ints(list(mdeg_g))
    s.mdeg_h = _to_ints(list(mdeg_h))
    s.inst_a = _to_ints(list(inst_a))
    s.inst_b = _to_ints(list(inst_b))
    s.same_pair = _to_ints(list(same_pair))
    s.phi = _to_ints([-1] * hn)
    s.inv = _to_ints([-1] * n)
    s.on_path = _to_ints([0] * n)
    s.internal = _to_ints([0] * n)
    s.rem_deg = _to_ints(list(mdeg_h))
    s.cur = <int *> malloc((n + 2) * sizeof(int))
    s.path_buf = <int *> malloc((s.n_inst * (n + 2) + 1) * sizeof(int))
    s.path_start = <int *> malloc((s.n_inst + 2) * sizeof(int))
    if s.cur == NULL or s.path_buf == NULL or s.path_start == NULL:
        raise MemoryError()
    s.path_start[0] = 0
    try:
        pa0 = s.inst_a[0]
        for w in range(s.n):
            if _tick(&s):
                status = BUDGET
                break
            if _admissible(&s, w, pa0, 0):
                s.phi[pa0] = w
                s.inv[w] = pa0
                r = _route(&s, models, 0)
                s.phi[pa0] = -1
                s.inv[w] = -1
                if r == 1:
                    break
                if r == 2:
                    status = BUDGET
                    break
        return status, models, s.nodes
    finally:
        free(s.adj_start)
        free(s.adj_nbr)
        free(s.adj_pid)
        free(s.cap)
        free(s.mdeg_g)
        free(s.mdeg_h)
        free(s.inst_a)
        free(s.inst_b)
        free(s.same_pair)
        free(s.phi)
        free(s.inv)
        free(s.on_path)
        free(s.internal)
        free(s.rem_deg)
        free(s.cur)
        free(s.path_buf)
        free(s.path_start)
