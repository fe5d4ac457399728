# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernel_py``: same traversal, same node counts."""

import time

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdint cimport uint64_t
from libc.string cimport memcpy

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

DEF TIME_CHECK_EVERY = 4096
# give up (and assume coverable) after this many steps of one cover search
DEF COVER_STEP_CAP = 20000

cdef enum:
    STATUS_EXHAUSTED = 0
    STATUS_NODE_LIMIT = 1
    STATUS_TIME_LIMIT = 2


cdef struct Ctx:
    int n_veh
    int L
    const int *opt_start
    const int *opt_sf
    const double *opt_val
    const int *val_order
    const int *idle
    const int *dom_off
    const int *nbr_start
    const int *nbr_list
    const int *nbr_rev
    const int *nbr_woff
    const long long *sup_start
    const uint64_t *sup
    const uint64_t *sfm
    int n_groups
    const int *group_start
    const int *group_members
    int n_words
    uint64_t *dom
    uint64_t *saved
    unsigned char *assigned
    unsigned char *inq
    int *queue
    int q_head
    int q_len
    long long *fails
    const int *prio
    # all-different scratch
    unsigned char *avail_sf
    int *owner
    int *mate
    unsigned char *seen
    int *gvar
    int g_n
    int *t_index
    int *t_low
    int *t_stack
    int *t_comp
    int *work
    unsigned char *t_on
    unsigned char *reach
    # tight groups must cover every subframe left in their domains
    unsigned char *tight
    unsigned char *cover
    const unsigned char *member
    const int *pair_at
    int *glist
    int *cv
    int *co
    long long steps
    int t_counter
    int t_sp
    int t_ncomp
    int *choice
    int *best_choice
    long long nodes
    long long first_found
    long long node_limit
    double deadline
    double best
    int found
    int status


# -- domains ---------------------------------------------------------------


cdef inline int _words(Ctx *c, int w) noexcept nogil:
    return c.dom_off[w + 1] - c.dom_off[w]


cdef inline bint _has(Ctx *c, int w, int i) noexcept nogil:
    return (c.dom[c.dom_off[w] + (i >> 6)] >> (i & 63)) & 1


cdef inline int _size(Ctx *c, int w) noexcept nogil:
    cdef int k, n = 0
    for k in range(c.dom_off[w], c.dom_off[w + 1]):
        n += __builtin_popcountll(c.dom[k])
    return n


cdef inline void _push(Ctx *c, int w) noexcept nogil:
    if not c.inq[w]:
        c.inq[w] = 1
        c.queue[(c.q_head + c.q_len) % c.n_veh] = w
        c.q_len += 1


cdef bint _revise(Ctx *c, int w, int at, int u) noexcept nogil:
    """Drop options of ``w`` with no support left in ``u``'s domain."""
    cdef int k, i, b, wu = _words(c, u)
    cdef int du = c.dom_off[u]
    cdef long long base
    cdef uint64_t bits, keep
    cdef bint changed = False
    cdef bint ok
    for k in range(_words(c, w)):
        bits = c.dom[c.dom_off[w] + k]
        keep = bits
        while bits:
            b = __builtin_ctzll(bits)
            bits &= bits - 1
            i = (k << 6) + b
            base = c.sup_start[c.opt_start[w] + i] + c.nbr_woff[at]
            ok = False
            for b in range(wu):
                if c.sup[base + b] & c.dom[du + b]:
                    ok = True
                    break
            if not ok:
                keep &= ~((<uint64_t>1) << (i & 63))
        if keep != c.dom[c.dom_off[w] + k]:
            c.dom[c.dom_off[w] + k] = keep
            changed = True
    return changed


# -- all-different over subframes ------------------------------------------


cdef bint _augment(Ctx *c, int w) noexcept nogil:
    cdef int l
    cdef int L = c.L
    for l in range(L):
        if c.avail_sf[w * L + l] and not c.seen[l]:
            c.seen[l] = 1
            if c.owner[l] < 0 or _augment(c, c.owner[l]):
                c.owner[l] = w
                c.mate[w] = l
                return True
    return False


cdef inline bint _free_edge(Ctx *c, int w, int l) noexcept nogil:
    # edge usable by w but not its current matching partner
    return c.avail_sf[w * c.L + l] and c.mate[w] != l


cdef void _visit(Ctx *c, int u, int v) noexcept nogil:
    if c.t_index[v] < 0:
        _strong(c, v)
        if c.t_low[v] < c.t_low[u]:
            c.t_low[u] = c.t_low[v]
    elif c.t_on[v] and c.t_index[v] < c.t_low[u]:
        c.t_low[u] = c.t_index[v]


cdef void _strong(Ctx *c, int u) noexcept nogil:
    # Tarjan over vehicles 0..n-1 (edge to matched subframe) and
    # subframes n..n+L-1 (edges to vehicles that could also use them)
    cdef int n = c.g_n
    cdef int i, v
    c.t_index[u] = c.t_counter
    c.t_low[u] = c.t_counter
    c.t_counter += 1
    c.t_stack[c.t_sp] = u
    c.t_sp += 1
    c.t_on[u] = 1
    if u < n:
        _visit(c, u, n + c.mate[c.gvar[u]])
    else:
        for i in range(n):
            if _free_edge(c, c.gvar[i], u - n):
                _visit(c, u, i)
    if c.t_low[u] == c.t_index[u]:
        while True:
            c.t_sp -= 1
            v = c.t_stack[c.t_sp]
            c.t_on[v] = 0
            c.t_comp[v] = c.t_ncomp
            if v == u:
                break
        c.t_ncomp += 1


cdef int _filter_group(Ctx *c, int g) noexcept nogil:
    """Drop (vehicle, subframe) edges outside every maximum matching.

    Returns -1 when the group's vehicles cannot take distinct subframes,
    otherwise the number of edges removed.
    """
    cdef int L = c.L
    cdef int n = 0
    cdef int i, w, l, u, k, top, removed, total, W
    cdef const uint64_t *row
    for i in range(c.group_start[g], c.group_start[g + 1]):
        w = c.group_members[i]
        if c.assigned[w] or (c.idle[w] >= 0 and _has(c, w, c.idle[w])):
            continue
        W = _words(c, w)
        for l in range(L):
            row = &c.sfm[c.dom_off[w] * L + l * W]
            c.avail_sf[w * L + l] = 0
            for k in range(W):
                if row[k] & c.dom[c.dom_off[w] + k]:
                    c.avail_sf[w * L + l] = 1
                    break
        c.gvar[n] = w
        n += 1
    c.g_n = n
    c.tight[g] = 0
    if n == 0:
        return 0
    total = n + L
    k = 0
    for l in range(L):
        c.cover[g * L + l] = 0
        for i in range(n):
            if c.avail_sf[c.gvar[i] * L + l]:
                c.cover[g * L + l] = 1
                k += 1
                break
    c.tight[g] = k == n
    for l in range(L):
        c.owner[l] = -1
    for i in range(n):
        for l in range(L):
            c.seen[l] = 0
        if not _augment(c, c.gvar[i]):
            return -1

    # subframes reachable from an unmatched subframe along alternating paths
    for u in range(total):
        c.reach[u] = 0
    top = 0
    for l in range(L):
        if c.owner[l] < 0:
            c.reach[n + l] = 1
            c.work[top] = n + l
            top += 1
    while top > 0:
        top -= 1
        u = c.work[top]
        if u < n:
            u = n + c.mate[c.gvar[u]]
            if not c.reach[u]:
                c.reach[u] = 1
                c.work[top] = u
                top += 1
        else:
            for i in range(n):
                if not c.reach[i] and _free_edge(c, c.gvar[i], u - n):
                    c.reach[i] = 1
                    c.work[top] = i
                    top += 1

    for u in range(total):
        c.t_index[u] = -1
        c.t_on[u] = 0
    c.t_counter = 0
    c.t_sp = 0
    c.t_ncomp = 0
    for u in range(total):
        if c.t_index[u] < 0:
            _strong(c, u)

    removed = 0
    for i in range(n):
        w = c.gvar[i]
        W = _words(c, w)
        for l in range(L):
            if _free_edge(c, w, l) and not c.reach[n + l] \
                    and c.t_comp[i] != c.t_comp[n + l]:
                row = &c.sfm[c.dom_off[w] * L + l * W]
                for k in range(W):
                    c.dom[c.dom_off[w] + k] &= ~row[k]
                _push(c, w)
                removed += 1
    return removed


cdef bint _propagate(Ctx *c) noexcept nogil:
    """Arc consistency plus all-different filtering to a common fixpoint."""
    cdef int u, w, idx, g, r
    cdef bint again = True
    while again:
        while c.q_len > 0:
            u = c.queue[c.q_head]
            c.q_head = (c.q_head + 1) % c.n_veh
            c.q_len -= 1
            c.inq[u] = 0
            for idx in range(c.nbr_start[u], c.nbr_start[u + 1]):
                w = c.nbr_list[idx]
                if c.assigned[w]:
                    continue
                if _revise(c, w, c.nbr_rev[idx], u):
                    if _size(c, w) == 0:
                        c.fails[w] += 1
                        return False
                    _push(c, w)
        again = False
        for g in range(c.n_groups):
            r = _filter_group(c, g)
            if r < 0:
                # gvar still lists the group's vehicles that failed to match
                for r in range(c.g_n):
                    c.fails[c.gvar[r]] += 1
                return False
            if r > 0:
                again = True
    return True


cdef inline bint _compatible(Ctx *c, int u, int ou, int w, int ow) noexcept nogil:
    cdef int at = c.pair_at[u * c.n_veh + w]
    cdef int i
    if at < 0:
        return True
    i = ow - c.opt_start[w]
    return (c.sup[c.sup_start[ou] + c.nbr_woff[at] + (i >> 6)] >> (i & 63)) & 1


cdef bint _cover(Ctx *c, int l, int ng, int k) noexcept nogil:
    """Can groups glist[k:] cover subframe l compatibly with cv/co[:k]?"""
    cdef int g, j, idx, w, o, i
    cdef bint ok
    if k == ng:
        return True
    c.steps += 1
    if c.steps > COVER_STEP_CAP:
        return True
    g = c.glist[k]
    for j in range(k):
        if c.member[g * c.n_veh + c.cv[j]]:
            c.cv[k] = c.cv[j]
            c.co[k] = c.co[j]
            return _cover(c, l, ng, k + 1)
    for idx in range(c.group_start[g], c.group_start[g + 1]):
        w = c.group_members[idx]
        if c.assigned[w]:
            continue
        for o in range(c.opt_start[w], c.opt_start[w + 1]):
            if c.opt_sf[o] != l or o - c.opt_start[w] == c.idle[w] \
                    or not _has(c, w, o - c.opt_start[w]):
                continue
            ok = True
            for j in range(k):
                if c.cv[j] == w or not _compatible(c, c.cv[j], c.co[j], w, o):
                    ok = False
                    break
            if ok:
                c.cv[k] = w
                c.co[k] = o
                if _cover(c, l, ng, k + 1):
                    return True
    return False


cdef bint _covers_ok(Ctx *c) noexcept nogil:
    cdef int l, g, ng
    for l in range(c.L):
        ng = 0
        for g in range(c.n_groups):
            if c.tight[g] and c.cover[g * c.L + l]:
                c.glist[ng] = g
                ng += 1
        if ng < 2:
            continue
        c.steps = 0
        if not _cover(c, l, ng, 0):
            return False
    return True


# -- search ----------------------------------------------------------------


cdef void _clear_queue(Ctx *c) noexcept nogil:
    while c.q_len > 0:
        c.inq[c.queue[c.q_head]] = 0
        c.q_head = (c.q_head + 1) % c.n_veh
        c.q_len -= 1


cdef bint _dfs(Ctx *c, int depth, double partial) except -1:
    cdef int w, o, i, k, count, pick, pick_count
    cdef long long pick_fails = 0
    cdef double ub, top
    cdef bint alive = True
    cdef uint64_t *saved

    c.nodes += 1
    if c.nodes > c.node_limit:
        c.status = STATUS_NODE_LIMIT
        return False
    if c.deadline > 0 and c.nodes % TIME_CHECK_EVERY == 0:
        if time.monotonic() > c.deadline:
            c.status = STATUS_TIME_LIMIT
            return False
    if not _propagate(c):
        _clear_queue(c)
        return True
    if not _covers_ok(c):
        return True
    if depth == c.n_veh:
        if partial > c.best:
            if not c.found:
                c.first_found = c.nodes
            c.best = partial
            c.found = 1
            for i in range(c.n_veh):
                c.best_choice[i] = c.choice[i]
        return True

    # bound, then pick by most groups, then fewest options per dead end
    ub = partial
    pick = -1
    pick_count = 0
    for w in range(c.n_veh):
        if c.assigned[w]:
            continue
        count = _size(c, w)
        if count == 0:
            c.fails[w] += 1
            return True
        top = -INFINITY
        for i in range(c.opt_start[w], c.opt_start[w + 1]):
            o = c.val_order[i]
            if _has(c, w, o - c.opt_start[w]):
                top = c.opt_val[o]
                break
        ub += top
        # count / (1 + fails) compared exactly in integers
        if pick < 0 or c.prio[w] > c.prio[pick] or (
                c.prio[w] == c.prio[pick]
                and count * (1 + pick_fails) < pick_count * (1 + c.fails[w])):
            pick = w
            pick_count = count
            pick_fails = c.fails[w]
    if c.found and ub <= c.best:
        return True

    saved = &c.saved[depth * c.n_words]
    memcpy(saved, c.dom, c.n_words * sizeof(uint64_t))
    c.assigned[pick] = 1
    for o in range(c.opt_start[pick], c.opt_start[pick + 1]):
        i = o - c.opt_start[pick]
        if not (saved[c.dom_off[pick] + (i >> 6)] >> (i & 63)) & 1:
            continue
        memcpy(c.dom, saved, c.n_words * sizeof(uint64_t))
        for k in range(c.dom_off[pick], c.dom_off[pick + 1]):
            c.dom[k] = 0
        c.dom[c.dom_off[pick] + (i >> 6)] = (<uint64_t>1) << (i & 63)
        _push(c, pick)
        c.choice[pick] = o
        alive = _dfs(c, depth + 1, partial + c.opt_val[o])
        if not alive:
            break
    memcpy(c.dom, saved, c.n_words * sizeof(uint64_t))
    c.choice[pick] = -1
    c.assigned[pick] = 0
    return alive


cdef const int *_iptr(int[::1] a, int[::1] dummy):
    return &a[0] if a.shape[0] else &dummy[0]


def search(int n_veh, int L, opt_start, opt_sf, opt_val, val_order, idle,
           nbr_start, nbr_list, nbr_rev, nbr_woff, sup_start, sup, sfm,
           group_start, group_members, long long node_limit, double deadline):
    cdef int[::1] a_start = np.ascontiguousarray(opt_start, dtype=np.int32)
    cdef int[::1] a_sf = np.ascontiguousarray(opt_sf, dtype=np.int32)
    cdef double[::1] a_val = np.ascontiguousarray(opt_val, dtype=np.float64)
    cdef int[::1] a_vorder = np.ascontiguousarray(val_order, dtype=np.int32)
    cdef int[::1] a_idle = np.ascontiguousarray(idle, dtype=np.int32)
    cdef int[::1] a_nstart = np.ascontiguousarray(nbr_start, dtype=np.int32)
    cdef int[::1] a_nlist = np.ascontiguousarray(nbr_list, dtype=np.int32)
    cdef int[::1] a_nrev = np.ascontiguousarray(nbr_rev, dtype=np.int32)
    cdef int[::1] a_nwoff = np.ascontiguousarray(nbr_woff, dtype=np.int32)
    cdef long long[::1] a_sstart = np.ascontiguousarray(sup_start, dtype=np.int64)
    cdef uint64_t[::1] a_sup = np.ascontiguousarray(sup, dtype=np.uint64)
    cdef uint64_t[::1] a_sfm = np.ascontiguousarray(sfm, dtype=np.uint64)
    cdef int[::1] a_gstart = np.ascontiguousarray(group_start, dtype=np.int32)
    cdef int[::1] a_gmem = np.ascontiguousarray(group_members, dtype=np.int32)

    counts = np.diff(np.asarray(a_start))
    dom_off_np = np.concatenate([[0], np.cumsum((counts + 63) // 64)]).astype(np.int32)
    cdef int[::1] dom_off = dom_off_np
    cdef int n_words = int(dom_off_np[-1])
    dom_np = np.zeros(max(n_words, 1), dtype=np.uint64)
    for w in range(n_veh):
        for i in range(int(counts[w])):
            dom_np[dom_off_np[w] + i // 64] |= np.uint64(1) << np.uint64(i % 64)
    cdef uint64_t[::1] dom = dom_np
    cdef uint64_t[::1] saved = np.zeros(max(n_words * (n_veh + 1), 1), dtype=np.uint64)

    cdef int n1 = max(n_veh, 1)
    cdef int nl = max(L, 1)
    cdef unsigned char[::1] assigned = np.zeros(n1, dtype=np.uint8)
    cdef unsigned char[::1] inq = np.zeros(n1, dtype=np.uint8)
    cdef int[::1] queue = np.zeros(n1, dtype=np.int32)
    cdef long long[::1] fails = np.zeros(n1, dtype=np.int64)
    cdef unsigned char[::1] avail_sf = np.zeros(n1 * nl, dtype=np.uint8)
    cdef int[::1] owner = np.full(nl, -1, dtype=np.int32)
    cdef int[::1] mate = np.full(n1, -1, dtype=np.int32)
    cdef unsigned char[::1] seen = np.zeros(nl, dtype=np.uint8)
    cdef int n_nodes = n1 + nl
    cdef int[::1] gvar = np.zeros(n_nodes, dtype=np.int32)
    cdef int[::1] t_index = np.zeros(n_nodes, dtype=np.int32)
    cdef int[::1] t_low = np.zeros(n_nodes, dtype=np.int32)
    cdef int[::1] t_stack = np.zeros(n_nodes, dtype=np.int32)
    cdef int[::1] t_comp = np.zeros(n_nodes, dtype=np.int32)
    cdef int[::1] work = np.zeros(n_nodes, dtype=np.int32)
    cdef unsigned char[::1] t_on = np.zeros(n_nodes, dtype=np.uint8)
    cdef unsigned char[::1] reach = np.zeros(n_nodes, dtype=np.uint8)
    cdef int[::1] choice = np.full(n1, -1, dtype=np.int32)
    best_np = np.full(n1, -1, dtype=np.int32)
    cdef int[::1] best_choice = best_np
    cdef int[::1] dummy_i = np.zeros(1, dtype=np.int32)
    cdef long long[::1] dummy_l = np.zeros(1, dtype=np.int64)
    cdef uint64_t[::1] dummy_u = np.zeros(1, dtype=np.uint64)
    cdef double[::1] dummy_d = np.zeros(1, dtype=np.float64)

    cdef Ctx c
    c.n_veh = n_veh
    c.L = L
    c.opt_start = &a_start[0]
    c.opt_sf = _iptr(a_sf, dummy_i)
    c.opt_val = &a_val[0] if a_val.shape[0] else &dummy_d[0]
    c.val_order = _iptr(a_vorder, dummy_i)
    c.idle = _iptr(a_idle, dummy_i)
    c.dom_off = &dom_off[0]
    c.nbr_start = &a_nstart[0]
    c.nbr_list = _iptr(a_nlist, dummy_i)
    c.nbr_rev = _iptr(a_nrev, dummy_i)
    c.nbr_woff = _iptr(a_nwoff, dummy_i)
    c.sup_start = &a_sstart[0] if a_sstart.shape[0] else &dummy_l[0]
    c.sup = &a_sup[0] if a_sup.shape[0] else &dummy_u[0]
    c.sfm = &a_sfm[0] if a_sfm.shape[0] else &dummy_u[0]
    c.n_groups = a_gstart.shape[0] - 1
    c.group_start = &a_gstart[0]
    c.group_members = _iptr(a_gmem, dummy_i)
    c.n_words = n_words
    c.dom = &dom[0]
    c.saved = &saved[0]
    c.assigned = &assigned[0]
    c.inq = &inq[0]
    c.queue = &queue[0]
    c.q_head = 0
    c.q_len = 0
    c.fails = &fails[0]
    cdef int ng1 = max(a_gstart.shape[0] - 1, 1)
    cdef unsigned char[::1] tight = np.zeros(ng1, dtype=np.uint8)
    cdef unsigned char[::1] cover = np.zeros(ng1 * nl, dtype=np.uint8)
    member_np = np.zeros(ng1 * n1, dtype=np.uint8)
    for gi in range(a_gstart.shape[0] - 1):
        for mi in range(a_gstart[gi], a_gstart[gi + 1]):
            member_np[gi * n1 + a_gmem[mi]] = 1
    cdef unsigned char[::1] member = member_np
    cdef int[::1] prio = member_np.reshape(ng1, n1).sum(axis=0).astype(np.int32)
    pair_np = np.full(n1 * n1, -1, dtype=np.int32)
    for w in range(n_veh):
        for mi in range(a_nstart[w], a_nstart[w + 1]):
            pair_np[w * n1 + a_nlist[mi]] = mi
    cdef int[::1] pair_at = pair_np
    cdef int[::1] glist = np.zeros(ng1, dtype=np.int32)
    cdef int[::1] cv = np.zeros(ng1, dtype=np.int32)
    cdef int[::1] co = np.zeros(ng1, dtype=np.int32)
    c.tight = &tight[0]
    c.cover = &cover[0]
    c.member = &member[0]
    c.prio = &prio[0]
    c.pair_at = &pair_at[0]
    c.glist = &glist[0]
    c.cv = &cv[0]
    c.co = &co[0]
    c.avail_sf = &avail_sf[0]
    c.owner = &owner[0]
    c.mate = &mate[0]
    c.seen = &seen[0]
    c.gvar = &gvar[0]
    c.g_n = 0
    c.t_index = &t_index[0]
    c.t_low = &t_low[0]
    c.t_stack = &t_stack[0]
    c.t_comp = &t_comp[0]
    c.work = &work[0]
    c.t_on = &t_on[0]
    c.reach = &reach[0]
    c.choice = &choice[0]
    c.best_choice = &best_choice[0]
    c.nodes = 0
    c.first_found = 0
    c.node_limit = node_limit
    c.deadline = deadline
    c.best = -INFINITY
    c.found = 0
    c.status = STATUS_EXHAUSTED

    for w in range(n_veh):
        _push(&c, w)
    _dfs(&c, 0, 0.0)
    best = c.best if c.found else 0.0
    return (c.status, bool(c.found), best, best_np[:n_veh].copy(), c.nodes,
            c.first_found)


def random_construct(int n_veh, int L, int K, uniforms, opt_start, opt_sf, opt_mask,
                     eff_start, eff_veh, eff_sf, eff_mask):
    cdef double[::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef int[::1] a_start = np.ascontiguousarray(opt_start, dtype=np.int32)
    cdef int[::1] a_estart = np.ascontiguousarray(eff_start, dtype=np.int32)
    cdef int[::1] a_eveh = np.ascontiguousarray(eff_veh, dtype=np.int32)
    cdef int[::1] a_esf = np.ascontiguousarray(eff_sf, dtype=np.int32)
    cdef int[::1] a_emask = np.ascontiguousarray(eff_mask, dtype=np.int32)
    cdef unsigned char[::1] blocked = np.zeros(max(n_veh * L, 1), dtype=np.uint8)
    choice_np = np.full(max(n_veh, 1), -1, dtype=np.int32)
    cdef int[::1] choice = choice_np
    cdef int full = (1 << K) - 1
    cdef int[::1] free_sf = np.zeros(max(L, 1), dtype=np.int32)
    cdef int[::1] subs = np.zeros(full + 1, dtype=np.int32)
    cdef int v, l, n_free, n_subs, m, o, e, slot, pick, free_bits

    for v in range(n_veh):
        n_free = 0
        for l in range(L):
            if blocked[v * L + l] != full:
                free_sf[n_free] = l
                n_free += 1
        if n_free == 0:
            return False, choice_np[:n_veh].copy()
        pick = <int>(u[2 * v] * n_free)
        if pick > n_free - 1:
            pick = n_free - 1
        l = free_sf[pick]
        free_bits = full & ~blocked[v * L + l]
        n_subs = 0
        for m in range(1, full + 1):
            if (m & ~free_bits) == 0:
                subs[n_subs] = m
                n_subs += 1
        pick = <int>(u[2 * v + 1] * n_subs)
        if pick > n_subs - 1:
            pick = n_subs - 1
        m = subs[pick]
        o = a_start[v] + l * full + (m - 1)
        choice[v] = o
        for e in range(a_estart[o], a_estart[o + 1]):
            slot = a_eveh[e] * L + a_esf[e]
            blocked[slot] = blocked[slot] | <unsigned char>a_emask[e]
    return True, choice_np[:n_veh].copy()
