"""Pure-Python branch-and-bound and random-construction kernels.

Reference twin of ``_kernel.pyx``; both must return identical results,
node counts included.  See :mod:`v2valloc.solver` for the array layout.
Domains are Python ints used as bitsets over each vehicle's options.
"""

import sys
import time
from collections import deque

import numpy as np

STATUS_EXHAUSTED = 0
STATUS_NODE_LIMIT = 1
STATUS_TIME_LIMIT = 2

_TIME_CHECK_EVERY = 4096
_COVER_STEP_CAP = 20000


def _as_int(words) -> int:
    out = 0
    for k, word in enumerate(words):
        out |= int(word) << (64 * k)
    return out


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Search:
    def __init__(self, n_veh, L, opt_start, opt_sf, opt_val, val_order, idle,
                 nbr_start, nbr_list, nbr_rev, nbr_woff, sup_start, sup, sfm,
                 group_start, group_members, node_limit, deadline):
        self.n, self.L = n_veh, L
        self.opt_start = [int(v) for v in opt_start]
        self.opt_sf = [int(v) for v in opt_sf]
        self.opt_val = [float(v) for v in opt_val]
        self.val_order = [int(v) for v in val_order]
        self.idle = [int(v) for v in idle]
        self.nbr_start = [int(v) for v in nbr_start]
        self.nbr_list = [int(v) for v in nbr_list]
        self.nbr_rev = [int(v) for v in nbr_rev]
        gs = [int(v) for v in group_start]
        gm = [int(v) for v in group_members]
        self.groups = [gm[gs[g]:gs[g + 1]] for g in range(len(gs) - 1)]

        counts = [self.opt_start[w + 1] - self.opt_start[w] for w in range(n_veh)]
        words = [(c + 63) // 64 for c in counts]
        dom_off = np.concatenate([[0], np.cumsum(words)]).astype(np.int64)
        sup = np.asarray(sup, dtype=np.uint64)
        sfm = np.asarray(sfm, dtype=np.uint64)
        sup_start = np.asarray(sup_start, dtype=np.int64)
        # sup_of[at][i]: supports in nbr_list[at] of option i of the list owner
        self.sup_of = [None] * len(self.nbr_list)
        for w in range(n_veh):
            for at in range(self.nbr_start[w], self.nbr_start[w + 1]):
                W = words[self.nbr_list[at]]
                off = int(nbr_woff[at])
                self.sup_of[at] = [
                    _as_int(sup[sup_start[o] + off:sup_start[o] + off + W])
                    for o in range(self.opt_start[w], self.opt_start[w + 1])
                ]
        self.sfm = [
            [_as_int(sfm[dom_off[w] * L + l * words[w]:dom_off[w] * L + (l + 1) * words[w]])
             for l in range(L)]
            for w in range(n_veh)
        ]
        self.dom = [(1 << c) - 1 for c in counts]
        self.pair_at = {}
        for w in range(n_veh):
            for at in range(self.nbr_start[w], self.nbr_start[w + 1]):
                self.pair_at[(w, self.nbr_list[at])] = at
        self.member = [set(g) for g in self.groups]
        self.prio = [sum(w in m for m in self.member) for w in range(n_veh)]

        self.assigned = [False] * n_veh
        self.inq = [False] * n_veh
        self.queue = deque()
        self.fails = [0] * n_veh
        self.tight = [False] * len(self.groups)
        self.cover = [[False] * L for _ in self.groups]
        self.g_need = []
        self.choice = [-1] * n_veh
        self.best_choice = [-1] * n_veh
        self.nodes = 0
        self.first_found = 0
        self.node_limit = node_limit
        self.deadline = deadline
        self.best = float("-inf")
        self.found = False
        self.status = STATUS_EXHAUSTED

    # -- propagation -------------------------------------------------------

    def push(self, w):
        if not self.inq[w]:
            self.inq[w] = True
            self.queue.append(w)

    def revise(self, w, at, u):
        sup = self.sup_of[at]
        du = self.dom[u]
        keep = self.dom[w]
        for i in _bits(keep):
            if not sup[i] & du:
                keep &= ~(1 << i)
        if keep != self.dom[w]:
            self.dom[w] = keep
            return True
        return False

    def idle_open(self, w):
        return self.idle[w] >= 0 and (self.dom[w] >> self.idle[w]) & 1

    def filter_group(self, g):
        L = self.L
        need = [w for w in self.groups[g]
                if not self.assigned[w] and not self.idle_open(w)]
        self.g_need = need
        self.tight[g] = False
        if not need:
            return 0
        avail = {w: [bool(self.sfm[w][l] & self.dom[w]) for l in range(L)] for w in need}
        union = [any(avail[w][l] for w in need) for l in range(L)]
        self.cover[g] = union
        self.tight[g] = sum(union) == len(need)

        owner = [-1] * L
        mate = {}

        def augment(w, seen):
            for l in range(L):
                if avail[w][l] and not seen[l]:
                    seen[l] = True
                    if owner[l] < 0 or augment(owner[l], seen):
                        owner[l] = w
                        mate[w] = l
                        return True
            return False

        for w in need:
            if not augment(w, [False] * L):
                return -1

        n = len(need)

        def free_edge(i, l):
            w = need[i]
            return avail[w][l] and mate[w] != l

        # nodes 0..n-1 are vehicles, n..n+L-1 subframes
        reach = [False] * (n + L)
        work = []
        for l in range(L):
            if owner[l] < 0:
                reach[n + l] = True
                work.append(n + l)
        while work:
            u = work.pop()
            if u < n:
                u = n + mate[need[u]]
                if not reach[u]:
                    reach[u] = True
                    work.append(u)
            else:
                for i in range(n):
                    if not reach[i] and free_edge(i, u - n):
                        reach[i] = True
                        work.append(i)

        index = [-1] * (n + L)
        low = [0] * (n + L)
        on = [False] * (n + L)
        comp = [0] * (n + L)
        stack = []
        state = {"counter": 0, "ncomp": 0}

        def strong(u):
            index[u] = low[u] = state["counter"]
            state["counter"] += 1
            stack.append(u)
            on[u] = True
            succ = [n + mate[need[u]]] if u < n else \
                [i for i in range(n) if free_edge(i, u - n)]
            for v in succ:
                if index[v] < 0:
                    strong(v)
                    low[u] = min(low[u], low[v])
                elif on[v]:
                    low[u] = min(low[u], index[v])
            if low[u] == index[u]:
                while True:
                    v = stack.pop()
                    on[v] = False
                    comp[v] = state["ncomp"]
                    if v == u:
                        break
                state["ncomp"] += 1

        for u in range(n + L):
            if index[u] < 0:
                strong(u)

        removed = 0
        for i, w in enumerate(need):
            for l in range(L):
                if free_edge(i, l) and not reach[n + l] and comp[i] != comp[n + l]:
                    self.dom[w] &= ~self.sfm[w][l]
                    self.push(w)
                    removed += 1
        return removed

    def propagate(self):
        again = True
        while again:
            while self.queue:
                u = self.queue.popleft()
                self.inq[u] = False
                for idx in range(self.nbr_start[u], self.nbr_start[u + 1]):
                    w = self.nbr_list[idx]
                    if self.assigned[w]:
                        continue
                    if self.revise(w, self.nbr_rev[idx], u):
                        if self.dom[w] == 0:
                            self.fails[w] += 1
                            return False
                        self.push(w)
            again = False
            for g in range(len(self.groups)):
                r = self.filter_group(g)
                if r < 0:
                    for w in self.g_need:
                        self.fails[w] += 1
                    return False
                if r > 0:
                    again = True
        return True

    def clear_queue(self):
        while self.queue:
            self.inq[self.queue.popleft()] = False

    # -- cover check -------------------------------------------------------

    def compatible(self, u, ou, w, ow):
        at = self.pair_at.get((u, w))
        if at is None:
            return True
        i = ow - self.opt_start[w]
        return bool((self.sup_of[at][ou - self.opt_start[u]] >> i) & 1)

    def cover_search(self, l, glist, k, cv, co):
        if k == len(glist):
            return True
        self.steps += 1
        if self.steps > _COVER_STEP_CAP:
            return True
        g = glist[k]
        for j in range(k):
            if cv[j] in self.member[g]:
                cv[k], co[k] = cv[j], co[j]
                return self.cover_search(l, glist, k + 1, cv, co)
        for w in self.groups[g]:
            if self.assigned[w]:
                continue
            base = self.opt_start[w]
            for o in range(base, self.opt_start[w + 1]):
                if self.opt_sf[o] != l or o - base == self.idle[w] \
                        or not (self.dom[w] >> (o - base)) & 1:
                    continue
                if all(cv[j] != w and self.compatible(cv[j], co[j], w, o) for j in range(k)):
                    cv[k], co[k] = w, o
                    if self.cover_search(l, glist, k + 1, cv, co):
                        return True
        return False

    def covers_ok(self):
        for l in range(self.L):
            glist = [g for g in range(len(self.groups)) if self.tight[g] and self.cover[g][l]]
            if len(glist) < 2:
                continue
            self.steps = 0
            if not self.cover_search(l, glist, 0, [0] * len(glist), [0] * len(glist)):
                return False
        return True

    # -- search ------------------------------------------------------------

    def dfs(self, depth, partial):
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.status = STATUS_NODE_LIMIT
            return False
        if self.deadline > 0 and self.nodes % _TIME_CHECK_EVERY == 0 \
                and time.monotonic() > self.deadline:
            self.status = STATUS_TIME_LIMIT
            return False
        if not self.propagate():
            self.clear_queue()
            return True
        if not self.covers_ok():
            return True
        if depth == self.n:
            if partial > self.best:
                if not self.found:
                    self.first_found = self.nodes
                self.best = partial
                self.found = True
                self.best_choice[:] = self.choice
            return True

        # bound, then pick by most groups, then fewest options per dead end
        ub = partial
        pick, pick_count, pick_fails = -1, 0, 0
        for w in range(self.n):
            if self.assigned[w]:
                continue
            count = bin(self.dom[w]).count("1")
            if count == 0:
                self.fails[w] += 1
                return True
            base = self.opt_start[w]
            for i in range(base, self.opt_start[w + 1]):
                o = self.val_order[i]
                if (self.dom[w] >> (o - base)) & 1:
                    ub += self.opt_val[o]
                    break
            if pick < 0 or self.prio[w] > self.prio[pick] or (
                    self.prio[w] == self.prio[pick]
                    and count * (1 + pick_fails) < pick_count * (1 + self.fails[w])):
                pick, pick_count, pick_fails = w, count, self.fails[w]
        if self.found and ub <= self.best:
            return True

        saved = list(self.dom)
        self.assigned[pick] = True
        alive = True
        base = self.opt_start[pick]
        for o in range(base, self.opt_start[pick + 1]):
            if not (saved[pick] >> (o - base)) & 1:
                continue
            self.dom[:] = saved
            self.dom[pick] = 1 << (o - base)
            self.push(pick)
            self.choice[pick] = o
            alive = self.dfs(depth + 1, partial + self.opt_val[o])
            if not alive:
                break
        self.dom[:] = saved
        self.choice[pick] = -1
        self.assigned[pick] = False
        return alive


def search(n_veh, L, opt_start, opt_sf, opt_val, val_order, idle,
           nbr_start, nbr_list, nbr_rev, nbr_woff, sup_start, sup, sfm,
           group_start, group_members, node_limit, deadline):
    s = _Search(n_veh, L, opt_start, opt_sf, opt_val, val_order, idle,
                nbr_start, nbr_list, nbr_rev, nbr_woff, sup_start, sup, sfm,
                group_start, group_members, node_limit, deadline)
    for w in range(n_veh):
        s.push(w)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * (n_veh + L) + 1000))
    try:
        s.dfs(0, 0.0)
    finally:
        sys.setrecursionlimit(limit)
    best = s.best if s.found else 0.0
    return (s.status, s.found, best, np.array(s.best_choice, dtype=np.int32),
            s.nodes, s.first_found)


def random_construct(n_veh, L, K, uniforms, opt_start, opt_sf, opt_mask,
                     eff_start, eff_veh, eff_sf, eff_mask):
    """One randomised sequential construction; returns (ok, choice).

    Vehicle ``v`` draws ``uniforms[2v]`` to pick a subframe uniformly among
    those with a free subchannel and ``uniforms[2v+1]`` to pick a nonempty
    subset of that subframe's free subchannels uniformly.  ``opt_*`` index
    one option per (vehicle, subframe, submask) in submask-major order.
    """
    blocked = [0] * (n_veh * L)
    full = (1 << K) - 1
    choice = [-1] * n_veh
    for v in range(n_veh):
        free_sf = [l for l in range(L) if blocked[v * L + l] != full]
        if not free_sf:
            return False, np.array(choice, dtype=np.int32)
        l = free_sf[min(int(uniforms[2 * v] * len(free_sf)), len(free_sf) - 1)]
        free = full & ~blocked[v * L + l]
        subs = [m for m in range(1, full + 1) if (m & ~free) == 0]
        m = subs[min(int(uniforms[2 * v + 1] * len(subs)), len(subs) - 1)]
        o = int(opt_start[v]) + l * full + (m - 1)
        choice[v] = o
        for e in range(int(eff_start[o]), int(eff_start[o + 1])):
            blocked[int(eff_veh[e]) * L + int(eff_sf[e])] |= int(eff_mask[e])
    return True, np.array(choice, dtype=np.int32)
