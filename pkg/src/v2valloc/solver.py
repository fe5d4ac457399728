"""Exact maximisation of ``c^T x``, a brute-force oracle, and the RA baseline.

The branch-and-bound works on per-vehicle *options*: a subframe plus a
nonempty subset of its ``K`` subchannels whose capacity lands inside the
vehicle's window (plus the empty allocation when ``0`` is in the window).
Two options of different vehicles are compatible when no linearised
conflict pair ``x_a + x_b <= 1`` joins their bits.  Type III is implied by
confining options to one subframe, which is checked against the pair set
before searching.

Search kernel arrays (0-based, vehicles renumbered in search order)::

    opt_start[v] .. opt_start[v+1]   options of vehicle v, in branching order
    opt_sf, opt_val                  subframe and capacity sum per option
    val_order                        same ranges, sorted by value descending
    idle[v]                          local index of the empty option, or -1
    nbr_start, nbr_list              vehicles sharing a conflict pair with v
    nbr_rev[e]                       position of v in the list of nbr_list[e]
    nbr_woff[e]                      word offset of that neighbour's block
    sup_start[o], sup                per option, one bitset per neighbour of
                                     the neighbour's compatible options
    sfm                              per vehicle and subframe, bitset of its
                                     nonempty options in that subframe
    group_start, group_members       vehicle sets that need pairwise distinct
                                     subframes (clusters, when the pair set
                                     makes them mutually exclusive)

Bitsets are little-endian ``uint64`` words, ``ceil(n_options / 64)`` per
vehicle.  Every node restores arc consistency over option compatibility
and prunes each group's subframe choices to those that fit some matching;
it then branches on the vehicle with the fewest options left, weighted by
how often that vehicle has caused a dead end.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernel
from .compiler import WINDOW_TOL, Formulation, Problem, assemble, check_feasible
from .scenario import CapacityMap, Scenario

BRUTE_FORCE_MAX_BITS = 24


class Status(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    NO_FEASIBLE_FOUND = "no_feasible_found"
    TIMED_OUT = "timed_out"


class InstanceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class Limits:
    """Search budget.  ``node_limit`` applies to each independent component."""

    node_limit: int = 2_000_000
    time_limit: float | None = None


@dataclass
class SolveResult:
    status: Status
    objective: float | None = None
    x: np.ndarray | None = None
    nodes: int = 0
    wall_time: float = 0.0
    tries: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def has_allocation(self) -> bool:
        return self.x is not None


def allocation_view(x, K: int, L: int) -> list[tuple[int, tuple[int, ...]] | None]:
    """Per vehicle ``(subframe, subchannels)`` (1-based), ``None`` if idle.

    Raises ``ValueError`` if a vehicle spans several subframes.
    """
    X = np.asarray(x).reshape(-1, K * L)
    out = []
    for row in X:
        ks = np.flatnonzero(row)
        if ks.size == 0:
            out.append(None)
            continue
        sfs = set(int(k) // K for k in ks)
        if len(sfs) != 1:
            raise ValueError("allocation spans several subframes")
        out.append((sfs.pop() + 1, tuple(int(k) + 1 for k in ks)))
    return out


# -- conflict structure ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Structure:
    N: int
    K: int
    L: int
    # CSR over bits of the symmetric conflict graph
    indptr: np.ndarray
    neighbors: np.ndarray
    components: tuple[tuple[int, ...], ...]
    # vehicle pairs that conflict on every same-subframe bit pair
    exclusive: frozenset[tuple[int, int]]


@functools.lru_cache(maxsize=32)
def _structure_cached(N, K, L, pairs_key: bytes, n_pairs: int) -> _Structure:
    pairs = np.frombuffer(pairs_key, dtype=np.int64).reshape(n_pairs, 2)
    n_bits = N * K * L
    KL = K * L
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.searchsorted(src, np.arange(n_bits + 1))

    va, vb = src // KL, dst // KL
    # Type III must be fully present for subframe-confined options to be exact
    same = va == vb
    sa, sb = (src[same] % KL) // K, (dst[same] % KL) // K
    cross = int(np.count_nonzero(sa != sb))
    expected = N * K * K * L * (L - 1)
    if cross != expected:
        raise ValueError(
            "conflict set does not confine each vehicle to one subframe "
            f"({cross} of {expected} cross-subframe pairs present)"
        )

    parent = list(range(N))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in set(zip(va[~same].tolist(), vb[~same].tolist())):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(N):
        groups.setdefault(find(v), []).append(v)

    fwd = (va < vb) & ((src % KL) // K == (dst % KL) // K)
    keys, counts = np.unique(va[fwd] * N + vb[fwd], return_counts=True)
    full = keys[counts == K * K * L]
    exclusive = frozenset(zip((full // N).tolist(), (full % N).tolist()))
    return _Structure(N, K, L, indptr, dst, tuple(tuple(g) for g in groups.values()),
                      exclusive)


def _structure(p: Problem) -> _Structure:
    pairs = np.ascontiguousarray(p.linearized_pairs(), dtype=np.int64)
    return _structure_cached(p.N, p.K, p.L, pairs.tobytes(), pairs.shape[0])


def _submask_bits(K: int) -> np.ndarray:
    m = np.arange(1 << K)
    return ((m[:, None] >> np.arange(K)) & 1).astype(np.int64)


def _neighbor_masks(st: _Structure, v: int) -> np.ndarray:
    """``(K*L, N*L)`` uint8: bits of (vehicle, subframe) adjacent to each bit of ``v``."""
    K, L, KL = st.K, st.L, st.K * st.L
    out = np.zeros((KL, st.N * L), dtype=np.uint8)
    lo, hi = st.indptr[v * KL], st.indptr[(v + 1) * KL]
    nb = st.neighbors[lo:hi]
    srcs = np.repeat(np.arange(KL), np.diff(st.indptr[v * KL:(v + 1) * KL + 1]))
    w, k = nb // KL, nb % KL
    np.bitwise_or.at(out, (srcs, w * L + k // K), (1 << (k % K)).astype(np.uint8))
    return out


def _subset_or(rows: np.ndarray, K: int) -> np.ndarray:
    """OR of ``rows[bit]`` over each submask's bits; shape ``(2**K, cols)``."""
    acc = np.zeros((1 << K, rows.shape[1]), dtype=np.uint8)
    for m in range(1, 1 << K):
        low = (m & -m).bit_length() - 1
        acc[m] = acc[m & (m - 1)] | rows[low]
    return acc


@dataclass
class _ConstructInput:
    """Options plus, per option, the (vehicle, subframe, mask) bits it blocks."""

    vehicles: list[int]  # global vehicle index per local position
    opt_start: np.ndarray
    opt_sf: np.ndarray
    opt_mask: np.ndarray
    eff_start: np.ndarray
    eff_veh: np.ndarray
    eff_sf: np.ndarray
    eff_mask: np.ndarray


@dataclass
class _SearchInput:
    vehicles: list[int]
    opt_start: np.ndarray
    opt_sf: np.ndarray
    opt_mask: np.ndarray
    opt_val: np.ndarray
    val_order: np.ndarray
    idle: np.ndarray
    nbr_start: np.ndarray
    nbr_list: np.ndarray
    nbr_rev: np.ndarray
    nbr_woff: np.ndarray
    sup_start: np.ndarray
    sup: np.ndarray
    sfm: np.ndarray
    group_start: np.ndarray
    group_members: np.ndarray

    def arrays(self):
        return (self.opt_start, self.opt_sf, self.opt_val, self.val_order, self.idle,
                self.nbr_start, self.nbr_list, self.nbr_rev, self.nbr_woff,
                self.sup_start, self.sup, self.sfm,
                self.group_start, self.group_members)


def _exclusive_groups(st: _Structure, vehicles: list[int], candidates) -> list[list[int]]:
    """Local indices of each candidate set that is a clique of exclusive pairs."""
    pos = {v: i for i, v in enumerate(vehicles)}
    out = []
    for cand in candidates:
        members = sorted(pos[v] for v in cand if v in pos)
        if len(members) < 2:
            continue
        glob = [vehicles[i] for i in members]
        if all((min(a, b), max(a, b)) in st.exclusive
               for i, a in enumerate(glob) for b in glob[i + 1:]):
            out.append(members)
    return out


def _blocked_rows(st: _Structure, v: int, sfs, masks) -> np.ndarray:
    """``(n_options, N*L)`` uint8: bits of every (vehicle, subframe) each option blocks."""
    K, L = st.K, st.L
    nbm = _neighbor_masks(st, v)
    out = np.zeros((len(sfs), st.N * L), dtype=np.uint8)
    cache = {}
    for a, (sf, mask) in enumerate(zip(sfs, masks)):
        if mask:
            if sf not in cache:
                cache[sf] = _subset_or(nbm[sf * K:(sf + 1) * K], K)
            out[a] = cache[sf][mask]
    return out


def _pack_bits(rows: np.ndarray, n_words: int) -> np.ndarray:
    """Pack boolean ``rows`` into little-endian uint64 words, ``n_words`` per row."""
    packed = np.packbits(rows.astype(np.uint8), axis=1, bitorder="little")
    out = np.zeros((rows.shape[0], n_words * 8), dtype=np.uint8)
    out[:, :packed.shape[1]] = packed
    return out.view("<u8")


def _build_search_input(st: _Structure, vehicles: list[int], option_table,
                        groups=()) -> _SearchInput:
    """``option_table(v)`` yields ``(sf, mask, value)`` rows in branching order."""
    L = st.L
    KL = st.K * L
    n = len(vehicles)
    pos = {v: i for i, v in enumerate(vehicles)}
    tables = [option_table(v) for v in vehicles]
    counts = [len(t[0]) for t in tables]
    opt_start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
    words = [(c + 63) // 64 for c in counts]
    opt_sf = np.asarray([sf for t in tables for sf in t[0]], dtype=np.int32)
    opt_mask = np.asarray([m for t in tables for m in t[1]], dtype=np.int32)
    opt_val = np.asarray([x for t in tables for x in t[2]], dtype=np.float64)
    val_order = np.concatenate(
        [opt_start[i] + np.argsort(-opt_val[opt_start[i]:opt_start[i + 1]], kind="stable")
         for i in range(n)] or [np.zeros(0)]
    ).astype(np.int32)
    idle = np.full(n, -1, dtype=np.int32)
    for i in range(n):
        zero = np.flatnonzero(opt_mask[opt_start[i]:opt_start[i + 1]] == 0)
        if zero.size:
            idle[i] = zero[0]

    nbrs = []
    for v in vehicles:
        lo, hi = st.indptr[v * KL], st.indptr[(v + 1) * KL]
        other = np.unique(st.neighbors[lo:hi] // KL)
        nbrs.append([pos[u] for u in other.tolist() if u != v])
    nbr_start = np.concatenate([[0], np.cumsum([len(x) for x in nbrs])]).astype(np.int32)
    nbr_list = np.asarray([j for x in nbrs for j in x], dtype=np.int32)
    slot = {(i, j): nbr_start[i] + k for i, x in enumerate(nbrs) for k, j in enumerate(x)}
    nbr_rev = np.asarray([slot[(j, i)] for i, x in enumerate(nbrs) for j in x], dtype=np.int32)
    nbr_woff = np.zeros(len(nbr_list), dtype=np.int32)
    block = []
    for i, x in enumerate(nbrs):
        offs = np.concatenate([[0], np.cumsum([words[j] for j in x])]).astype(np.int32)
        nbr_woff[nbr_start[i]:nbr_start[i + 1]] = offs[:-1]
        block.append(int(offs[-1]))

    sup_parts, sup_start, at = [], [], 0
    for i, v in enumerate(vehicles):
        sfs, masks, _ = tables[i]
        rows = _blocked_rows(st, v, sfs, masks)
        parts = []
        for j in nbrs[i]:
            a, b = opt_start[j], opt_start[j + 1]
            cols = vehicles[j] * L + opt_sf[a:b]
            compatible = (rows[:, cols] & opt_mask[a:b].astype(np.uint8)) == 0
            parts.append(_pack_bits(compatible, words[j]))
        mat = np.concatenate(parts, axis=1) if parts else np.zeros((counts[i], 0), "<u8")
        sup_start.extend((at + block[i] * np.arange(counts[i])).tolist())
        at += block[i] * counts[i]
        sup_parts.append(mat.reshape(-1))

    sfm_parts = []
    for i in range(n):
        a, b = opt_start[i], opt_start[i + 1]
        in_sf = (opt_sf[a:b][None, :] == np.arange(L)[:, None]) & (opt_mask[a:b] != 0)
        sfm_parts.append(_pack_bits(in_sf, words[i]).reshape(-1))

    i32 = np.int32
    return _SearchInput(
        vehicles=list(vehicles), opt_start=opt_start, opt_sf=opt_sf,
        opt_mask=opt_mask, opt_val=opt_val, val_order=val_order, idle=idle,
        nbr_start=nbr_start, nbr_list=nbr_list, nbr_rev=nbr_rev, nbr_woff=nbr_woff,
        sup_start=np.asarray(sup_start, dtype=np.int64),
        sup=np.concatenate(sup_parts).astype(np.uint64) if sup_parts else np.zeros(0, np.uint64),
        sfm=np.concatenate(sfm_parts).astype(np.uint64) if sfm_parts else np.zeros(0, np.uint64),
        group_start=np.cumsum([0] + [len(g) for g in groups]).astype(i32),
        group_members=np.asarray([w for g in groups for w in g], dtype=i32),
    )


def _build_construct_input(st: _Structure, vehicles: list[int], option_table) -> _ConstructInput:
    """``option_table(v)`` yields ``(sf, mask, value)`` rows; values are ignored."""
    K, L = st.K, st.L
    n = len(vehicles)
    opt_start = [0]
    sf_l, mask_l = [], []
    eff_start = [0]
    ev, es, em = [], [], []
    for i, v in enumerate(vehicles):
        sfs, masks, _ = option_table(v)
        sf_l.extend(sfs)
        mask_l.extend(masks)
        opt_start.append(len(sf_l))

        others = [j for j in range(n) if j != i]
        if others:
            nbm = _neighbor_masks(st, v)
            cols = (np.asarray([vehicles[j] for j in others])[:, None] * L
                    + np.arange(L)).reshape(-1)
            slot_index = (np.asarray(others)[:, None] * L + np.arange(L)).reshape(-1)
            cache = {}
        for sf, mask in zip(sfs, masks):
            if others and mask:
                if sf not in cache:
                    cache[sf] = _subset_or(nbm[sf * K:(sf + 1) * K][:, cols], K)
                row = cache[sf][mask]
                nz = np.flatnonzero(row)
                sl = slot_index[nz]
                ev.extend((sl // L).tolist())
                es.extend((sl % L).tolist())
                em.extend(row[nz].tolist())
            eff_start.append(len(ev))
    i32 = np.int32
    return _ConstructInput(
        vehicles=list(vehicles),
        opt_start=np.asarray(opt_start, dtype=i32),
        opt_sf=np.asarray(sf_l, dtype=i32),
        opt_mask=np.asarray(mask_l, dtype=i32),
        eff_start=np.asarray(eff_start, dtype=i32),
        eff_veh=np.asarray(ev, dtype=i32),
        eff_sf=np.asarray(es, dtype=i32),
        eff_mask=np.asarray(em, dtype=i32),
    )


def _window_options(p: Problem, st: _Structure):
    """Option table for the exact search: in-window subsets, branching order."""
    K, L = p.K, p.L
    bits = _submask_bits(K)
    C = p.c.reshape(p.N, L, K)
    lower, upper = p.lower, p.upper
    masks_all = np.arange(1, 1 << K)

    def table(v):
        # subsets with an internal conflict pair are not representable
        self_nb = _neighbor_masks(st, v)[:, v * L:(v + 1) * L]
        sums = C[v] @ bits[1:].T  # (L, 2**K - 1)
        sfs, masks, vals = [], [], []
        for l in range(L):
            own = self_nb[l * K:(l + 1) * K, l]
            s = sums[l]
            ok = (s >= lower[v] - WINDOW_TOL) & (s <= upper[v] + WINDOW_TOL)
            cand = masks_all[ok]
            clean = [m for m in cand.tolist()
                     if not any(own[b] & m for b in range(K) if m >> b & 1)]
            cand = np.asarray(clean, dtype=np.int64)
            if cand.size == 0:
                continue
            cv = s[cand - 1]
            order = np.argsort(-cv, kind="stable")
            sfs.extend([l] * cand.size)
            masks.extend(cand[order].tolist())
            vals.extend(cv[order].tolist())
        if lower[v] - WINDOW_TOL <= 0.0 <= upper[v] + WINDOW_TOL:
            sfs.append(0)
            masks.append(0)
            vals.append(0.0)
        return sfs, masks, vals

    return table


def search_order(p: Problem) -> list[int]:
    """Vehicles by descending demand, ties by id (0-based indices)."""
    return sorted(range(p.N), key=lambda i: (-p.q[i], i))


def _x_from_choices(p: Problem, inputs) -> np.ndarray:
    K, L = p.K, p.L
    x = np.zeros(p.n_bits, dtype=np.int8)
    for ki, choice in inputs:
        for pos, o in enumerate(choice.tolist()):
            v = ki.vehicles[pos]
            sf, mask = int(ki.opt_sf[o]), int(ki.opt_mask[o])
            for b in range(K):
                if mask >> b & 1:
                    x[v * K * L + sf * K + b] = 1
    return x


def solve_exact(p: Problem, limits: Limits | None = None) -> SolveResult:
    """Depth-first branch-and-bound over per-vehicle options.

    Each independent component of the conflict graph is searched on its
    own with ``limits.node_limit`` nodes.  ``Optimal`` means every component
    was exhausted; ``Feasible`` means a limit stopped the search after an
    incumbent was found everywhere; ``TimedOut`` means some component has
    no incumbent yet.
    """
    limits = limits or Limits()
    t0 = time.perf_counter()
    deadline = time.monotonic() + limits.time_limit if limits.time_limit else 0.0
    st = _structure(p)
    order = search_order(p)
    rank = {v: i for i, v in enumerate(order)}
    comps = sorted((sorted(c, key=rank.__getitem__) for c in st.components),
                   key=lambda c: rank[c[0]])
    table = _window_options(p, st)
    clusters = [sorted(i - 1 for i in c.members) for c in p.scenario.clusters]

    solved = []
    nodes = 0
    exhausted_all = True
    comp_diag = []
    for comp in comps:
        ki = _build_search_input(st, comp, table, _exclusive_groups(st, comp, clusters))
        status, found, best, choice, n, first = kernel.search(
            len(comp), p.L, *ki.arrays(), int(limits.node_limit), float(deadline)
        )
        nodes += int(n)
        comp_diag.append({"vehicles": len(comp), "nodes": int(n),
                          "first_incumbent_node": int(first),
                          "exhausted": status == kernel.STATUS_EXHAUSTED})
        if status == kernel.STATUS_EXHAUSTED and not found:
            return SolveResult(Status.INFEASIBLE, nodes=nodes,
                               wall_time=time.perf_counter() - t0,
                               diagnostics=_diag(comp_diag))
        if not found:
            return SolveResult(Status.TIMED_OUT, nodes=nodes,
                               wall_time=time.perf_counter() - t0,
                               diagnostics=_diag(comp_diag))
        exhausted_all &= status == kernel.STATUS_EXHAUSTED
        solved.append((ki, choice))

    x = _x_from_choices(p, solved)
    return SolveResult(
        Status.OPTIMAL if exhausted_all else Status.FEASIBLE,
        objective=p.objective(x), x=x, nodes=nodes,
        wall_time=time.perf_counter() - t0, diagnostics=_diag(comp_diag),
    )


def _diag(components) -> dict:
    return {"backend": kernel.BACKEND, "components": components}


# -- brute force -----------------------------------------------------------


def enumerate_feasible(p: Problem, chunk: int = 1 << 16) -> np.ndarray:
    """Integer codes ``z`` (``x_j = z >> j & 1``) of every feasible allocation."""
    return _brute(p, chunk, collect=True)[1]


def _brute(p: Problem, chunk: int, collect: bool):
    n = p.n_bits
    if n > BRUTE_FORCE_MAX_BITS:
        raise InstanceTooLargeError(f"brute force needs N*K*L <= {BRUTE_FORCE_MAX_BITS}, got {n}")
    shifts = np.arange(n, dtype=np.int64)
    best_val, best_z = -np.inf, None
    feas = []
    for start in range(0, 1 << n, chunk):
        z = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        X = ((z[:, None] >> shifts) & 1).astype(np.int8)
        ok = p.feasible_mask(X)
        if not np.any(ok):
            continue
        zs = z[ok]
        if collect:
            feas.append(zs)
        vals = X[ok].astype(float) @ p.c
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_z = vals[j], int(zs[j])
    codes = np.concatenate(feas) if feas else np.zeros(0, dtype=np.int64)
    return best_z, codes


def decode(z: int, n_bits: int) -> np.ndarray:
    return ((int(z) >> np.arange(n_bits)) & 1).astype(np.int8)


def brute_force(p: Problem, return_feasible_set: bool = False, chunk: int = 1 << 16):
    """Exhaustive optimum; with ``return_feasible_set`` also the feasible codes."""
    t0 = time.perf_counter()
    best_z, codes = _brute(p, chunk, collect=return_feasible_set)
    if best_z is None:
        res = SolveResult(Status.INFEASIBLE, wall_time=time.perf_counter() - t0)
    else:
        x = decode(best_z, p.n_bits)
        res = SolveResult(Status.OPTIMAL, objective=p.objective(x), x=x,
                          nodes=1 << p.n_bits, wall_time=time.perf_counter() - t0)
    if return_feasible_set:
        return res, codes
    return res


# -- EF vs RF --------------------------------------------------------------


@dataclass
class Comparison:
    ef: SolveResult
    rf: SolveResult

    @property
    def equal(self) -> bool:
        if self.ef.status != self.rf.status:
            return False
        return self.ef.objective == self.rf.objective

    def to_dict(self) -> dict:
        return {
            "ef_status": self.ef.status.value, "rf_status": self.rf.status.value,
            "ef_objective": self.ef.objective, "rf_objective": self.rf.objective,
            "equal": self.equal,
        }


def solve_rf_equals_ef(s: Scenario, cm: CapacityMap, limits: Limits | None = None) -> Comparison:
    ef = solve_exact(assemble(s, cm, Formulation.EF), limits)
    rf = solve_exact(assemble(s, cm, Formulation.RF), limits)
    return Comparison(ef, rf)


# -- random allocation -----------------------------------------------------


def random_allocation(s: Scenario, cm: CapacityMap, seed: int = 0,
                      max_tries: int = 10_000) -> SolveResult:
    """Monte Carlo baseline that enforces Types II-IV and ignores Type I.

    Try ``t`` uses ``numpy.random.default_rng([seed, t])``.  Vehicles are
    placed in id order; each draws a subframe uniformly among those still
    holding a free subchannel, then a nonempty subset of that subframe's
    free subchannels uniformly.  A try fails when some vehicle finds no
    free subframe.
    """
    t0 = time.perf_counter()
    p = assemble(s, cm, Formulation.RF)
    st = _structure(p)
    ki = _ra_input(p, st)
    for t in range(max_tries):
        u = np.random.default_rng([seed, t]).random(2 * p.N)
        ok, choice = kernel.random_construct(
            p.N, p.L, p.K, u, ki.opt_start, ki.opt_sf, ki.opt_mask,
            ki.eff_start, ki.eff_veh, ki.eff_sf, ki.eff_mask,
        )
        if ok:
            x = _x_from_choices(p, [(ki, choice)])
            if not check_feasible(x, p).conflict_free:
                raise AssertionError("random construction produced a conflict")
            return SolveResult(Status.FEASIBLE, objective=p.objective(x), x=x,
                               tries=t + 1, wall_time=time.perf_counter() - t0,
                               diagnostics={"backend": kernel.BACKEND})
    return SolveResult(Status.NO_FEASIBLE_FOUND, tries=max_tries,
                       wall_time=time.perf_counter() - t0,
                       diagnostics={"backend": kernel.BACKEND})


@functools.lru_cache(maxsize=16)
def _ra_input_cached(st: _Structure) -> _ConstructInput:
    K, L = st.K, st.L
    full = (1 << K) - 1
    sfs = np.repeat(np.arange(L), full).tolist()
    masks = np.tile(np.arange(1, full + 1), L).tolist()
    vals = [0.0] * len(sfs)
    return _build_construct_input(st, list(range(st.N)), lambda v: (sfs, masks, vals))


def _ra_input(p: Problem, st: _Structure) -> _ConstructInput:
    return _ra_input_cached(st)
