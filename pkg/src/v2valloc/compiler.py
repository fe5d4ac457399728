"""Conflict matrices and the exact (EF) / relaxed (RF) problem compilations.

Bit layout of an allocation ``x`` (length ``N*K*L``) is vehicle-major:
bit ``i*K*L + k`` is vehicle ``i+1`` on subchannel ``k+1``, and subchannel
``k+1`` lives in subframe ``k // K + 1``.

EF keeps one product per vehicle pair and subframe (Type II), per vehicle
and subframe pair (Type III) and per one-hop pair and subchannel (Type IV).
RF collapses each family to one scalar quadratic form ``x^T M x`` whose
coupling matrix is kept in Kronecker-factored form:

* Type II:  ``Gt kron (I_L kron 1_KxK)``
* Type III: ``I_N kron (Qt kron 1_KxK)``
* Type IV:  ``Ht kron I_KL``
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import tensor_ops as T
from .scenario import (
    CapacityMap,
    Scenario,
    ensure_valid,
    intra_cluster_pairs,
    one_hop_pairs,
)

WINDOW_TOL = 1e-9


class Formulation(str, Enum):
    EF = "ef"
    RF = "rf"


# -- conflict matrices -----------------------------------------------------


def _pair_matrices(pairs, n: int) -> tuple[np.ndarray, np.ndarray]:
    minus = np.zeros((len(pairs), n), dtype=np.uint8)
    plus = np.zeros((len(pairs), n), dtype=np.uint8)
    for row, (a, b) in enumerate(pairs):
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise ValueError(f"pair ({a}, {b}) out of range for {n} vehicles")
        minus[row, a - 1] = 1
        plus[row, b - 1] = 1
    return minus, plus


def build_G(pairs, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(G-, G+)``: row p marks the first / second vehicle of intra-cluster pair p."""
    return _pair_matrices(pairs, n)


def build_H(pairs, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(H-, H+)`` for one-hop pairs, same row convention as :func:`build_G`."""
    return _pair_matrices(pairs, n)


def subframe_pairs(L: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, L + 1), 2))


def build_Q(L: int) -> tuple[np.ndarray, np.ndarray]:
    """``(Q-, Q+)`` with one row per subframe pair ``(l, l')``, ``l < l'``.

    ``Q+`` marks ``l`` and ``Q-`` marks ``l'`` so that ``Q-^T Q+`` is the
    strictly lower triangular all-ones matrix.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    pairs = subframe_pairs(L)
    qm = np.zeros((len(pairs), L), dtype=np.uint8)
    qp = np.zeros((len(pairs), L), dtype=np.uint8)
    for row, (l1, l2) in enumerate(pairs):
        qp[row, l1 - 1] = 1
        qm[row, l2 - 1] = 1
    return qm, qp


def tilde(Am, Ap) -> np.ndarray:
    """``Am^T Ap`` clipped to 0/1."""
    Am = np.asarray(Am)
    Ap = np.asarray(Ap)
    if Am.shape != Ap.shape:
        raise ValueError(f"shape mismatch: {Am.shape} vs {Ap.shape}")
    prod = Am.astype(np.int64).T @ Ap.astype(np.int64)
    return np.minimum(prod, 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class ConflictMatrices:
    Gm: np.ndarray
    Gp: np.ndarray
    Qm: np.ndarray
    Qp: np.ndarray
    Hm: np.ndarray
    Hp: np.ndarray
    Gt: np.ndarray
    Qt: np.ndarray
    Ht: np.ndarray
    g_pairs: tuple[tuple[int, int], ...]
    q_pairs: tuple[tuple[int, int], ...]
    h_pairs: tuple[tuple[int, int], ...]

    @property
    def P(self) -> int:
        return len(self.g_pairs)

    @property
    def S(self) -> int:
        return len(self.q_pairs)

    @property
    def U(self) -> int:
        return len(self.h_pairs)


def build_conflicts(s: Scenario) -> ConflictMatrices:
    return _build_conflicts_cached(
        s.N, s.L, tuple(intra_cluster_pairs(s)), tuple(one_hop_pairs(s))
    )


@functools.lru_cache(maxsize=64)
def _build_conflicts_cached(n, L, g_pairs, h_pairs) -> ConflictMatrices:
    Gm, Gp = build_G(g_pairs, n)
    Qm, Qp = build_Q(L)
    Hm, Hp = build_H(h_pairs, n)
    mats = dict(Gm=Gm, Gp=Gp, Qm=Qm, Qp=Qp, Hm=Hm, Hp=Hp,
                Gt=tilde(Gm, Gp), Qt=tilde(Qm, Qp), Ht=tilde(Hm, Hp))
    for m in mats.values():
        m.setflags(write=False)
    return ConflictMatrices(
        **mats, g_pairs=g_pairs, q_pairs=tuple(subframe_pairs(L)), h_pairs=h_pairs
    )


def subframe_occupancy(x, N: int, K: int, L: int) -> np.ndarray:
    """``x_s = (I_NL kron 1_1xK) x``: subchannels used per (vehicle, subframe)."""
    x = np.asarray(x)
    if x.shape[-1] != N * K * L:
        raise ValueError(f"x has length {x.shape[-1]}, expected {N * K * L}")
    return T.block_sum(x.astype(np.int64, copy=False), K)


# -- sparse operator supports ---------------------------------------------


def _row_supports(M) -> np.ndarray:
    """Column indices of the nonzeros of each row; all rows must have equal count."""
    M = np.asarray(M)
    counts = np.count_nonzero(M, axis=1)
    if M.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if not np.all(counts == counts[0]):
        raise ValueError("rows have unequal support sizes")
    rows, cols = np.nonzero(M)
    return cols.reshape(M.shape[0], counts[0]).astype(np.int64)


def _kron_supports(SA, SB, ncols_b: int) -> np.ndarray:
    """Row supports of ``A kron B`` from those of ``A`` and ``B``."""
    ra, wa = SA.shape
    rb, wb = SB.shape
    out = SA[:, None, :, None] * ncols_b + SB[None, :, None, :]
    return out.reshape(ra * rb, wa * wb)


def _compose_supports(S1, S2) -> np.ndarray:
    """Row supports of the product ``O1 O2`` of nonnegative 0/1 operators."""
    r = S1.shape[0]
    if r == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return np.sort(S2[S1].reshape(r, -1), axis=1)


def _pairs_from_products(left, right) -> np.ndarray:
    """Bit pairs ``(a, b)`` with ``a < b`` appearing in ``(u.x)(v.x)`` products."""
    if left.shape[0] == 0 or left.shape[1] == 0 or right.shape[1] == 0:
        return np.zeros((0, 2), dtype=np.int64)
    a = np.broadcast_to(left[:, :, None], (left.shape[0], left.shape[1], right.shape[1]))
    b = np.broadcast_to(right[:, None, :], a.shape)
    pairs = np.stack([a.reshape(-1), b.reshape(-1)], axis=1)
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise ValueError("product constraint contains a squared term")
    return np.sort(pairs, axis=1)


def _pairs_from_kron_support(A, B) -> np.ndarray:
    """Off-diagonal nonzeros ``(a, b)`` of ``A kron B``, unordered."""
    ia, ja = np.nonzero(A)
    ib, jb = np.nonzero(B)
    nb_r, nb_c = B.shape
    rows = (ia[:, None] * nb_r + ib[None, :]).reshape(-1)
    cols = (ja[:, None] * nb_c + jb[None, :]).reshape(-1)
    pairs = np.stack([rows, cols], axis=1).astype(np.int64)
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise ValueError("coupling matrix has a diagonal entry")
    return np.sort(pairs, axis=1)


def _unique_pairs(parts, n_bits: int) -> np.ndarray:
    parts = [p for p in parts if p.size]
    if not parts:
        return np.zeros((0, 2), dtype=np.int64)
    allp = np.concatenate(parts)
    keys = np.unique(allp[:, 0] * n_bits + allp[:, 1])
    return np.stack([keys // n_bits, keys % n_bits], axis=1)


# -- problem ---------------------------------------------------------------


@dataclass(frozen=True)
class TypeIViolation:
    vehicle: int
    rate: float
    window: tuple[float, float]


@dataclass
class ViolationReport:
    typeI: list[TypeIViolation] = field(default_factory=list)
    typeII: list[tuple[tuple[int, int], int]] = field(default_factory=list)
    typeIII: list[tuple[int, tuple[int, int]]] = field(default_factory=list)
    typeIV: list[tuple[tuple[int, int], int]] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not (self.typeI or self.typeII or self.typeIII or self.typeIV)

    @property
    def conflict_free(self) -> bool:
        """Types II-IV only."""
        return not (self.typeII or self.typeIII or self.typeIV)

    def counts(self) -> dict[str, int]:
        return {
            "typeI": len(self.typeI),
            "typeII": len(self.typeII),
            "typeIII": len(self.typeIII),
            "typeIV": len(self.typeIV),
        }

    def to_dict(self) -> dict:
        return {
            "typeI": [
                {"vehicle": v.vehicle, "rate": v.rate, "window": list(v.window)}
                for v in self.typeI
            ],
            "typeII": [{"pair": list(p), "subframe": l} for p, l in self.typeII],
            "typeIII": [{"vehicle": i, "subframes": list(p)} for i, p in self.typeIII],
            "typeIV": [{"pair": list(p), "subchannel": k} for p, k in self.typeIV],
        }


@dataclass(frozen=True, eq=False)
class Problem:
    """A compiled allocation problem: ``max c^T x`` under windows and conflicts."""

    kind: Formulation
    scenario: Scenario
    c: np.ndarray
    q: np.ndarray
    epsilon: float
    conflict: ConflictMatrices

    @property
    def N(self) -> int:
        return self.scenario.N

    @property
    def K(self) -> int:
        return self.scenario.K

    @property
    def L(self) -> int:
        return self.scenario.L

    @property
    def n_bits(self) -> int:
        return self.N * self.K * self.L

    @property
    def lower(self) -> np.ndarray:
        return self.q - self.epsilon

    @property
    def upper(self) -> np.ndarray:
        return self.q + self.epsilon

    @property
    def group_counts(self) -> dict[str, int]:
        n = self.N
        if self.kind is Formulation.EF:
            return {"typeI": n, "typeII": self.conflict.P, "typeIV": self.conflict.U,
                    "total": n + self.conflict.P + self.conflict.U}
        return {"typeI": n, "typeII": 1, "typeIII": 1, "typeIV": 1, "total": n + 3}

    def objective(self, x) -> float:
        return float(np.dot(self.c, np.asarray(x, dtype=float)))

    def rates(self, x) -> np.ndarray:
        """``(I_N kron 1_1xKL)(c o x)``: attained rate per vehicle."""
        x = np.asarray(x, dtype=float)
        return T.block_sum(self.c * x, self.K * self.L)

    def window_ok(self, rates) -> np.ndarray:
        rates = np.asarray(rates)
        return (rates >= self.lower - WINDOW_TOL) & (rates <= self.upper + WINDOW_TOL)

    # quadratic constraint families

    def constraint_values(self, x):
        """EF: the three product vectors; RF: the three scalar forms.

        ``x`` may carry leading batch axes.
        """
        x = np.asarray(x).astype(np.int64, copy=False)
        cm = self.conflict
        N, K, L = self.N, self.K, self.L
        xs = subframe_occupancy(x, N, K, L)
        if self.kind is Formulation.EF:
            I_L = T.identity(L)
            g = T.kron_matvec(cm.Gp, I_L, xs) * T.kron_matvec(cm.Gm, I_L, xs)
            q = T.kron_matvec(T.identity(N), cm.Qp, xs) * T.kron_matvec(T.identity(N), cm.Qm, xs)
            I_KL = T.identity(K * L)
            h = T.kron_matvec(cm.Hp, I_KL, x) * T.kron_matvec(cm.Hm, I_KL, x)
            return g, q, h
        g = T.kron_quadratic(xs, cm.Gt, T.identity(L))
        q = T.kron_quadratic(xs, T.identity(N), cm.Qt)
        h = T.kron_quadratic(x, cm.Ht, T.identity(K * L))
        return g, q, h

    def conflict_free_mask(self, x) -> np.ndarray | bool:
        g, q, h = self.constraint_values(x)
        if self.kind is Formulation.EF:
            return ~(np.any(g != 0, axis=-1) | np.any(q != 0, axis=-1) | np.any(h != 0, axis=-1))
        return (np.asarray(g) == 0) & (np.asarray(q) == 0) & (np.asarray(h) == 0)

    def feasible_mask(self, x) -> np.ndarray | bool:
        x = np.asarray(x)
        rates = T.block_sum(self.c * x, self.K * self.L)
        return np.all(self.window_ok(rates), axis=-1) & self.conflict_free_mask(x)

    def linearized_pairs(self) -> np.ndarray:
        """Bit pairs ``(a, b)``, ``a < b``, that may not both be 1 (``x_a + x_b <= 1``)."""
        return _linearized(self.kind, self.N, self.K, self.L, self.conflict)


@functools.lru_cache(maxsize=16)
def _linearized(kind, N, K, L, conflict: ConflictMatrices) -> np.ndarray:
    # ConflictMatrices hashes by identity and is itself cached per structure
    out = _linearize_impl(kind, N, K, L, conflict)
    out.setflags(write=False)
    return out


def _linearize_impl(kind, N, K, L, cm: ConflictMatrices) -> np.ndarray:
    n_bits = N * K * L
    if kind is Formulation.EF:
        # literal operator products, row by row
        occ = _row_supports(T.kronecker(T.identity(N * L), T.ones(1, K)))
        I_L = _row_supports(T.identity(L))
        I_N = _row_supports(T.identity(N))
        I_KL = _row_supports(T.identity(K * L))
        parts = []
        if cm.P:
            left = _compose_supports(_kron_supports(_row_supports(cm.Gp), I_L, L), occ)
            right = _compose_supports(_kron_supports(_row_supports(cm.Gm), I_L, L), occ)
            parts.append(_pairs_from_products(left, right))
        if cm.S:
            left = _compose_supports(_kron_supports(I_N, _row_supports(cm.Qp), L), occ)
            right = _compose_supports(_kron_supports(I_N, _row_supports(cm.Qm), L), occ)
            parts.append(_pairs_from_products(left, right))
        if cm.U:
            left = _kron_supports(_row_supports(cm.Hp), I_KL, K * L)
            right = _kron_supports(_row_supports(cm.Hm), I_KL, K * L)
            parts.append(_pairs_from_products(left, right))
        return _unique_pairs(parts, n_bits)
    blocks = rf_coupling_factors(cm, N, K, L)
    return _unique_pairs([_pairs_from_kron_support(A, B) for A, B in blocks], n_bits)


def rf_coupling_factors(cm: ConflictMatrices, N: int, K: int, L: int):
    """``(A, B)`` factor pairs of the three RF coupling matrices ``A kron B``.

    ``(I_NL kron 1_Kx1)(Gt kron I_L)(I_NL kron 1_1xK)`` reduces to
    ``Gt kron (I_L kron 1_KxK)`` by the mixed-product rule, and likewise for Qt.
    """
    J = T.ones(K, K)
    return [
        (cm.Gt, T.kronecker(T.identity(L), J)),
        (T.identity(N), T.kronecker(cm.Qt, J)),
        (cm.Ht, T.identity(K * L)),
    ]


def assemble(s: Scenario, cm: CapacityMap, kind: Formulation | str) -> Problem:
    kind = Formulation(kind)
    ensure_valid(s)
    c = np.asarray(cm.vector, dtype=float)
    if c.shape[0] != s.N * s.K * s.L:
        raise ValueError(
            f"capacity map has {c.shape[0]} entries, expected N*K*L={s.N * s.K * s.L}"
        )
    c = c.copy()
    c.setflags(write=False)
    q = s.qos
    q.setflags(write=False)
    return Problem(kind=kind, scenario=s, c=c, q=q, epsilon=float(s.epsilon),
                   conflict=build_conflicts(s))


# -- feasibility report ----------------------------------------------------


def check_feasible(x, p: Problem) -> ViolationReport:
    """Every Type I-IV violation instance of allocation ``x`` under ``p``."""
    x = np.asarray(x)
    if x.shape != (p.n_bits,):
        raise ValueError(f"x has shape {x.shape}, expected ({p.n_bits},)")
    x = x.astype(np.int64)
    N, K, L = p.N, p.K, p.L
    cm = p.conflict
    report = ViolationReport()

    rates = p.rates(x)
    ok = p.window_ok(rates)
    for i in np.flatnonzero(~ok):
        report.typeI.append(
            TypeIViolation(int(i) + 1, float(rates[i]), (float(p.lower[i]), float(p.upper[i])))
        )

    if p.kind is Formulation.EF:
        g, q, h = p.constraint_values(x)
        for r in np.flatnonzero(g):
            pair, l = divmod(int(r), L)
            report.typeII.append((cm.g_pairs[pair], l + 1))
        for r in np.flatnonzero(q):
            i, sp = divmod(int(r), cm.S)
            report.typeIII.append((i + 1, cm.q_pairs[sp]))
        for r in np.flatnonzero(h):
            pair, k = divmod(int(r), K * L)
            report.typeIV.append((cm.h_pairs[pair], k + 1))
        return report

    # RF: locate the nonzero summands of each scalar form
    xs = subframe_occupancy(x, N, K, L).reshape(N, L)
    X = x.reshape(N, K * L)
    for i, j in zip(*np.nonzero(cm.Gt)):
        for l in np.flatnonzero(xs[i] * xs[j]):
            report.typeII.append(((min(i, j) + 1, max(i, j) + 1), int(l) + 1))
    for l2, l1 in zip(*np.nonzero(cm.Qt)):
        for i in np.flatnonzero(xs[:, l2] * xs[:, l1]):
            report.typeIII.append((int(i) + 1, (min(l1, l2) + 1, max(l1, l2) + 1)))
    for i, j in zip(*np.nonzero(cm.Ht)):
        for k in np.flatnonzero(X[i] * X[j]):
            report.typeIV.append(((min(i, j) + 1, max(i, j) + 1), int(k) + 1))
    report.typeII.sort()
    report.typeIII.sort()
    report.typeIV.sort()
    return report


# -- dump format -----------------------------------------------------------


def dump_problem(p: Problem, linearized: bool = False) -> str:
    """Line-oriented text listing of a compiled problem.

    Records::

        # header lines
        c <bit> <vehicle> <subchannel> <subframe> <capacity>
        window <vehicle> <lower> <upper>
        pair II <vehicle_a> <vehicle_b>
        pair III <subframe_l> <subframe_l'>
        pair IV <vehicle_a> <vehicle_b>
        bits <bit_a> <bit_b>            (only with linearized=True)

    ``c`` records are emitted in bit order, i.e. the layout of ``x``.
    """
    KL = p.K * p.L
    lines = [
        f"# kind={p.kind.value} N={p.N} K={p.K} L={p.L} epsilon={p.epsilon!r}",
        "# c: bit vehicle subchannel subframe capacity_mbps",
    ]
    for bit, val in enumerate(p.c):
        i, k = divmod(bit, KL)
        lines.append(f"c {bit} {i + 1} {k + 1} {k // p.K + 1} {val!r}")
    for i in range(p.N):
        lines.append(f"window {i + 1} {float(p.lower[i])!r} {float(p.upper[i])!r}")
    for a, b in p.conflict.g_pairs:
        lines.append(f"pair II {a} {b}")
    for a, b in p.conflict.q_pairs:
        lines.append(f"pair III {a} {b}")
    for a, b in p.conflict.h_pairs:
        lines.append(f"pair IV {a} {b}")
    if linearized:
        for a, b in p.linearized_pairs():
            lines.append(f"bits {a} {b}")
    return "\n".join(lines) + "\n"
