import itertools

import numpy as np
import pytest

from _instances import random_scenario, scenario_path
from v2valloc import compiler as C
from v2valloc.compiler import Formulation, assemble, check_feasible, subframe_occupancy
from v2valloc.harness import TOY_GOLDEN, toy_scenario
from v2valloc.scenario import (
    CapacityMap,
    Channelization,
    Cluster,
    Scenario,
    Vehicle,
    generate_capacity,
    intra_cluster_pairs,
    load_scenario,
    one_hop_pairs,
)


def toy_problem(kind="ef", c=None):
    s = toy_scenario()
    cm = CapacityMap(np.ones((4, 9)) if c is None else c)
    return assemble(s, cm, kind)


def test_toy_golden_matrices():
    cm = C.build_conflicts(toy_scenario())
    for name in ("Gm", "Gp", "Gt", "Qp", "Qt"):
        assert np.array_equal(getattr(cm, name), TOY_GOLDEN[name]), name
    assert np.array_equal(cm.Qm, TOY_GOLDEN["Qm"].T)
    assert np.array_equal(cm.Hm, TOY_GOLDEN["Hm"].T)
    assert np.array_equal(cm.Hp, TOY_GOLDEN["Hp"].T)
    assert cm.Ht[2, 3] == 1 and cm.Ht.sum() == 1
    assert np.array_equal(cm.Ht.T, TOY_GOLDEN["Ht"])


def test_build_G_examples():
    Gm, Gp = C.build_G([], 3)
    assert Gm.shape == Gp.shape == (0, 3)
    Gm, Gp = C.build_G([(1, 2)], 2)
    assert Gm.tolist() == [[1, 0]] and Gp.tolist() == [[0, 1]]
    with pytest.raises(ValueError):
        C.build_G([(1, 5)], 3)


def test_build_Q_examples():
    Qm, Qp = C.build_Q(3)
    assert Qp.tolist() == [[1, 0, 0], [1, 0, 0], [0, 1, 0]]
    assert Qm.tolist() == [[0, 1, 0], [0, 0, 1], [0, 0, 1]]
    assert C.tilde(Qm, Qp).tolist() == [[0, 0, 0], [1, 0, 0], [1, 1, 0]]
    Qm, Qp = C.build_Q(1)
    assert Qm.shape == (0, 1)
    Qm, Qp = C.build_Q(4)
    assert Qm.shape == (6, 4)
    rows = {(tuple(a), tuple(b)) for a, b in zip(Qm, Qp)}
    assert len(rows) == 6 and np.all(Qm.sum(1) == 1) and np.all(Qp.sum(1) == 1)


def test_build_H_examples():
    Hm, Hp = C.build_H([(3, 4)], 4)
    assert Hm.tolist() == [[0, 0, 1, 0]] and Hp.tolist() == [[0, 0, 0, 1]]
    assert C.build_H([], 4)[0].shape == (0, 4)
    Hm, Hp = C.build_H([(1, 3), (2, 3)], 3)
    assert Hm.shape == (2, 3) and Hp.tolist() == [[0, 0, 1], [0, 0, 1]]


def test_tilde_examples():
    cm = C.build_conflicts(toy_scenario())
    assert C.tilde(cm.Gm, cm.Gp).tolist() == [[0, 1, 1, 1], [0, 0, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert not C.tilde(np.zeros((0, 3)), np.zeros((0, 3))).any()
    with pytest.raises(ValueError):
        C.tilde(np.zeros((1, 3)), np.zeros((2, 3)))


def test_conflict_invariants_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        s = random_scenario(rng, max_bits=200, max_n=7, max_l=5)
        cm = C.build_conflicts(s)
        for M in (cm.Gm, cm.Gp, cm.Qm, cm.Qp, cm.Hm, cm.Hp):
            assert np.all(M.sum(axis=1) == 1)
        assert np.array_equal(cm.Gt, C.tilde(cm.Gm, cm.Gp))
        assert np.array_equal(cm.Ht, C.tilde(cm.Hm, cm.Hp))
        assert np.array_equal(cm.Qt, np.tril(np.ones((s.L, s.L), dtype=np.uint8), -1))
        assert not np.diag(cm.Gt).any() and not np.diag(cm.Ht).any()
        assert not np.tril(cm.Gt).any() and not np.tril(cm.Ht).any()


def test_subframe_occupancy_examples():
    assert subframe_occupancy([1, 0, 0, 1], 1, 2, 2).tolist() == [1, 1]
    assert not subframe_occupancy(np.zeros(8), 2, 2, 2).any()
    x = np.zeros(12, dtype=int)
    x[[0, 1]] = 1   # vehicle 1, slots 1-2
    x[11] = 1       # vehicle 2, slot 6
    assert subframe_occupancy(x, 2, 3, 2).tolist() == [2, 0, 0, 1]
    with pytest.raises(ValueError):
        subframe_occupancy(np.zeros(5), 2, 3, 2)


def test_group_counts():
    assert toy_problem("ef").group_counts["total"] == 10
    assert toy_problem("rf").group_counts["total"] == 7
    one = Scenario((Vehicle(1, 1.0),), (Cluster(1, {1}),), Channelization(2, 2, 1.0), 0.5)
    p = assemble(one, CapacityMap(np.ones((1, 4))), "ef")
    assert (p.conflict.P, p.conflict.U, p.group_counts["total"]) == (0, 0, 1)
    s1 = load_scenario(scenario_path("scenario-1"))
    p = assemble(s1, generate_capacity(s1, seed=0), "rf")
    assert (p.N, p.group_counts["total"]) == (40, 43)


def test_check_feasible_examples():
    for kind in ("ef", "rf"):
        p = toy_problem(kind)
        x = np.zeros(36, dtype=int)
        x[2 * 9 + 0] = x[3 * 9 + 0] = 1   # v3 and v4 on r1
        assert ((3, 4), 1) in check_feasible(x, p).typeIV
        rep = check_feasible(np.zeros(36, dtype=int), p)
        assert rep.conflict_free and len(rep.typeI) == 4
        x = np.zeros(36, dtype=int)
        x[3] = x[6] = 1                   # v1 in subframes 2 and 3
        assert (1, (2, 3)) in check_feasible(x, p).typeIII
    with pytest.raises(ValueError):
        check_feasible(np.zeros(5), toy_problem())


def _violations_from_definition(s, c, x):
    N, K, L = s.N, s.K, s.L
    X = np.asarray(x).reshape(N, K * L)
    used = [{k // K for k in np.flatnonzero(X[i])} for i in range(N)]
    t1 = set()
    for v in s.vehicles:
        rate = float(np.dot(c[v.id - 1], X[v.id - 1]))
        if rate < v.qos - s.epsilon - 1e-9 or rate > v.qos + s.epsilon + 1e-9:
            t1.add(v.id)
    t2 = set()
    for cl in s.clusters:
        for a, b in itertools.combinations(sorted(cl.members), 2):
            for l in used[a - 1] & used[b - 1]:
                t2.add(((a, b), l + 1))
    t3 = {(i + 1, (a + 1, b + 1)) for i in range(N)
          for a, b in itertools.combinations(sorted(used[i]), 2)}
    t4 = set()
    for a, b in one_hop_pairs(s):
        for k in np.flatnonzero(X[a - 1] & X[b - 1]):
            t4.add(((a, b), int(k) + 1))
    return t1, t2, t3, t4


def test_check_feasible_matches_definition():
    rng = np.random.default_rng(11)
    for t in range(1000):
        s = random_scenario(rng, max_bits=48, max_n=5, max_l=4)
        cm = generate_capacity(s, seed=t)
        c = cm.values
        x = (rng.random(s.N * s.K * s.L) < rng.uniform(0.05, 0.4)).astype(int)
        want = _violations_from_definition(s, c, x)
        for kind in ("ef", "rf"):
            rep = check_feasible(x, assemble(s, cm, kind))
            got = ({v.vehicle for v in rep.typeI}, set(rep.typeII), set(rep.typeIII),
                   set(rep.typeIV))
            assert got == want, (t, kind)


def test_zero_sets_agree_exhaustive():
    rng = np.random.default_rng(3)
    for _ in range(10):
        s = random_scenario(rng)
        cm = generate_capacity(s, seed=0)
        n = s.N * s.K * s.L
        X = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
        ef = assemble(s, cm, "ef")
        rf = assemble(s, cm, "rf")
        assert np.array_equal(ef.conflict_free_mask(X), rf.conflict_free_mask(X))
        for v in rf.constraint_values(X):
            assert np.all(np.asarray(v) >= 0)
        for v in ef.constraint_values(X):
            assert np.all(np.asarray(v) >= 0)


def test_rf_forms_match_dense_coupling():
    p = toy_problem("rf")
    rng = np.random.default_rng(4)
    dense = [np.kron(A, B) for A, B in C.rf_coupling_factors(p.conflict, 4, 3, 3)]
    for _ in range(50):
        x = rng.integers(0, 2, 36)
        g, q, h = p.constraint_values(x)
        assert [g, q, h] == [float(x @ M @ x) for M in dense]


def test_linearized_pairs_same_for_ef_and_rf():
    rng = np.random.default_rng(8)
    for _ in range(30):
        s = random_scenario(rng, max_bits=120, max_n=6, max_l=5)
        cm = generate_capacity(s, seed=1)
        a = assemble(s, cm, "ef").linearized_pairs()
        b = assemble(s, cm, "rf").linearized_pairs()
        assert np.array_equal(a, b)
        assert np.all(a[:, 0] < a[:, 1]) if len(a) else True


def test_dump_format():
    p = toy_problem("ef")
    text = C.dump_problem(p, linearized=True)
    lines = text.splitlines()
    c_lines = [ln for ln in lines if ln.startswith("c ")]
    assert len(c_lines) == 36
    assert c_lines[10].split()[:5] == ["c", "10", "2", "2", "1"]
    assert sum(ln.startswith("window ") for ln in lines) == 4
    assert "pair IV 3 4" in lines
    assert sum(ln.startswith("pair II ") for ln in lines) == 5
    assert sum(ln.startswith("bits ") for ln in lines) == len(p.linearized_pairs())


def test_assemble_rejects_bad_capacity():
    with pytest.raises(ValueError):
        assemble(toy_scenario(), CapacityMap(np.ones((4, 8))), "ef")
    with pytest.raises(ValueError):
        assemble(toy_scenario(), CapacityMap(np.ones((4, 9))), "xx")


def test_pair_orderings_stable():
    s = load_scenario(scenario_path("scenario-1"))
    assert intra_cluster_pairs(s) == sorted(intra_cluster_pairs(s))
    assert C.build_conflicts(s).g_pairs == tuple(intra_cluster_pairs(s))
