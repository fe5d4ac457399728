import json

import numpy as np
import pytest

from _instances import scenario_path
from v2valloc import harness
from v2valloc.scenario import Channelization, Cluster, Scenario, Vehicle
from v2valloc.solver import Limits, Status

S1 = scenario_path("scenario-1")
FAST = Limits(node_limit=3_000)


def one_class(rates):
    n = len(rates)
    return Scenario(tuple(Vehicle(i, 12.0) for i in range(1, n + 1)),
                    (Cluster(1, set(range(1, n + 1))),), Channelization(2, n, 1.0), 1.0)


def test_group_stats_examples():
    (g,) = harness.group_stats([12.0, 12.4], one_class([0, 0]))
    assert g.average == pytest.approx(12.2) and g.maximum == 12.4 and g.minimum == 12.0
    assert g.std_dev == pytest.approx(0.2) and g.n_vehicles == 2
    (g,) = harness.group_stats([7.5], one_class([0]))
    assert g.std_dev == 0.0 and g.average == 7.5
    (g,) = harness.group_stats([3.0] * 10, one_class([0] * 10))
    assert g.average == g.maximum == g.minimum == 3.0 and g.std_dev == 0.0
    with pytest.raises(ValueError):
        harness.group_stats([1.0], one_class([0, 0]))


def test_group_stats_population_std():
    rng = np.random.default_rng(0)
    rates = rng.uniform(0, 15, size=9)
    (g,) = harness.group_stats(rates, one_class(rates))
    assert g.std_dev == pytest.approx(np.sqrt(np.mean((rates - rates.mean()) ** 2)))
    assert g.minimum <= g.average <= g.maximum


def test_single_vehicle_run():
    s = Scenario((Vehicle(1, 4.0),), (Cluster(1, {1}),), Channelization(2, 1, 2.5), 3.0,
                 name="one")
    rep = harness.run(s, "ef", 0)
    assert rep.ok and len(rep.groups) == 1
    assert rep.groups[0].average == pytest.approx(rep.rates[0])


def test_scenario1_rf_run_in_windows():
    rep = harness.run(S1, "rf", 1, FAST)
    assert rep.ok and rep.violations.feasible
    for g in rep.groups:
        assert g.qos_class - 0.8 - 1e-9 <= g.minimum <= g.maximum <= g.qos_class + 0.8 + 1e-9
    assert [g.qos_class for g in rep.groups] == [3.0, 5.0, 10.0, 12.0]


def test_ra_spreads_more_than_rf():
    ra_std, rf_std = [], []
    for seed in range(3):
        ra_std += [g.std_dev for g in harness.run(S1, "ra", seed).groups]
        rf_std += [g.std_dev for g in harness.run(S1, "rf", seed, FAST).groups]
    assert np.mean(ra_std) > np.mean(rf_std)


def test_timed_out_partial_report():
    rep = harness.run(S1, "ef", 0, Limits(node_limit=1))
    assert rep.result.status is Status.TIMED_OUT
    assert rep.rates is None and rep.groups == [] and rep.rate_rows() == []
    assert rep.summary()["status"] == "timed_out"


def test_sweep_huge_epsilon_and_order():
    reports = []
    res = harness.sweep_epsilon(harness.toy_scenario(), [50.0, 0.5], trials=4, base_seed=10,
                                limits=FAST, reports=reports)
    assert res[0] == harness.SweepResult(50.0, 4, 4, 1.0)
    assert 0.0 <= res[1].success_rate <= 1.0
    assert [(r.scenario.epsilon, r.seed) for r in reports] == \
        [(e, s) for e in (50.0, 0.5) for s in range(10, 14)]
    with pytest.raises(ValueError):
        harness.sweep_epsilon(harness.toy_scenario(), [1.0], trials=0)


def test_sweep_descending_non_increasing():
    res = harness.sweep_epsilon(harness.toy_scenario(), [3.0, 1.5, 0.7, 0.2], trials=20,
                                limits=FAST)
    rates = [r.success_rate for r in res]
    assert rates == sorted(rates, reverse=True)


def test_csv_and_json_deterministic(tmp_path):
    def once(d):
        reps = [harness.run(S1, f, 2, FAST) for f in ("ef", "ra")]
        return [p.read_bytes() for p in harness.write_run(d, reps)]
    a, b = once(tmp_path / "a"), once(tmp_path / "b")
    assert a == b
    lines = a[0].decode().splitlines()
    assert lines[0] == ",".join(harness.RATE_COLUMNS)
    assert len(lines) == 81
    summary = json.loads(a[1])
    assert "wall_time" not in a[1].decode()
    assert summary[0]["violations"] == {"typeI": 0, "typeII": 0, "typeIII": 0, "typeIV": 0}


def test_sweep_csv_schema():
    text = harness.sweep_csv("x", [harness.SweepResult(0.8, 2, 1, 0.5)])
    assert text == "scenario,epsilon,trials,successes,success_rate\nx,0.8,2,1,0.5\n"


def test_verify_toy_passes():
    rep = harness.verify_toy()
    assert rep.ok and len(rep.checks) == 9


@pytest.mark.parametrize("name", sorted(harness.TOY_GOLDEN))
def test_verify_toy_flipped_bit(name):
    golden = {k: v.copy() for k, v in harness.TOY_GOLDEN.items()}
    golden[name][0, 0] ^= 1
    rep = harness.verify_toy(golden)
    assert not rep.ok
    (bad,) = [c for c in rep.checks if not c.ok]
    assert bad.name == name and bad.diff
    assert "expected" in rep.text()


def test_qtilde_lower_triangular_golden():
    golden = dict(harness.TOY_GOLDEN)
    golden["Qt"] = np.tril(np.ones((3, 3), dtype=np.uint8), -1)
    assert harness.verify_toy(golden).ok
