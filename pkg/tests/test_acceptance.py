"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest;
the PASS/FAIL lines are repeated in the pytest terminal summary.
"""

import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _instances import random_scenario, scenario_path  # noqa: E402
from v2valloc import harness  # noqa: E402
from v2valloc import tensor_ops as T  # noqa: E402
from v2valloc.compiler import assemble  # noqa: E402
from v2valloc.scenario import generate_capacity, load_scenario  # noqa: E402
from v2valloc.solver import Status, enumerate_feasible, solve_exact  # noqa: E402

TRIALS = 50
TOL = 1e-9
LINES = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    LINES.append(line)
    print(line, flush=True)
    assert ok, line


def scen(name):
    return load_scenario(scenario_path(name))


# -- shared protocol runs (criteria 5-9) ------------------------------------


def protocol():
    """Every run behind criteria 5-8, plus the CSV text each one emits."""
    s1, s2a, s2b = scen("scenario-1"), scen("scenario-2a"), scen("scenario-2b")
    seeds = range(TRIALS)
    sweep_reports = []
    sweep = harness.sweep_epsilon(s1, [0.8, 0.4], TRIALS, 0, "ef", reports=sweep_reports)
    runs = {
        "s1_ef": sweep_reports[:TRIALS],
        "s1_eps04_ef": sweep_reports[TRIALS:],
        "s1_rf": harness.run_trials(s1, "rf", seeds),
        "s1_ra": harness.run_trials(s1, "ra", seeds),
    }
    for name, s in (("s2a", s2a), ("s2b", s2b)):
        for f in ("ef", "rf"):
            runs[f"{name}_{f}"] = harness.run_trials(s, f, seeds)
    csvs = {k: harness.rates_csv(v) for k, v in runs.items()}
    csvs["s1_sweep"] = harness.sweep_csv(s1.name, sweep)
    return runs, sweep, csvs


@lru_cache(maxsize=1)
def shared():
    return protocol()


# -- criteria ---------------------------------------------------------------


def test_criterion_1_toy_golden():
    t = time.perf_counter()
    rep = harness.verify_toy()
    dt = time.perf_counter() - t
    bad = [c.name for c in rep.checks if not c.ok]
    report(1, rep.ok and dt < 1.0,
           f"{len(rep.checks) - len(bad)}/9 toy matrices match, {dt * 1000:.0f} ms"
           + (f", mismatched {bad}" if bad else ""))


def test_criterion_2_ef_rf_equivalence():
    t = time.perf_counter()
    rng = np.random.default_rng(20240)
    n = set_diff = obj_diff = 0
    statuses = {}
    while n < 250:
        s = random_scenario(rng, max_bits=16)
        cm = generate_capacity(s, seed=n)
        ef, rf = assemble(s, cm, "ef"), assemble(s, cm, "rf")
        set_diff += not np.array_equal(enumerate_feasible(ef), enumerate_feasible(rf))
        re, rr = solve_exact(ef), solve_exact(rf)
        obj_diff += (re.status, re.objective) != (rr.status, rr.objective)
        obj_diff += re.status not in (Status.OPTIMAL, Status.INFEASIBLE)
        statuses[re.status.value] = statuses.get(re.status.value, 0) + 1
        n += 1
    dt = time.perf_counter() - t
    report(2, set_diff == 0 and obj_diff == 0 and dt < 120,
           f"{n} instances ({statuses}), feasible-set mismatches {set_diff}, "
           f"objective mismatches {obj_diff}, {dt:.1f} s")


def test_criterion_3_linearization():
    rng = np.random.default_rng(303)
    n_inst = n_x = bad = 0
    while n_inst < 150:
        s = random_scenario(rng, max_bits=12)
        cm = generate_capacity(s, seed=n_inst)
        nb = s.N * s.K * s.L
        X = ((np.arange(1 << nb)[:, None] >> np.arange(nb)) & 1).astype(np.int8)
        for kind in ("ef", "rf"):
            p = assemble(s, cm, kind)
            pairs = p.linearized_pairs()
            lin = np.all(X[:, pairs[:, 0]] + X[:, pairs[:, 1]] <= 1, axis=1) if len(pairs) \
                else np.ones(len(X), dtype=bool)
            bad += int(np.sum(lin != p.conflict_free_mask(X)))
            n_x += len(X)
        n_inst += 1
    report(3, bad == 0, f"{n_inst} instances, {n_x} allocations checked, {bad} counterexamples")


def test_criterion_4_properties():
    rng = np.random.default_rng(404)
    f1 = f2 = 0
    for _ in range(1000):
        m, n = rng.integers(1, 7, size=2)
        A, B = rng.normal(size=(2, m, n))
        x, y = rng.normal(size=m), rng.normal(size=n)
        f1 += not T.allclose_rel(T.quad_form_trace(x, A, B, y), T.quad_form_direct(x, A, B, y))
    for _ in range(1000):
        a, b, c, d, e, f = rng.integers(1, 7, size=6)
        X, Y = rng.normal(size=(a, b)), rng.normal(size=(b, c))
        W, Z = rng.normal(size=(d, e)), rng.normal(size=(e, f))
        got = T.kron_compose(X, Y, W, Z)
        want = np.kron(X, W) @ np.kron(Y, Z)
        scale = max(1.0, float(np.abs(want).max()))
        f2 += not np.allclose(got, want, rtol=TOL, atol=TOL * scale)
    report(4, f1 == 0 and f2 == 0,
           f"1000 trace-form checks ({f1} failures), 1000 Kronecker-product checks ({f2} failures)")


@pytest.mark.slow
def test_criterion_5_scenario1():
    runs, _, _ = shared()
    s = scen("scenario-1")
    sets = [c.members for c in s.clusters]
    shape_ok = (s.N, len(sets), s.K, s.L, s.epsilon) == (40, 4, 4, 16, 0.8) \
        and len(sets[0] & sets[1] & sets[2]) == 8
    ok_runs = bad_window = bad_viol = 0
    slowest = 0.0
    for key in ("s1_ef", "s1_rf"):
        for r in runs[key]:
            slowest = max(slowest, r.result.wall_time)
            if not r.ok:
                continue
            ok_runs += 1
            bad_window += int(np.sum(~r.in_window))
            bad_viol += not r.violations.feasible
    report(5, shape_ok and ok_runs == 2 * TRIALS and bad_window == 0 and bad_viol == 0
           and slowest <= 60,
           f"{ok_runs}/{2 * TRIALS} EF+RF trials feasible, {bad_window} rates outside q+-eps, "
           f"{bad_viol} non-empty violation reports, slowest trial {slowest:.1f} s")


@pytest.mark.slow
def test_criterion_6_epsilon_degradation():
    _, sweep, _ = shared()
    hi, lo = sweep
    report(6, lo.success_rate < hi.success_rate,
           f"success rate eps=0.8 {hi.successes}/{hi.trials}, eps=0.4 {lo.successes}/{lo.trials}")


@pytest.mark.slow
def test_criterion_7_scenario2():
    runs, _, _ = shared()
    a, b = scen("scenario-2a"), scen("scenario-2b")
    narrower = (a.K, b.K) == (3, 7) and 2 * b.epsilon < 2 * a.epsilon
    parts, outside, counted = [], 0, 0
    for name in ("s2a", "s2b"):
        for f in ("ef", "rf"):
            ok = [r for r in runs[f"{name}_{f}"] if r.ok]
            outside += sum(int(np.sum(~r.in_window)) + (not r.violations.feasible) for r in ok)
            counted += len(ok)
            parts.append(f"{name} {f} {len(ok)}/{TRIALS}")
    report(7, narrower and outside == 0 and counted > 0,
           f"window 2b {2 * b.epsilon:g} < 2a {2 * a.epsilon:g} Mbps; feasible runs "
           f"{', '.join(parts)}; {outside} rates or reports outside windows")


@pytest.mark.slow
def test_criterion_8_ra_contrast():
    runs, _, _ = shared()
    wins = 0
    ra_std, ex_std = [], []
    for ra, ef, rf in zip(runs["s1_ra"], runs["s1_ef"], runs["s1_rf"]):
        if not (ra.ok and ef.ok and rf.ok):
            continue
        r = np.array([g.std_dev for g in ra.groups])
        e = np.maximum([g.std_dev for g in ef.groups], [g.std_dev for g in rf.groups])
        wins += bool(np.all(r > e))
        ra_std.append(r.mean())
        ex_std.append(e.mean())
    report(8, wins >= 45,
           f"RA std above EF/RF std in every class for {wins}/{TRIALS} trials "
           f"(mean per-class std RA {np.mean(ra_std):.2f} vs EF/RF {np.mean(ex_std):.2f} Mbps)")


@pytest.mark.slow
def test_criterion_9_determinism(tmp_path):
    _, _, first = shared()
    _, _, second = protocol()
    differ = []
    for k in sorted(first):
        a = harness.write_text(tmp_path / "a" / f"{k}.csv", first[k]).read_bytes()
        b = harness.write_text(tmp_path / "b" / f"{k}.csv", second[k]).read_bytes()
        if a != b:
            differ.append(k)
    report(9, not differ,
           f"{len(first)} CSV files rebuilt from scratch, {len(differ)} differ"
           + (f": {differ}" if differ else ""))


if __name__ == "__main__":
    import pytest as _pytest

    sys.exit(_pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
