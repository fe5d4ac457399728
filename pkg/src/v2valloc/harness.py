"""Experiment runs, per-QoS statistics, epsilon sweeps and the toy check.

Everything written under ``out`` is a pure function of (config, seed,
budget): wall-clock times go to the log only, never into CSV or JSON.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import compiler as C
from .compiler import Formulation, ViolationReport, assemble, check_feasible
from .scenario import (
    Channelization,
    Cluster,
    Scenario,
    Vehicle,
    generate_capacity,
    load_scenario,
)
from .solver import Limits, SolveResult, Status, random_allocation, solve_exact

log = logging.getLogger(__name__)

DEFAULT_LIMITS = Limits(node_limit=50_000)
DEFAULT_TRIALS = 50
SUCCESS = (Status.OPTIMAL, Status.FEASIBLE)

RATE_COLUMNS = ("scenario", "formulation", "seed", "vehicle_id", "qos_class",
                "attained_rate_mbps", "in_window")
SWEEP_COLUMNS = ("scenario", "epsilon", "trials", "successes", "success_rate")


@dataclass(frozen=True)
class GroupStats:
    qos_class: float
    average: float
    maximum: float
    minimum: float
    std_dev: float
    n_vehicles: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SweepResult:
    epsilon: float
    trials: int
    successes: int
    success_rate: float


@dataclass
class RunReport:
    scenario: Scenario
    formulation: str
    seed: int
    result: SolveResult
    violations: ViolationReport | None = None
    rates: np.ndarray | None = None
    in_window: np.ndarray | None = None
    groups: list[GroupStats] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.result.status in SUCCESS

    def rate_rows(self) -> list[tuple]:
        if self.rates is None:
            return []
        s = self.scenario
        return [
            (s.name, self.formulation, self.seed, v.id, v.qos, float(r), bool(w))
            for v, r, w in zip(s.vehicles, self.rates, self.in_window)
        ]

    def summary(self) -> dict:
        r = self.result
        diag = dict(r.diagnostics)
        diag.pop("backend", None)
        return {
            "scenario": self.scenario.name,
            "formulation": self.formulation,
            "seed": self.seed,
            "epsilon": self.scenario.epsilon,
            "status": r.status.value,
            "objective": r.objective,
            "nodes": r.nodes,
            "tries": r.tries,
            "diagnostics": diag,
            "violations": None if self.violations is None else self.violations.counts(),
            "groups": [g.to_dict() for g in self.groups],
        }


def load_config(config) -> Scenario:
    if isinstance(config, Scenario):
        return config
    return load_scenario(config)


def group_stats(rates, scenario: Scenario) -> list[GroupStats]:
    """Population statistics of ``rates`` per distinct QoS demand, ascending."""
    rates = np.asarray(rates, dtype=float)
    q = scenario.qos
    if rates.shape != q.shape:
        raise ValueError(f"expected {q.shape[0]} rates, got {rates.shape}")
    out = []
    for cls in np.unique(q):
        r = rates[q == cls]
        out.append(GroupStats(float(cls), float(r.mean()), float(r.max()),
                              float(r.min()), float(r.std()), int(r.size)))
    return out


def run(config, formulation: str, seed: int, limits: Limits | None = None,
        epsilon: float | None = None) -> RunReport:
    """Solve one capacity draw with ``ef``, ``rf`` or ``ra``.

    The capacity map is drawn with ``seed``; RA also seeds its tries with it.
    Runs without an allocation return a report with no rates.
    """
    s = load_config(config)
    if epsilon is not None:
        s = s.with_epsilon(epsilon)
    formulation = formulation.lower()
    cm = generate_capacity(s, seed=seed)
    if formulation == "ra":
        res = random_allocation(s, cm, seed=seed)
        p = assemble(s, cm, Formulation.RF)
    else:
        p = assemble(s, cm, Formulation(formulation))
        res = solve_exact(p, limits or DEFAULT_LIMITS)
    log.info("%s %s seed=%d eps=%g: %s in %.2fs", s.name, formulation, seed,
             s.epsilon, res.status.value, res.wall_time)
    rep = RunReport(s, formulation, seed, res)
    if res.x is not None:
        rep.violations = check_feasible(res.x, p)
        rep.rates = p.rates(res.x)
        rep.in_window = p.window_ok(rep.rates)
        rep.groups = group_stats(rep.rates, s)
    return rep


def run_trials(config, formulation: str, seeds, limits: Limits | None = None,
               epsilon: float | None = None) -> list[RunReport]:
    s = load_config(config)
    return [run(s, formulation, int(seed), limits, epsilon) for seed in seeds]


def sweep_epsilon(config, epsilons, trials: int = DEFAULT_TRIALS, base_seed: int = 0,
                  formulation: str = "ef", limits: Limits | None = None,
                  reports: list | None = None) -> list[SweepResult]:
    """Success rate per epsilon; trial ``t`` uses capacity seed ``base_seed + t``.

    Pass a list as ``reports`` to collect the per-trial run reports, in
    (epsilon, trial) order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if formulation not in ("ef", "rf"):
        raise ValueError("sweeps use the ef or rf formulation")
    s = load_config(config)
    out = []
    for eps in epsilons:
        runs = run_trials(s, formulation, range(base_seed, base_seed + trials),
                          limits, float(eps))
        if reports is not None:
            reports.extend(runs)
        wins = sum(r.ok for r in runs)
        out.append(SweepResult(float(eps), trials, wins, wins / trials))
    return out


# -- output ----------------------------------------------------------------


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def rates_csv(reports) -> str:
    return _csv_text(RATE_COLUMNS, (row for r in reports for row in r.rate_rows()))


def sweep_csv(scenario_name: str, results) -> str:
    return _csv_text(SWEEP_COLUMNS, (
        (scenario_name, r.epsilon, r.trials, r.successes, r.success_rate)
        for r in results))


def summary_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(text)
    return path


def write_run(out, reports) -> list[Path]:
    out = Path(out)
    return [
        write_text(out / "rates.csv", rates_csv(reports)),
        write_text(out / "summary.json", summary_json([r.summary() for r in reports])),
    ]


def write_sweep(out, scenario_name: str, results, reports=()) -> list[Path]:
    out = Path(out)
    summary = {
        "scenario": scenario_name,
        "sweep": [r.__dict__ for r in results],
        "runs": [r.summary() for r in reports],
    }
    paths = [write_text(out / "sweep.csv", sweep_csv(scenario_name, results)),
             write_text(out / "summary.json", summary_json(summary))]
    if reports:
        paths.append(write_text(out / "rates.csv", rates_csv(reports)))
    return paths


# -- toy example -----------------------------------------------------------


def toy_scenario() -> Scenario:
    return Scenario(
        vehicles=tuple(Vehicle(i, q) for i, q in enumerate((6.0, 4.0, 3.5, 5.0), 1)),
        clusters=(Cluster(1, {1, 2, 3}), Cluster(2, {1, 2, 4})),
        channelization=Channelization(K=3, L=3, B=10.0 / 3),
        epsilon=1.0,
        name="toy",
    )


def _m(text: str) -> np.ndarray:
    return np.array([[int(c) for c in row.split()] for row in text.strip().split(";")],
                    dtype=np.uint8)


# as displayed; H- and H+ are printed as columns, Q- and Ht transposed
TOY_GOLDEN = {
    "Gm": _m("1 0 0 0; 1 0 0 0; 1 0 0 0; 0 1 0 0; 0 1 0 0"),
    "Gp": _m("0 1 0 0; 0 0 1 0; 0 0 0 1; 0 0 1 0; 0 0 0 1"),
    "Gt": _m("0 1 1 1; 0 0 1 1; 0 0 0 0; 0 0 0 0"),
    "Qm": _m("0 0 0; 1 0 0; 0 1 1"),
    "Qp": _m("1 0 0; 1 0 0; 0 1 0"),
    "Qt": _m("0 0 0; 1 0 0; 1 1 0"),
    "Hm": _m("0; 0; 1; 0"),
    "Hp": _m("0; 0; 0; 1"),
    "Ht": _m("0 0 0 0; 0 0 0 0; 0 0 0 0; 0 0 1 0"),
}


@dataclass
class MatrixCheck:
    name: str
    ok: bool
    rule: str
    diff: list[tuple[int, int, int, int]] = field(default_factory=list)

    def lines(self) -> list[str]:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.name} ({self.rule})"
        return [head] + [f"    [{r},{c}] expected {e} got {g}" for r, c, e, g in self.diff]


@dataclass
class ToyReport:
    checks: list[MatrixCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def text(self) -> str:
        return "\n".join(line for c in self.checks for line in c.lines()) + "\n"


def _entry_diff(expected, got) -> list[tuple[int, int, int, int]]:
    expected = np.atleast_2d(expected)
    got = np.atleast_2d(got)
    if expected.shape != got.shape:
        return [(-1, -1, expected.size, got.size)]
    return [(int(r) + 1, int(c) + 1, int(expected[r, c]), int(got[r, c]))
            for r, c in zip(*np.nonzero(expected != got))]


def _pair_check(name, golden, built) -> MatrixCheck:
    # same unordered pairs and the same x^T M x for every binary x
    sym_g = np.minimum(golden + golden.T, 1)
    sym_b = np.minimum(built + built.T, 1)
    diff = _entry_diff(sym_g, sym_b)
    n = built.shape[0]
    X = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    forms = np.einsum("ij,jk,ik->i", X, golden.astype(int), X)
    same = np.array_equal(forms, np.einsum("ij,jk,ik->i", X, built.astype(int), X))
    return MatrixCheck(name, not diff and same, "unordered pairs", diff)


def verify_toy(golden: dict | None = None) -> ToyReport:
    """Rebuild the nine toy matrices and compare them with ``golden``."""
    golden = TOY_GOLDEN if golden is None else golden
    cm = C.build_conflicts(toy_scenario())
    checks = []
    for name in ("Gm", "Gp", "Gt", "Qp", "Qt"):
        d = _entry_diff(golden[name], getattr(cm, name))
        checks.append(MatrixCheck(name, not d, "exact", d))
    d = _entry_diff(golden["Qm"].T, cm.Qm)
    checks.append(MatrixCheck("Qm", not d, "transposed", d))
    for name in ("Hm", "Hp"):
        d = _entry_diff(golden[name].T, getattr(cm, name))
        checks.append(MatrixCheck(name, not d, "column as row", d))
    checks.append(_pair_check("Ht", golden["Ht"], cm.Ht))
    return ToyReport(checks)
