"""``alloc`` command line: solve, sweep, verify-toy, dump."""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .compiler import Formulation, assemble, dump_problem
from .scenario import ScenarioError, generate_capacity
from .solver import Limits


def _limits(args) -> Limits:
    return Limits(node_limit=args.node_limit, time_limit=args.time_limit)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def cmd_solve(args) -> int:
    rep = harness.run(args.scenario, args.formulation, args.seed, _limits(args))
    paths = harness.write_run(args.out, [rep])
    g = ", ".join(f"q={s.qos_class:g}: avg {s.average:.3f} std {s.std_dev:.3f}"
                  for s in rep.groups)
    print(f"{rep.scenario.name} {args.formulation} seed={args.seed}: "
          f"{rep.result.status.value} objective={rep.result.objective}")
    if g:
        print(g)
    for p in paths:
        print(f"wrote {p}")
    return 0 if rep.ok else 1


def cmd_sweep(args) -> int:
    s = harness.load_config(args.scenario)
    reports = []
    results = harness.sweep_epsilon(s, args.epsilons, args.trials, args.seed,
                                    args.formulation, _limits(args), reports)
    for r in results:
        print(f"eps={r.epsilon:g}: {r.successes}/{r.trials} ({r.success_rate:.3f})")
    for p in harness.write_sweep(args.out, s.name, results, reports):
        print(f"wrote {p}")
    return 0


def cmd_verify_toy(args) -> int:
    rep = harness.verify_toy()
    sys.stdout.write(rep.text())
    print("toy example:", "PASS" if rep.ok else "FAIL")
    return 0 if rep.ok else 1


def cmd_dump(args) -> int:
    s = harness.load_config(args.scenario)
    p = assemble(s, generate_capacity(s, seed=args.seed), Formulation(args.formulation))
    sys.stdout.write(dump_problem(p, linearized=args.linearized))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="alloc", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def budget(p):
        p.add_argument("--time-limit", type=float, default=None,
                       help="seconds per solve (makes results timing dependent)")
        p.add_argument("--node-limit", type=int, default=harness.DEFAULT_LIMITS.node_limit,
                       help="search nodes per independent component")

    p = sub.add_parser("solve", help="solve one capacity draw")
    p.add_argument("--scenario", required=True)
    p.add_argument("--formulation", choices=("ef", "rf", "ra"), default="ef")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    budget(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="success rate over epsilon values")
    p.add_argument("--scenario", required=True)
    p.add_argument("--epsilons", type=_floats, required=True)
    p.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--formulation", choices=("ef", "rf"), default="ef")
    p.add_argument("--out", required=True)
    budget(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-toy", help="check the toy conflict matrices")
    p.set_defaults(func=cmd_verify_toy)

    p = sub.add_parser("dump", help="print a compiled problem")
    p.add_argument("--scenario", required=True)
    p.add_argument("--formulation", choices=("ef", "rf"), default="ef")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--linearized", action="store_true")
    p.set_defaults(func=cmd_dump)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, OSError, ValueError) as e:
        print(f"alloc: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
