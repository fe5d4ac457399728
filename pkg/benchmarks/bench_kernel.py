"""Compiled vs pure-Python search kernel on identical inputs.

    python benchmarks/bench_kernel.py [--nodes 3000] [--seeds 0,1,2]

Both kernels must return the same result; the script exits nonzero if not.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from v2valloc import _kernel_py, kernel
from v2valloc.compiler import Formulation, assemble
from v2valloc.scenario import generate_capacity, load_scenario
from v2valloc.solver import Limits, solve_exact

ROOT = Path(__file__).resolve().parents[1]


def timed(search, p, limits):
    kernel.search = search
    t = time.perf_counter()
    res = solve_exact(p, limits)
    return res, time.perf_counter() - t


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--scenario", default=str(ROOT / "scenarios" / "scenario-1.json"))
    ap.add_argument("--nodes", type=int, default=3000)
    ap.add_argument("--seeds", default="0,1,2")
    args = ap.parse_args(argv)
    try:
        from v2valloc import _kernel
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return 1

    s = load_scenario(args.scenario)
    limits = Limits(node_limit=args.nodes)
    print(f"{'seed':>4} {'nodes':>8} {'cython s':>9} {'python s':>9} {'speedup':>8}")
    speedups = []
    for seed in (int(t) for t in args.seeds.split(",")):
        p = assemble(s, generate_capacity(s, seed=seed), Formulation.EF)
        rc, tc = timed(_kernel.search, p, limits)
        rp, tp = timed(_kernel_py.search, p, limits)
        if (rc.status, rc.objective, rc.nodes) != (rp.status, rp.objective, rp.nodes) \
                or not np.array_equal(rc.x, rp.x):
            print(f"seed {seed}: kernels disagree")
            return 2
        speedups.append(tp / tc)
        print(f"{seed:>4} {rc.nodes:>8} {tc:>9.3f} {tp:>9.3f} {tp / tc:>7.1f}x")
    print(f"geometric mean speedup {np.exp(np.mean(np.log(speedups))):.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
