"""Shared fixtures data: shipped scenario paths and small random instances."""

from pathlib import Path

import numpy as np

from v2valloc.scenario import Channelization, Cluster, Scenario, Vehicle

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


def scenario_path(name: str) -> Path:
    return SCENARIOS / f"{name}.json"


def random_scenario(rng, max_bits=16, max_n=4, max_k=3, max_l=3, wide=True) -> Scenario:
    """Small random scenario with N*K*L <= max_bits.

    ``wide`` draws windows relative to demand so that a fair share of
    instances is feasible.
    """
    while True:
        K = int(rng.integers(1, max_k + 1))
        L = int(rng.integers(1, max_l + 1))
        N = int(rng.integers(1, max_n + 1))
        if N * K * L <= max_bits:
            break
    J = int(rng.integers(1, 3))
    members = [set() for _ in range(J)]
    for v in range(1, N + 1):
        for j in rng.choice(J, size=int(rng.integers(1, J + 1)), replace=False):
            members[j].add(v)
    clusters = tuple(Cluster(j + 1, frozenset(m)) for j, m in enumerate(members) if m)
    ids = [c.id for c in clusters]
    hops = tuple((a, b) for i, a in enumerate(ids) for b in ids[i + 1:] if rng.random() < 0.5)
    B = 10.0 / K
    if wide:
        q = rng.uniform(0.5, 1.5, size=N) * B * rng.integers(1, K + 1, size=N)
        eps = float(rng.uniform(0.5, 2.5)) * B
    else:
        q = rng.uniform(0.5, 6.0, size=N)
        eps = float(rng.uniform(0.0, 3.0))
    return Scenario(
        vehicles=tuple(Vehicle(i + 1, float(x)) for i, x in enumerate(q)),
        clusters=clusters,
        channelization=Channelization(K=K, L=L, B=B),
        epsilon=eps,
        one_hop_cluster_pairs=frozenset(hops),
        name="random",
    )
