"""Vehicles, clusters and the subchannel grid, plus capacity generation.

Vehicle, cluster and subchannel ids are 1-based in files and in every
public pair listing; arrays indexed by them are 0-based.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_BANDWIDTH_MHZ = 10.0
MAX_SUBCHANNELS = 7


class ScenarioError(ValueError):
    """Invalid scenario content or an unreadable scenario file."""


class InsufficientSubframesError(ScenarioError):
    pass


@dataclass(frozen=True)
class Channelization:
    K: int
    L: int
    B: float
    L_max: int = 100

    @property
    def n_subchannels(self) -> int:
        return self.K * self.L

    def subframe_of(self, k: int) -> int:
        """1-based subframe holding 1-based subchannel ``k``."""
        return -(-k // self.K)

    def subchannels_in(self, l: int) -> range:
        """1-based subchannel ids of subframe ``l``."""
        return range((l - 1) * self.K + 1, l * self.K + 1)


@dataclass(frozen=True)
class Vehicle:
    id: int
    qos: float


@dataclass(frozen=True)
class Cluster:
    id: int
    members: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))


@dataclass(frozen=True)
class ChannelModelParams:
    """Synthetic channel: SINR in dB drawn i.i.d. uniform per (vehicle, subchannel)."""

    sinr_lo_db: float = 0.0
    sinr_hi_db: float = 15.0

    def validate(self) -> None:
        if not (math.isfinite(self.sinr_lo_db) and math.isfinite(self.sinr_hi_db)):
            raise ScenarioError("channel model bounds must be finite")
        if self.sinr_lo_db > self.sinr_hi_db:
            raise ScenarioError(
                f"channel model: sinr_lo_db={self.sinr_lo_db} > sinr_hi_db={self.sinr_hi_db}"
            )


@dataclass(frozen=True)
class Scenario:
    vehicles: tuple[Vehicle, ...]
    clusters: tuple[Cluster, ...]
    channelization: Channelization
    epsilon: float
    one_hop_cluster_pairs: frozenset[tuple[int, int]] = frozenset()
    channel_model: ChannelModelParams = field(default_factory=ChannelModelParams)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        object.__setattr__(self, "clusters", tuple(self.clusters))
        pairs = frozenset(
            (min(a, b), max(a, b)) for a, b in self.one_hop_cluster_pairs
        )
        object.__setattr__(self, "one_hop_cluster_pairs", pairs)

    @property
    def N(self) -> int:
        return len(self.vehicles)

    @property
    def K(self) -> int:
        return self.channelization.K

    @property
    def L(self) -> int:
        return self.channelization.L

    @property
    def qos(self) -> np.ndarray:
        return np.array([v.qos for v in self.vehicles], dtype=float)

    def clusters_of(self, vehicle_id: int) -> frozenset[int]:
        return frozenset(c.id for c in self.clusters if vehicle_id in c.members)

    def with_epsilon(self, epsilon: float) -> "Scenario":
        return _replace(self, epsilon=epsilon)

    def with_channelization(self, **changes) -> "Scenario":
        ch = self.channelization
        fields = dict(K=ch.K, L=ch.L, B=ch.B, L_max=ch.L_max)
        fields.update(changes)
        return _replace(self, channelization=Channelization(**fields))


def _replace(s: Scenario, **changes) -> Scenario:
    return dataclasses.replace(s, **changes)


@dataclass(frozen=True)
class CapacityMap:
    """Achievable capacity ``c_ik`` in Mbps, shape ``(N, K*L)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("capacity map must be 2-D (N, K*L)")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("capacities must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def vector(self) -> np.ndarray:
        """Vehicle-major flattening matching the layout of ``x``."""
        return self.values.reshape(-1)

    def __eq__(self, other):
        return isinstance(other, CapacityMap) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())


# -- validation ------------------------------------------------------------


def validate_scenario(s: Scenario) -> list[str]:
    """Return human-readable invariant violations; empty means valid."""
    out: list[str] = []
    ch = s.channelization
    if ch.K < 1 or ch.K > MAX_SUBCHANNELS:
        out.append(f"channelization.K: K <= {MAX_SUBCHANNELS} and K >= 1 required (got {ch.K})")
    if not ch.B > 0:
        out.append(f"channelization.B: bandwidth must be positive (got {ch.B})")
    elif ch.K * ch.B > MAX_BANDWIDTH_MHZ + 1e-9:
        out.append(
            f"channelization.B: K*B <= {MAX_BANDWIDTH_MHZ} MHz required (got {ch.K * ch.B:g})"
        )
    if ch.L_max < 1:
        out.append(f"channelization.L_max: must be >= 1 (got {ch.L_max})")
    if ch.L < 1 or ch.L > ch.L_max:
        out.append(f"channelization.L: 1 <= L <= L_max required (got L={ch.L}, L_max={ch.L_max})")
    if not (s.epsilon >= 0 and math.isfinite(s.epsilon)):
        out.append(f"epsilon: must be finite and >= 0 (got {s.epsilon})")

    if not s.vehicles:
        out.append("vehicles: at least one vehicle required")
    ids = [v.id for v in s.vehicles]
    if ids != list(range(1, len(ids) + 1)):
        out.append("vehicles: ids must be 1..N in order")
    for v in s.vehicles:
        if not (v.qos > 0 and math.isfinite(v.qos)):
            out.append(f"vehicles[{v.id}].qos: must be > 0 (got {v.qos})")

    n = len(s.vehicles)
    cids = [c.id for c in s.clusters]
    if not s.clusters:
        out.append("clusters: at least one cluster required")
    if len(set(cids)) != len(cids):
        out.append("clusters: duplicate cluster id")
    for c in s.clusters:
        if not c.members:
            out.append(f"clusters[{c.id}].members: empty cluster")
        bad = sorted(m for m in c.members if not 1 <= m <= n)
        if bad:
            out.append(f"clusters[{c.id}].members: unknown vehicle ids {bad}")
    covered = set().union(*(c.members for c in s.clusters)) if s.clusters else set()
    for vid in ids:
        if vid not in covered:
            out.append(f"vehicles[{vid}]: orphan vehicle (belongs to no cluster)")

    known = set(cids)
    for a, b in sorted(s.one_hop_cluster_pairs):
        if a == b or a not in known or b not in known:
            out.append(f"one_hop_cluster_pairs: invalid pair ({a}, {b})")

    try:
        s.channel_model.validate()
    except ScenarioError as exc:
        out.append(f"channel_model: {exc}")
    return out


def ensure_valid(s: Scenario) -> None:
    problems = validate_scenario(s)
    if problems:
        raise ScenarioError("invalid scenario: " + "; ".join(problems))


# -- pair enumeration ------------------------------------------------------


def intra_cluster_pairs(s: Scenario) -> list[tuple[int, int]]:
    """Every unordered pair of vehicles sharing at least one cluster, sorted."""
    pairs = set()
    for c in s.clusters:
        pairs.update(itertools.combinations(sorted(c.members), 2))
    return sorted(pairs)


def one_hop_cluster_relation(s: Scenario) -> list[tuple[int, int]]:
    """Declared one-hop cluster pairs plus every pair of intersecting clusters."""
    rel = set(s.one_hop_cluster_pairs)
    for c1, c2 in itertools.combinations(s.clusters, 2):
        if c1.members & c2.members:
            rel.add((min(c1.id, c2.id), max(c1.id, c2.id)))
    return sorted(rel)


def one_hop_pairs(s: Scenario) -> list[tuple[int, int]]:
    """Vehicle pairs in one-hop related clusters that share no cluster."""
    by_id = {c.id: c.members for c in s.clusters}
    membership = {v.id: s.clusters_of(v.id) for v in s.vehicles}
    pairs = set()
    for j1, j2 in one_hop_cluster_relation(s):
        for a in by_id[j1]:
            for b in by_id[j2]:
                if a == b or membership[a] & membership[b]:
                    continue
                pairs.add((min(a, b), max(a, b)))
    return sorted(pairs)


def select_L(s: Scenario) -> int:
    """Largest cluster size; the smallest window that lets one cluster share it."""
    largest = max(len(c.members) for c in s.clusters)
    if largest > s.channelization.L_max:
        raise InsufficientSubframesError(
            f"insufficient subframes: largest cluster has {largest} vehicles, "
            f"L_max={s.channelization.L_max}"
        )
    return largest


# -- capacity --------------------------------------------------------------


def capacity_from_sinr(sinr, bandwidth_mhz: float) -> np.ndarray:
    """Shannon capacity ``B log2(1 + SINR)`` in Mbps for linear SINR."""
    return bandwidth_mhz * np.log2(1.0 + np.asarray(sinr, dtype=float))


def generate_capacity(
    s: Scenario, model: ChannelModelParams | None = None, seed: int = 0
) -> CapacityMap:
    model = s.channel_model if model is None else model
    model.validate()
    rng = np.random.default_rng(seed)
    sinr_db = rng.uniform(
        model.sinr_lo_db, model.sinr_hi_db, size=(s.N, s.channelization.n_subchannels)
    )
    return CapacityMap(capacity_from_sinr(10.0 ** (sinr_db / 10.0), s.channelization.B))


# -- file format -----------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    ch = s.channelization
    return {
        "name": s.name,
        "vehicles": [{"id": v.id, "qos": v.qos} for v in s.vehicles],
        "clusters": [{"id": c.id, "members": sorted(c.members)} for c in s.clusters],
        "one_hop_cluster_pairs": [list(p) for p in sorted(s.one_hop_cluster_pairs)],
        "channelization": {"K": ch.K, "L": ch.L, "B": ch.B, "L_max": ch.L_max},
        "epsilon": s.epsilon,
        "channel_model": {
            "sinr_lo_db": s.channel_model.sinr_lo_db,
            "sinr_hi_db": s.channel_model.sinr_hi_db,
        },
    }


def _field(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected an object")
    if key not in d:
        raise ScenarioError(f"{where}: missing field '{key}'")
    return d[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}: expected an integer, got {value!r}")
    return value


def scenario_from_dict(d: dict) -> Scenario:
    vehicles = tuple(
        Vehicle(
            id=_integer(_field(v, "id", f"vehicles[{i}]"), f"vehicles[{i}].id"),
            qos=_number(_field(v, "qos", f"vehicles[{i}]"), f"vehicles[{i}].qos"),
        )
        for i, v in enumerate(_field(d, "vehicles", "scenario"))
    )
    clusters = []
    for i, c in enumerate(_field(d, "clusters", "scenario")):
        members = _field(c, "members", f"clusters[{i}]")
        if not isinstance(members, list):
            raise ScenarioError(f"clusters[{i}].members: expected a list")
        clusters.append(
            Cluster(
                _integer(_field(c, "id", f"clusters[{i}]"), f"clusters[{i}].id"),
                [_integer(m, f"clusters[{i}].members") for m in members],
            )
        )
    ch = _field(d, "channelization", "scenario")
    channelization = Channelization(
        K=_integer(_field(ch, "K", "channelization"), "channelization.K"),
        L=_integer(_field(ch, "L", "channelization"), "channelization.L"),
        B=_number(_field(ch, "B", "channelization"), "channelization.B"),
        L_max=_integer(ch.get("L_max", 100), "channelization.L_max"),
    )
    hops = []
    for i, p in enumerate(d.get("one_hop_cluster_pairs", [])):
        if not isinstance(p, list) or len(p) != 2:
            raise ScenarioError(f"one_hop_cluster_pairs[{i}]: expected [a, b]")
        hops.append(tuple(_integer(x, f"one_hop_cluster_pairs[{i}]") for x in p))
    cm = d.get("channel_model", {})
    model = ChannelModelParams(
        sinr_lo_db=_number(cm.get("sinr_lo_db", 0.0), "channel_model.sinr_lo_db"),
        sinr_hi_db=_number(cm.get("sinr_hi_db", 15.0), "channel_model.sinr_hi_db"),
    )
    return Scenario(
        vehicles=vehicles,
        clusters=tuple(clusters),
        channelization=channelization,
        epsilon=_number(_field(d, "epsilon", "scenario"), "epsilon"),
        one_hop_cluster_pairs=frozenset(hops),
        channel_model=model,
        name=str(d.get("name", "")),
    )


def loads_scenario(text: str, source: str = "<string>") -> Scenario:
    if not text.strip():
        raise ScenarioError(f"{source}: empty scenario file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}"
        ) from None
    try:
        return scenario_from_dict(raw)
    except ScenarioError as exc:
        raise ScenarioError(f"{source}: {exc}") from None


def load_scenario(path) -> Scenario:
    path = Path(path)
    return loads_scenario(path.read_text(), source=str(path))


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(s))
