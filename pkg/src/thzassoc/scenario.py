"""Network instances: base stations, users with rate demands, and presets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from thzassoc.errors import ParameterError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BaseStationNode:
    id: int
    x: float
    y: float
    boresight: float = 0.0  # rad, [0, 2pi)


@dataclass(frozen=True)
class UserNode:
    id: int
    x: float
    y: float
    min_rate: float  # bit/s
    boresight: float = 0.0


@dataclass(frozen=True)
class Topology:
    base_stations: tuple[BaseStationNode, ...]
    users: tuple[UserNode, ...]
    radius: float

    def __post_init__(self):
        if len(self.base_stations) < 1 or len(self.users) < 1:
            raise ParameterError("topology needs at least one BS and one UE")
        for kind, nodes in (("base station", self.base_stations), ("user", self.users)):
            ids = [n.id for n in nodes]
            if len(set(ids)) != len(ids):
                raise ParameterError(f"duplicate {kind} id")
            for n in nodes:
                # small slack so serialised float positions round-trip
                if math.hypot(n.x, n.y) > self.radius * (1 + 1e-9):
                    raise ParameterError(f"{kind} {n.id} lies outside the deployment disk")
                if not 0.0 <= n.boresight < TWO_PI:
                    raise ParameterError(f"{kind} {n.id} boresight outside [0, 2pi)")
        for u in self.users:
            if not u.min_rate > 0:
                raise ParameterError(f"user {u.id} needs a positive min_rate", key="min_rate")

    @property
    def n_bs(self) -> int:
        return len(self.base_stations)

    @property
    def n_ue(self) -> int:
        return len(self.users)

    def bs_positions(self) -> np.ndarray:
        return np.array([(b.x, b.y) for b in self.base_stations], dtype=float)

    def ue_positions(self) -> np.ndarray:
        return np.array([(u.x, u.y) for u in self.users], dtype=float)

    def demands(self) -> np.ndarray:
        return np.array([u.min_rate for u in self.users], dtype=float)

    def distances(self) -> np.ndarray:
        """BS-by-UE Euclidean distance matrix in metres."""
        diff = self.bs_positions()[:, None, :] - self.ue_positions()[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "base_stations": [
                {"id": b.id, "x": b.x, "y": b.y, "boresight": b.boresight}
                for b in self.base_stations
            ],
            "users": [
                {"id": u.id, "x": u.x, "y": u.y, "boresight": u.boresight, "min_rate_bps": u.min_rate}
                for u in self.users
            ],
            "radius_m": self.radius,
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> Topology:
        try:
            bss = tuple(
                BaseStationNode(int(b["id"]), float(b["x"]), float(b["y"]), float(b["boresight"]))
                for b in doc["base_stations"]
            )
            ues = tuple(
                UserNode(
                    int(u["id"]), float(u["x"]), float(u["y"]),
                    float(u["min_rate_bps"]), float(u["boresight"]),
                )
                for u in doc["users"]
            )
            return cls(bss, ues, float(doc["radius_m"]))
        except KeyError as exc:
            raise ParameterError(f"topology document is missing key {exc.args[0]!r}", key=str(exc.args[0])) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> Topology:
        return cls.from_dict(json.loads(text))


def sample_disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Area-uniform points in a disk centred at the origin, shape (n, 2)."""
    r = radius * np.sqrt(rng.random(n))
    phi = rng.random(n) * TWO_PI
    return np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def grid_positions(n: int, radius: float) -> np.ndarray:
    """Regular BS layout: one at the origin for n == 1, else evenly on a ring of radius R/2."""
    if n == 1:
        return np.zeros((1, 2))
    ang = TWO_PI * np.arange(n) / n
    return 0.5 * radius * np.column_stack((np.cos(ang), np.sin(ang)))


def generate_topology(
    n_bs: int,
    n_ue: int,
    radius: float,
    demand_min: float,
    demand_max: float,
    seed: int,
    bs_layout: str = "uniform",
) -> Topology:
    """Draw a random network instance.

    BS and UE positions are area-uniform over the disk (``bs_layout="grid"``
    places BSs regularly instead). Demands are uniform on
    ``[demand_min, demand_max]``. The same seed always yields the same topology.
    """
    if n_bs < 1:
        raise ParameterError("n_bs must be >= 1", key="n_bs")
    if n_ue < 1:
        raise ParameterError("n_ue must be >= 1", key="n_ue")
    if not radius > 0:
        raise ParameterError("radius must be positive", key="radius")
    if not 0 < demand_min <= demand_max:
        raise ParameterError("need 0 < demand_min <= demand_max", key="demand_min")
    if bs_layout not in ("uniform", "grid"):
        raise ParameterError(f"unknown bs_layout {bs_layout!r}", key="bs_layout")

    rng = np.random.default_rng(seed)
    # fixed draw order keeps every stream stable regardless of layout choice
    bs_xy = sample_disk(rng, n_bs, radius)
    bs_angle = rng.random(n_bs) * TWO_PI
    ue_xy = sample_disk(rng, n_ue, radius)
    ue_angle = rng.random(n_ue) * TWO_PI
    demand = demand_min + (demand_max - demand_min) * rng.random(n_ue)
    if bs_layout == "grid":
        bs_xy = grid_positions(n_bs, radius)

    bss = tuple(
        BaseStationNode(i, float(bs_xy[i, 0]), float(bs_xy[i, 1]), float(bs_angle[i]) % TWO_PI)
        for i in range(n_bs)
    )
    ues = tuple(
        UserNode(j, float(ue_xy[j, 0]), float(ue_xy[j, 1]), float(demand[j]), float(ue_angle[j]) % TWO_PI)
        for j in range(n_ue)
    )
    return Topology(bss, ues, float(radius))


@dataclass(frozen=True)
class ScenarioPreset:
    scenario_id: int
    max_link_latency_ms: float
    max_link_range_m: float
    max_optical_range_km: float
    connections_per_node: int
    link_throughput_gbps: float  # per connection
    throughput_range_product: tuple[float, float]  # (Gbps, m)
    target_ber: str
    availability: str

    @property
    def aggregate_throughput_gbps(self) -> float:
        return self.link_throughput_gbps * self.connections_per_node


_PRESETS = {
    1: ScenarioPreset(1, 1, 1000, 50, 1, 1000, (1000, 1000), "1e-12", "Critical"),
    2: ScenarioPreset(2, 1, 500, 10, 10, 100, (100, 1000), "Application dependent", "Critical"),
    3: ScenarioPreset(3, 1, 10, 1, 100, 10, (10, 10), "Application dependent", "Application dependent"),
}


def load_scenario_preset(scenario_id: int) -> ScenarioPreset:
    """KPI row for technical scenario 1, 2 or 3."""
    try:
        return _PRESETS[int(scenario_id)]
    except (KeyError, ValueError, TypeError):
        raise ParameterError(f"unknown scenario id {scenario_id!r}; expected 1, 2 or 3", key="scenario") from None
