"""Flat dotted-key configuration files (YAML syntax).

Keys may be written flat (``topology.n_bs: 6``) or nested; both forms are
flattened before validation. Unknown keys are rejected by name.

topology.*   n_bs, n_ue, radius_m, demand_min_bps, demand_max_bps, bs_layout
channel.*    carrier_frequency_hz, bandwidth_hz, theta_db, absorption_coeff_per_m, min_distance_m
solver.*     pop_size, g_max, pso_inertia, pso_c1, pso_c2, pso_vmax_frac
experiment.* num_topologies, seed, algorithms
sweep.*      ue_counts
macsim.*     num_sectors, num_abft_slots, ati_present, max_backoff_bi, num_stations, max_bi, runs
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from thzassoc.channel import LinkBudgetParams
from thzassoc.errors import ParameterError
from thzassoc.harness import ExperimentConfig, TopologyConfig
from thzassoc.macsim import BeaconIntervalConfig
from thzassoc.pso import PSOParams

DEFAULTS: dict[str, Any] = {
    "topology.n_bs": 6,
    "topology.n_ue": 120,
    "topology.radius_m": 50.0,
    "topology.demand_min_bps": 1e9,
    "topology.demand_max_bps": 10e9,
    "topology.bs_layout": "uniform",
    "channel.carrier_frequency_hz": 300e9,
    "channel.bandwidth_hz": 1e9,
    "channel.theta_db": 120.0,
    "channel.absorption_coeff_per_m": 0.0,
    "channel.min_distance_m": 0.1,
    "solver.pop_size": 200,
    "solver.g_max": 150,
    "solver.pso_inertia": 0.7298,
    "solver.pso_c1": 1.49618,
    "solver.pso_c2": 1.49618,
    "solver.pso_vmax_frac": 0.5,
    "experiment.num_topologies": 20,
    "experiment.seed": 0,
    "experiment.algorithms": ["gwo", "pso"],
    "sweep.ue_counts": list(range(10, 261, 10)),
    "macsim.num_sectors": 16,
    "macsim.num_abft_slots": 8,
    "macsim.ati_present": True,
    "macsim.max_backoff_bi": 4,
    "macsim.num_stations": 8,
    "macsim.max_bi": 100,
    "macsim.runs": 100,
}

_INT_KEYS = {
    "topology.n_bs", "topology.n_ue", "solver.pop_size", "solver.g_max",
    "experiment.num_topologies", "experiment.seed", "macsim.num_sectors",
    "macsim.num_abft_slots", "macsim.max_backoff_bi", "macsim.num_stations",
    "macsim.max_bi", "macsim.runs",
}
_STR_KEYS = {"topology.bs_layout"}
_BOOL_KEYS = {"macsim.ati_present"}


def flatten(doc: dict, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _coerce(key: str, value: Any) -> Any:
    try:
        if key in _BOOL_KEYS:
            if isinstance(value, bool):
                return value
            raise ValueError
        if key in _STR_KEYS:
            return str(value)
        if key == "experiment.algorithms":
            if isinstance(value, str):
                value = ["gwo", "pso"] if value == "both" else [v.strip() for v in value.split(",")]
            return [str(v) for v in value]
        if key == "sweep.ue_counts":
            if isinstance(value, str):
                value = value.split(",")
            return [int(v) for v in value]
        if key in _INT_KEYS:
            if isinstance(value, bool) or float(value) != int(value):
                raise ValueError
            return int(value)
        if isinstance(value, bool):
            raise ValueError
        return float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"invalid value {value!r}", key=key) from None


def resolve(values: dict[str, Any]) -> dict[str, Any]:
    """Defaults overlaid with ``values``, every value coerced to its type."""
    out = dict(DEFAULTS)
    for key, value in values.items():
        if key not in DEFAULTS:
            raise ParameterError("unknown config key", key=key)
        out[key] = _coerce(key, value)
    return out


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    """Read and resolve a config file; ``overrides`` (CLI flags) win over file values."""
    text = Path(path).read_text()
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ParameterError(f"cannot parse config: {exc}", key=str(path)) from None
    if not isinstance(doc, dict):
        raise ParameterError("config must be a mapping of keys to values", key=str(path))
    values = flatten(doc)
    values.update(overrides or {})
    return resolve(values)


def config_hash(flat: dict[str, Any]) -> str:
    blob = json.dumps(flat, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def experiment_config(flat: dict[str, Any]) -> ExperimentConfig:
    topology = TopologyConfig(
        n_bs=flat["topology.n_bs"],
        n_ue=flat["topology.n_ue"],
        radius=flat["topology.radius_m"],
        demand_min=flat["topology.demand_min_bps"],
        demand_max=flat["topology.demand_max_bps"],
        bs_layout=flat["topology.bs_layout"],
    )
    try:
        channel = LinkBudgetParams(
            carrier_frequency=flat["channel.carrier_frequency_hz"],
            bandwidth=flat["channel.bandwidth_hz"],
            theta_db=flat["channel.theta_db"],
            absorption_coeff=flat["channel.absorption_coeff_per_m"],
            min_distance=flat["channel.min_distance_m"],
        )
    except ParameterError as exc:
        raise ParameterError(str(exc), key=f"channel.{exc.key}") from None
    pso = PSOParams(
        inertia=flat["solver.pso_inertia"],
        c1=flat["solver.pso_c1"],
        c2=flat["solver.pso_c2"],
        vmax_frac=flat["solver.pso_vmax_frac"],
    )
    return ExperimentConfig(
        topology=topology,
        channel=channel,
        pop_size=flat["solver.pop_size"],
        g_max=flat["solver.g_max"],
        num_topologies=flat["experiment.num_topologies"],
        base_seed=flat["experiment.seed"],
        algorithms=tuple(flat["experiment.algorithms"]),
        pso=pso,
    )


@dataclass(frozen=True)
class MacsimConfig:
    beacon: BeaconIntervalConfig
    num_stations: int
    max_bi: int
    runs: int
    seed: int


def macsim_config(flat: dict[str, Any]) -> MacsimConfig:
    beacon = BeaconIntervalConfig(
        num_sectors=flat["macsim.num_sectors"],
        num_abft_slots=flat["macsim.num_abft_slots"],
        ati_present=flat["macsim.ati_present"],
        max_backoff_bi=flat["macsim.max_backoff_bi"],
    )
    for key in ("macsim.num_stations", "macsim.max_bi", "macsim.runs"):
        if flat[key] < 1:
            raise ParameterError("must be >= 1", key=key)
    return MacsimConfig(beacon, flat["macsim.num_stations"], flat["macsim.max_bi"],
                        flat["macsim.runs"], flat["experiment.seed"])
