"""Batch experiments: seeded topologies, matched-budget solver runs, CDFs, sweeps.

Topology ``t`` of a batch is generated from ``base_seed ^ t``. Solver seeds
come from ``SeedSequence((base_seed, t, algorithm_key))`` so that adding or
dropping an algorithm never changes another algorithm's stream.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from thzassoc.association import check_constraints
from thzassoc.channel import LinkBudgetParams
from thzassoc.errors import ParameterError
from thzassoc.gwo import gwo_optimize
from thzassoc.pso import PSOParams, pso_optimize
from thzassoc.scenario import Topology, generate_topology

ALGORITHM_KEYS = {"gwo": 1, "pso": 2}


@dataclass(frozen=True)
class TopologyConfig:
    n_bs: int = 6
    n_ue: int = 120
    radius: float = 50.0
    demand_min: float = 1e9
    demand_max: float = 10e9
    bs_layout: str = "uniform"

    def __post_init__(self):
        if self.n_bs < 1:
            raise ParameterError("n_bs must be >= 1", key="topology.n_bs")
        if self.n_ue < 1:
            raise ParameterError("n_ue must be >= 1", key="topology.n_ue")
        if not self.radius > 0:
            raise ParameterError("radius must be positive", key="topology.radius_m")
        if not 0 < self.demand_min <= self.demand_max:
            raise ParameterError("need 0 < demand_min <= demand_max", key="topology.demand_min_bps")
        if self.bs_layout not in ("uniform", "grid"):
            raise ParameterError(f"unknown layout {self.bs_layout!r}", key="topology.bs_layout")

    def generate(self, seed: int) -> Topology:
        return generate_topology(self.n_bs, self.n_ue, self.radius,
                                 self.demand_min, self.demand_max, seed, self.bs_layout)


@dataclass(frozen=True)
class ExperimentConfig:
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    channel: LinkBudgetParams = field(default_factory=LinkBudgetParams)
    pop_size: int = 200
    g_max: int = 150
    num_topologies: int = 20
    base_seed: int = 0
    algorithms: tuple[str, ...] = ("gwo", "pso")
    pso: PSOParams = field(default_factory=PSOParams)

    def __post_init__(self):
        if self.num_topologies < 1:
            raise ParameterError("num_topologies must be >= 1", key="experiment.num_topologies")
        if not self.algorithms:
            raise ParameterError("at least one algorithm is required", key="experiment.algorithms")
        for a in self.algorithms:
            if a not in ALGORITHM_KEYS:
                raise ParameterError(f"unknown algorithm {a!r}", key="experiment.algorithms")
        if self.base_seed < 0:
            raise ParameterError("seed must be non-negative", key="experiment.seed")
        if self.pop_size < 4:
            raise ParameterError("pop_size must be >= 4", key="solver.pop_size")
        if self.g_max < 1:
            raise ParameterError("g_max must be >= 1", key="solver.g_max")


@dataclass
class RunMetrics:
    algorithm: str
    topology_idx: int
    seed: int
    trace: np.ndarray
    final_utility: float
    served_fraction: float
    wall_time: float


def topology_seed(base_seed: int, t: int) -> int:
    return base_seed ^ t


def solver_seed(base_seed: int, t: int, algorithm: str) -> int:
    ss = np.random.SeedSequence((base_seed, t, ALGORITHM_KEYS[algorithm]))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def solve(algorithm: str, topology: Topology, config: ExperimentConfig, seed: int):
    if algorithm == "gwo":
        return gwo_optimize(topology, config.channel, config.pop_size, config.g_max, seed)
    if algorithm == "pso":
        return pso_optimize(topology, config.channel, config.pop_size, config.g_max, seed, config.pso)
    raise ParameterError(f"unknown algorithm {algorithm!r}", key="experiment.algorithms")


def _run_one(config: ExperimentConfig, t: int, algorithm: str) -> RunMetrics:
    topo = config.topology.generate(topology_seed(config.base_seed, t))
    seed = solver_seed(config.base_seed, t, algorithm)
    start = time.perf_counter()
    sol, trace = solve(algorithm, topo, config, seed)
    elapsed = time.perf_counter() - start
    bad = check_constraints(sol, topo)
    if bad:
        raise RuntimeError(f"{algorithm} produced an infeasible solution on topology {t}: {bad[0].detail}")
    return RunMetrics(algorithm, t, seed, trace, sol.utility, sol.served_fraction, elapsed)


def run_batch(config: ExperimentConfig, jobs: int = 1) -> list[RunMetrics]:
    """One run per (topology, algorithm); every algorithm sees the same topologies and budget."""
    tasks = [(t, a) for t in range(config.num_topologies) for a in config.algorithms]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, config, t, a) for t, a in tasks]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(config, t, a) for t, a in tasks]
    order = {a: k for k, a in enumerate(config.algorithms)}
    return sorted(results, key=lambda m: (m.topology_idx, order[m.algorithm]))


def utility_cdf(metrics: list[RunMetrics], algorithm: str) -> list[tuple[float, float]]:
    """Empirical CDF of final utilities for one algorithm."""
    values = np.sort([m.final_utility for m in metrics if m.algorithm == algorithm])
    if values.size == 0:
        raise ParameterError(f"no runs for algorithm {algorithm!r}", key="algorithm")
    uniq, counts = np.unique(values, return_counts=True)
    cum = np.cumsum(counts) / values.size
    return [(float(u), float(p)) for u, p in zip(uniq, cum)]


@dataclass(frozen=True)
class SweepPoint:
    n_ue: int
    algorithm: str
    mean_utility: float
    mean_served_fraction: float
    served_fractions: tuple[float, ...] = ()  # one per topology


def scaling_sweep(config: ExperimentConfig, ue_counts: list[int], jobs: int = 1) -> list[SweepPoint]:
    """Averaged utility and served fraction per UE count; every count reuses ``base_seed``."""
    if not ue_counts:
        raise ParameterError("ue_counts must not be empty", key="sweep.ue_counts")
    out = []
    for n in ue_counts:
        cfg = replace(config, topology=replace(config.topology, n_ue=int(n)))
        runs = run_batch(cfg, jobs)
        for a in config.algorithms:
            mine = [m for m in runs if m.algorithm == a]
            out.append(SweepPoint(int(n), a,
                                  float(np.mean([m.final_utility for m in mine])),
                                  float(np.mean([m.served_fraction for m in mine])),
                                  tuple(m.served_fraction for m in mine)))
    return out


def summarize(metrics: list[RunMetrics]) -> dict:
    algos = sorted({m.algorithm for m in metrics}, key=lambda a: ALGORITHM_KEYS[a])
    by_topo: dict[int, dict[str, float]] = {}
    for m in metrics:
        by_topo.setdefault(m.topology_idx, {})[m.algorithm] = m.final_utility
    wins = {a: 0 for a in algos}
    ties = 0
    for utils in by_topo.values():
        best = max(utils.values())
        leaders = [a for a, u in utils.items() if u == best]
        if len(leaders) == 1:
            wins[leaders[0]] += 1
        else:
            ties += 1
    summary = {"runs": len(metrics), "topologies": len(by_topo), "ties": ties, "algorithms": {}}
    for a in algos:
        u = [m.final_utility for m in metrics if m.algorithm == a]
        s = [m.served_fraction for m in metrics if m.algorithm == a]
        summary["algorithms"][a] = {
            "mean_utility_bps": statistics.fmean(u),
            "median_utility_bps": statistics.median(u),
            "mean_served_fraction": statistics.fmean(s),
            "wins": wins[a],
        }
    return summary


def _csv_text(fieldnames: list[str], rows: list[dict], header: str) -> str:
    buf = io.StringIO()
    buf.write(header)
    w = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def runs_csv(metrics: list[RunMetrics], header: str = "", record_time: bool = False) -> str:
    """One row per run. ``wall_time_s`` stays empty unless ``record_time`` so files stay reproducible."""
    rows = [{
        "algorithm": m.algorithm,
        "topology_idx": m.topology_idx,
        "seed": m.seed,
        "final_utility_bps": repr(m.final_utility),
        "served_fraction": repr(m.served_fraction),
        "wall_time_s": f"{m.wall_time:.6f}" if record_time else "",
    } for m in metrics]
    fields = ["algorithm", "topology_idx", "seed", "final_utility_bps", "served_fraction", "wall_time_s"]
    return _csv_text(fields, rows, header)


def traces_csv(metrics: list[RunMetrics], header: str = "") -> str:
    rows = [
        {"algorithm": m.algorithm, "topology_idx": m.topology_idx, "generation": g,
         "best_fitness_bps": repr(float(v))}
        for m in metrics for g, v in enumerate(m.trace)
    ]
    return _csv_text(["algorithm", "topology_idx", "generation", "best_fitness_bps"], rows, header)


def sweep_csv(points: list[SweepPoint], header: str = "") -> str:
    rows = [{"n_ue": p.n_ue, "algorithm": p.algorithm, "mean_utility_bps": repr(p.mean_utility),
             "mean_served_fraction": repr(p.mean_served_fraction)} for p in points]
    return _csv_text(["n_ue", "algorithm", "mean_utility_bps", "mean_served_fraction"], rows, header)
