"""Command-line entry point.

Exit status: 0 on success, 1 on a configuration or parameter error (the
message names the offending key), 2 on an I/O error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from thzassoc import __version__
from thzassoc.association import check_constraints
from thzassoc.config import config_hash, experiment_config, load_config, macsim_config
from thzassoc.errors import ParameterError
from thzassoc.harness import (
    run_batch,
    runs_csv,
    scaling_sweep,
    solve,
    solver_seed,
    summarize,
    sweep_csv,
    topology_seed,
    traces_csv,
)
from thzassoc.macsim import simulate_initial_access, write_latency_csv
from thzassoc.scenario import Topology, load_scenario_preset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thzassoc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, algo=False):
        p.add_argument("--config", required=True, help="YAML config with flat dotted keys")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, help="overrides experiment.seed")
        if algo:
            p.add_argument("--algo", choices=["gwo", "pso", "both"], help="overrides experiment.algorithms")
            p.add_argument("--jobs", type=int, default=1, help="max concurrent runs")

    common(sub.add_parser("generate", help="write one random topology"))
    p = sub.add_parser("solve", help="solve one topology")
    common(p, algo=True)
    p.add_argument("--topology", help="topology JSON to solve instead of generating one")
    p = sub.add_parser("batch", help="multi-topology GWO/PSO comparison")
    common(p, algo=True)
    p.add_argument("--timing", action="store_true", help="fill wall_time_s (makes output non-reproducible)")
    p = sub.add_parser("sweep", help="average results over a range of UE counts")
    common(p, algo=True)
    p.add_argument("--ue-counts", help="comma-separated UE counts, overrides sweep.ue_counts")
    common(sub.add_parser("macsim", help="initial-access / A-BFT simulation"))
    p = sub.add_parser("presets", help="print a technical-scenario KPI row")
    p.add_argument("--scenario", type=int, required=True, choices=[1, 2, 3])
    return parser


def _overrides(args) -> dict:
    out = {}
    if args.seed is not None:
        out["experiment.seed"] = args.seed
    if getattr(args, "algo", None):
        out["experiment.algorithms"] = args.algo
    if getattr(args, "ue_counts", None):
        out["sweep.ue_counts"] = args.ue_counts
    return out


def _header(flat: dict) -> str:
    return f"# thzassoc {__version__} config_sha256={config_hash(flat)} seed={flat['experiment.seed']}\n"


def _write(out_dir: Path, name: str, text: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)


def cmd_generate(args, flat) -> str:
    cfg = experiment_config(flat)
    topo = cfg.topology.generate(topology_seed(cfg.base_seed, 0))
    doc = {"provenance": _header(flat)[2:].strip(), **topo.to_dict()}
    _write(Path(args.out), "topology.json", json.dumps(doc, indent=2) + "\n")
    return f"topology: {topo.n_bs} BSs, {topo.n_ue} UEs, radius {topo.radius:g} m"


def cmd_solve(args, flat) -> str:
    cfg = experiment_config(flat)
    if args.topology:
        topo = Topology.from_json(Path(args.topology).read_text())
    else:
        topo = cfg.topology.generate(topology_seed(cfg.base_seed, 0))
    out = Path(args.out)
    lines = []
    for algo in cfg.algorithms:
        sol, trace = solve(algo, topo, cfg, solver_seed(cfg.base_seed, 0, algo))
        violations = check_constraints(sol, topo)
        doc = {
            "provenance": _header(flat)[2:].strip(),
            "algorithm": algo,
            "utility_bps": sol.utility,
            "served_fraction": sol.served_fraction,
            "feasible": not violations,
            "associations": sol.to_records(),
        }
        _write(out, f"solution_{algo}.json", json.dumps(doc, indent=2) + "\n")
        rows = "".join(f"{g},{float(v)!r}\n" for g, v in enumerate(trace))
        _write(out, f"trace_{algo}.csv", _header(flat) + "generation,best_fitness_bps\n" + rows)
        lines.append(f"{algo}: best utility {sol.utility / 1e9:.3f} Gbps, served {sol.served_fraction:.1%}")
    return "; ".join(lines) + f"; runs completed {len(cfg.algorithms)}"


def cmd_batch(args, flat) -> str:
    cfg = experiment_config(flat)
    metrics = run_batch(cfg, jobs=args.jobs)
    out = Path(args.out)
    header = _header(flat)
    _write(out, "runs.csv", runs_csv(metrics, header, record_time=args.timing))
    _write(out, "traces.csv", traces_csv(metrics, header))
    summary = summarize(metrics)
    summary["provenance"] = header[2:].strip()
    _write(out, "summary.json", json.dumps(summary, indent=2) + "\n")
    best = max(m.final_utility for m in metrics)
    served = statistics.fmean(m.served_fraction for m in metrics)
    return f"best utility {best / 1e9:.3f} Gbps, mean served {served:.1%}, runs completed {len(metrics)}"


def cmd_sweep(args, flat) -> str:
    cfg = experiment_config(flat)
    points = scaling_sweep(cfg, flat["sweep.ue_counts"], jobs=args.jobs)
    _write(Path(args.out), "sweep.csv", sweep_csv(points, _header(flat)))
    best = max(p.mean_utility for p in points)
    served = statistics.fmean(p.mean_served_fraction for p in points)
    runs = len(flat["sweep.ue_counts"]) * cfg.num_topologies * len(cfg.algorithms)
    return f"best mean utility {best / 1e9:.3f} Gbps, mean served {served:.1%}, runs completed {runs}"


def cmd_macsim(args, flat) -> str:
    mc = macsim_config(flat)
    rows, latencies = [], []
    for r in range(mc.runs):
        seed = mc.seed + r
        res = simulate_initial_access(mc.beacon, mc.num_stations, mc.max_bi, seed)
        rows.extend(res.to_csv_rows(seed))
        latencies.extend(x for x in res.latencies if x is not None)
    _write(Path(args.out), "macsim.csv", write_latency_csv(rows, _header(flat)))
    connected = len(latencies) / (mc.runs * mc.num_stations)
    mean = statistics.fmean(latencies) if latencies else float("nan")
    return f"mean IA latency {mean:.3f} BI, connected {connected:.1%}, runs completed {mc.runs}"


def cmd_presets(args) -> str:
    p = load_scenario_preset(args.scenario)
    return (
        f"scenario {p.scenario_id}: max link latency {p.max_link_latency_ms:g} ms, "
        f"max THz link range {p.max_link_range_m:g} m, max optical range {p.max_optical_range_km:g} km, "
        f"{p.connections_per_node} connections per node, "
        f"throughput x range {p.throughput_range_product[0]:g} Gbps x {p.throughput_range_product[1]:g} m, "
        f"aggregate {p.link_throughput_gbps:g} Gbps x {p.connections_per_node}, "
        f"target BER {p.target_ber}, availability {p.availability}"
    )


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "batch": cmd_batch,
    "sweep": cmd_sweep,
    "macsim": cmd_macsim,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            print(cmd_presets(args))
            return 0
        if getattr(args, "jobs", 1) < 1:
            raise ParameterError("must be >= 1", key="--jobs")
        flat = load_config(args.config, _overrides(args))
        print(COMMANDS[args.command](args, flat))
        return 0
    except ParameterError as exc:
        where = f"{exc.key}: " if exc.key else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
