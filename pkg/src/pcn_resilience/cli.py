"""Command-line front end.

Subcommands:
  analyze     graph measures, small-world coefficient, power-law fit
  attack      strategy sweeps with a-priori/a-posteriori metric reports
  robustness  mean component count after random failures

Every emitted report embeds the tool version, the seed, and a hash of the
run configuration; identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .attack_engine import MetricParams, Strategy, execute_attack, plan_targets
from .graph_model import SnapshotError, ValidationError, load_snapshot
from .payment_sim import UNIT_VOLUMES, load_volumes
from .powerlaw_fit import FitError, ccdf_table, fit_power_law, goodness_of_fit
from .topology_metrics import (MetricReport, degree_distribution,
                               generate_reference, metric_report,
                               random_failure_experiment)

SWEEP_STRATEGIES = ("degree", "betweenness", "eigenvector",
                    "ranked-min-cut", "parallel-paths", "random")

ATTACK_CSV_HEADER = ("strategy,constraint,n_or_budget,spent,s,s_prime,"
                     "r,r_prime,F_bar,F_bar_prime,delta_s,delta_r,delta_F")


def _config_hash(args: dict) -> str:
    # the output location is not part of the run configuration
    blob = json.dumps({k: v for k, v in args.items() if k != "out"},
                      sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _meta(args: dict, seed: int) -> dict:
    return {"version": __version__, "seed": seed, "config_hash": _config_hash(args)}


def _default_seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("PCN_RESILIENCE_SEED")
    return int(env) if env else 0


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _parse_sweep(text: str) -> list[int]:
    parts = [int(p) for p in text.split(":")]
    if len(parts) == 2:
        start, end, step = parts[0], parts[1], 1
    elif len(parts) == 3:
        start, end, step = parts
    else:
        raise ValueError(f"bad sweep spec {text!r}, expected start:end[:step]")
    return list(range(start, end + 1, step))


def cmd_analyze(args) -> int:
    seed = _default_seed(args.seed)
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["seed"] = seed
    g = load_snapshot(args.snapshot, balance_model=args.balance_model)
    out = Path(args.out)

    rows = [("pcn", metric_report(
        g, smallworld_runs=args.smallworld_runs, seed=seed,
        betweenness_sources=args.betweenness_sources))]
    for kind in args.reference or []:
        ref = generate_reference(kind, g.node_count, g.edge_count, seed=seed)
        rows.append((kind, metric_report(
            ref, seed=seed, betweenness_sources=args.betweenness_sources)))

    meta = _meta(cfg, seed)
    if args.format == "csv":
        lines = [f"# version={meta['version']} seed={seed} "
                 f"config_hash={meta['config_hash']}",
                 "graph," + MetricReport.CSV_HEADER]
        lines += [f"{name},{r.to_csv_row()}" for name, r in rows]
        _write(out / "metrics.csv", "\n".join(lines) + "\n")
    else:
        _write(out / "metrics.json", _json_dump({
            "meta": meta,
            "graphs": {name: r.to_dict() for name, r in rows},
        }))

    degrees = []
    for deg, count in sorted(degree_distribution(g).items()):
        degrees.extend([deg] * count)
    dist_lines = ["degree,count"] + [
        f"{deg},{count}" for deg, count in sorted(degree_distribution(g).items())]
    _write(out / "degree_distribution.csv", "\n".join(dist_lines) + "\n")

    pl: dict = {"meta": meta}
    try:
        positive = [d for d in degrees if d >= 1]
        fit = fit_power_law(positive)
        pl["fit"] = fit.to_dict()
        gof = goodness_of_fit(positive, fit, synthetic_runs=args.gof_runs, seed=seed)
        pl["goodness_of_fit"] = gof.to_dict()
        ccdf_lines = ["k,ccdf,fitted"]
        for k, emp, fitted in ccdf_table(positive, fit):
            ccdf_lines.append(f"{k},{emp:.8g},{'' if fitted is None else f'{fitted:.8g}'}")
        _write(out / "degree_ccdf.csv", "\n".join(ccdf_lines) + "\n")
    except FitError as exc:
        pl["error"] = str(exc)
    _write(out / "powerlaw.json", _json_dump(pl))
    return 0


def _strategy_for(kind: str, args, seed: int) -> Strategy:
    params: dict = {"seed": seed}
    if kind == "ranked-min-cut":
        params["cut_samples"] = args.cut_samples
    elif kind == "parallel-paths":
        params["payment_samples"] = args.payment_samples
        params["hub"] = args.hub
    return Strategy(kind=kind, params=params)


def cmd_attack(args) -> int:
    seed = _default_seed(args.seed)
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["seed"] = seed
    g = load_snapshot(args.snapshot, balance_model=args.balance_model)
    volumes = load_volumes(args.volumes) if args.volumes else UNIT_VOLUMES
    metric_params = MetricParams(attempts=args.attempts,
                                 flow_rounds=args.flow_rounds,
                                 volumes=volumes, hub=args.hub)

    if args.n_sweep:
        points = [("count", n) for n in _parse_sweep(args.n_sweep)]
    elif args.budget_sweep:
        points = [("budget", int(b)) for b in args.budget_sweep.split(",")]
    else:
        raise SystemExit("one of --n-sweep or --budget-sweep is required")

    kinds = list(SWEEP_STRATEGIES) if "all" in args.strategy else args.strategy
    limit = args.plan_limit
    if points and points[0][0] == "count":
        limit = max(limit, max(v for _, v in points))

    rows = []
    for kind in kinds:
        plan = plan_targets(g, _strategy_for(kind, args, seed), limit=limit)
        for constraint in points:
            report = execute_attack(g, plan, constraint,
                                    metric_params=metric_params, seed=seed,
                                    griefing=args.griefing)
            rows.append((kind, constraint, report))

    meta = _meta(cfg, seed)
    out = Path(args.out)
    if args.format == "csv":
        lines = [f"# version={meta['version']} seed={seed} "
                 f"config_hash={meta['config_hash']}",
                 ATTACK_CSV_HEADER]
        for kind, (ckind, cval), rep in rows:
            lines.append(
                f"{kind},{ckind},{cval},{rep.spent},"
                f"{rep.a_priori.s:.6g},{rep.a_posteriori.s:.6g},"
                f"{rep.a_priori.r},{rep.a_posteriori.r},"
                f"{rep.a_priori.F_bar:.6g},{rep.a_posteriori.F_bar:.6g},"
                f"{rep.delta_s:.6g},{rep.delta_r:.6g},{rep.delta_F:.6g}")
        _write(out, "\n".join(lines) + "\n")
    else:
        _write(out, _json_dump({
            "meta": meta,
            "rows": [
                {"strategy": kind, "constraint": {"kind": ck, "value": cv},
                 **rep.to_dict()}
                for kind, (ck, cv), rep in rows
            ],
        }))
    return 0


def cmd_robustness(args) -> int:
    seed = _default_seed(args.seed)
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["seed"] = seed
    g = load_snapshot(args.snapshot, balance_model=args.balance_model)
    failures = [int(f) for f in args.failures.split(",")]
    result = random_failure_experiment(g, failures, runs=args.reps, seed=seed)
    meta = _meta(cfg, seed)
    lines = [f"# version={meta['version']} seed={seed} "
             f"config_hash={meta['config_hash']}",
             "failures,mean_components"]
    lines += [f"{k},{result[k]:.6g}" for k in failures]
    _write(Path(args.out), "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcn-resilience",
        description="Payment channel network topology analysis and attack simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--snapshot", required=True)
        p.add_argument("--balance-model", default="capacity-both-ways",
                       choices=["capacity-both-ways", "half-split", "explicit"])
        p.add_argument("--seed", type=int, default=None,
                       help="defaults to $PCN_RESILIENCE_SEED or 0")
        p.add_argument("--out", required=True)
        p.add_argument("--format", default="json", choices=["json", "csv"])

    p = sub.add_parser("analyze", help="graph measures and power-law fit")
    common(p)
    p.add_argument("--reference", action="append",
                   choices=["erdos-renyi", "barabasi-albert"],
                   help="also report a size-matched reference graph (repeatable)")
    p.add_argument("--smallworld-runs", type=int, default=10)
    p.add_argument("--gof-runs", type=int, default=1000)
    p.add_argument("--betweenness-sources", type=int, default=None,
                   help="pivot sampling for betweenness on large graphs")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("attack", help="attack-strategy sweeps")
    common(p)
    p.add_argument("--strategy", action="append", required=True,
                   choices=list(SWEEP_STRATEGIES) + ["all"])
    p.add_argument("--n-sweep", help="count sweep start:end[:step]")
    p.add_argument("--budget-sweep", help="comma-separated satoshi budgets")
    p.add_argument("--volumes", help="payment volume file, one satoshi/line")
    p.add_argument("--cut-samples", type=int, default=1000)
    p.add_argument("--payment-samples", type=int, default=1000)
    p.add_argument("--hub", default=None)
    p.add_argument("--attempts", type=int, default=1000)
    p.add_argument("--flow-rounds", type=int, default=100)
    p.add_argument("--plan-limit", type=int, default=50)
    p.add_argument("--griefing", action="store_true",
                   help="zero-cost isolation (griefing upper bound)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("robustness", help="random-failure component counts")
    common(p)
    p.add_argument("--failures", required=True,
                   help="comma-separated failure counts")
    p.add_argument("--reps", type=int, default=100)
    p.set_defaults(func=cmd_robustness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, SnapshotError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
