#!/usr/bin/env python3
"""Attack-strategy sweep experiment.

For each target-selection strategy, isolates an increasing number of nodes
and reports the adversarial advantage on payment success ratio (delta_s),
reachability (delta_r), and average max flow (delta_F). Defaults to a
Barabasi-Albert stand-in network when no snapshot is supplied.

Usage:
    python3 scripts/run_attack_sweep.py [--snapshot graph.json]
        [--max-n 50] [--step 10] [--seed N]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pcn_resilience import attack_engine as ae
from pcn_resilience import topology_metrics as tm
from pcn_resilience.graph_model import load_snapshot

STRATEGIES = ("degree", "betweenness", "eigenvector", "parallel-paths", "random")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snapshot", help="describegraph-style JSON snapshot")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nodes", type=int, default=500)
    ap.add_argument("--edges", type=int, default=1500)
    ap.add_argument("--max-n", type=int, default=50)
    ap.add_argument("--step", type=int, default=10)
    ap.add_argument("--attempts", type=int, default=500)
    ap.add_argument("--flow-rounds", type=int, default=30)
    args = ap.parse_args()

    if args.snapshot:
        g = load_snapshot(args.snapshot)
    else:
        print(f"no snapshot given; using BA({args.nodes}, ~{args.edges} edges)\n")
        g = tm.generate_reference("barabasi-albert", args.nodes, args.edges,
                                  seed=args.seed)

    params = ae.MetricParams(attempts=args.attempts,
                             flow_rounds=args.flow_rounds)
    sweep = list(range(args.step, args.max_n + 1, args.step))

    print(f"{'strategy':>16} {'n':>4} {'spent':>12} "
          f"{'delta_s':>8} {'delta_r':>8} {'delta_F':>8}")
    for kind in STRATEGIES:
        strategy = ae.Strategy(kind=kind, params={
            "seed": args.seed,
            **({"payment_samples": 500} if kind == "parallel-paths" else {}),
        })
        plan = ae.plan_targets(g, strategy, limit=args.max_n)
        for n in sweep:
            rep = ae.execute_attack(g, plan, ("count", n),
                                    metric_params=params, seed=args.seed)
            print(f"{kind:>16} {n:>4} {rep.spent:>12} "
                  f"{rep.delta_s:>8.4f} {rep.delta_r:>8.4f} "
                  f"{rep.delta_F:>8.4f}")


if __name__ == "__main__":
    main()
