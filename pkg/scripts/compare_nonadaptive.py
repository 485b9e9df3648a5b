"""Adaptive vs non-adaptive QECC over an auto budget grid (2n up to QwickCluster's mean usage).

    python scripts/compare_nonadaptive.py --dataset S:2000,20,0.15,0.15 --trials 20
"""

import argparse
import sys

from qecc import harness


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", default="S:1000,20,0.15,0.15,0")
    ap.add_argument("--labels")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--points", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    ds = harness.parse_dataset(args.dataset, args.labels)
    g, _ = ds.load()
    cfg = harness.ExperimentConfig(ds, ("qecc", "qecc-nonadaptive"), "auto", args.trials,
                                   args.seed, auto_points=args.points, workers=args.workers)
    summaries = harness.aggregate(harness.run_experiment(cfg, graph=g))
    sys.stdout.write(harness.summary_to_csv(summaries))
    by_q = {}
    for s in summaries:
        by_q.setdefault(s.Q, {})[s.algorithm] = s
    for q, pair in sorted(by_q.items()):
        a, b = pair["qecc"], pair["qecc-nonadaptive"]
        print(f"Q={q:>8}  adaptive cost {a.cost_mean:10.1f}  non-adaptive {b.cost_mean:10.1f}  "
              f"recall {a.recall_mean:.3f} / {b.recall_mean:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
