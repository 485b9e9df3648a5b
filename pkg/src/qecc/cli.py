"""Command line: ``qecc {generate,import,run,verify,opt}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import datasets, harness
from .graph import write_graph
from .metrics import brute_force_opt, cost

log = logging.getLogger("qecc")


def _budgets(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def cmd_generate(args) -> int:
    ds = harness.parse_dataset(args.dataset)
    if ds.path is not None:
        raise SystemExit("generate needs S:..., LB:... or cliques:... as --dataset")
    g, truth = ds.load()
    header = f"{ds.id} n={g.n} m={g.m}"
    if ds.synthetic is not None:
        header += " sizes=" + ",".join(map(str, ds.synthetic.cluster_sizes()))
    if ds.lower_bound is not None:
        lb = ds.lower_bound
        header += f" k={lb.k} effective_epsilon={lb.effective_epsilon:g} |A|={lb.a_size} |B|={lb.b_size}"
    write_graph(g, args.edges, truth, args.labels, header=header)
    print(f"{header} truth_cost={cost(g, truth)}", file=sys.stderr)
    return 0


def cmd_import(args) -> int:
    if args.kind == "citeseer":
        m = datasets.import_citeseer(args.raw, args.edges, args.labels, args.content)
    else:
        m = datasets.IMPORTERS[args.kind](args.raw, args.edges, args.labels)
    print(f"{args.kind}: wrote {m} positive edges to {args.edges}", file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    ds = harness.parse_dataset(args.dataset, args.labels)
    budgets = "auto" if args.auto_budgets or not args.budgets else _budgets(args.budgets)
    cfg = harness.ExperimentConfig(
        dataset=ds,
        algorithms=tuple(args.algo or ("qecc", "qecc-heur")),
        budgets=budgets,
        trials=args.trials,
        base_seed=args.seed,
        charge_duplicates=args.charge_duplicates,
        workers=args.workers,
    )
    g, truth = ds.load()
    records = harness.run_experiment(cfg, graph=g)
    if truth is not None and args.with_truth:
        records.insert(0, harness.ground_truth_record(g, truth, ds.id))
    text = harness.records_to_csv(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(harness.summary_to_csv(harness.aggregate(records)))
    return 0


def cmd_verify(args) -> int:
    names = list(harness.SUITES) if args.suite == ["all"] else args.suite
    ok = True
    for name in names:
        params = {}
        if args.seed is not None:
            params["seed"] = args.seed
        if args.trials is not None and name in ("lemma2", "thm1-bound", "approx3"):
            params["trials"] = args.trials
        report = harness.verify_suite(name, **params)
        lines = report.lines()
        print("\n".join(lines if args.verbose else lines[-1:]))
        ok &= report.passed
    return 0 if ok else 1


def cmd_opt(args) -> int:
    ds = harness.parse_dataset(args.dataset, args.labels)
    g, _ = ds.load()
    opt, witness = brute_force_opt(g)
    print(f"OPT = {opt}")
    for members in witness.clusters():
        print(" ".join(g.label_of(v) for v in members))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qecc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="write a generated instance as edge-list + labels")
    g.add_argument("--dataset", required=True,
                   help="S:n,k,alpha,beta[,seed] | LB:n,c,eps[,seed] | cliques:s1,s2,...")
    g.add_argument("--edges", required=True)
    g.add_argument("--labels", required=True)
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("import", help="convert a raw dataset to canonical files")
    i.add_argument("kind", choices=sorted(datasets.IMPORTERS))
    i.add_argument("raw")
    i.add_argument("--edges", required=True)
    i.add_argument("--labels")
    i.add_argument("--content", help="citeseer .content file with class labels")
    i.set_defaults(func=cmd_import)

    r = sub.add_parser("run", help="budget sweep, one CSV row per trial")
    r.add_argument("--dataset", required=True, help="generator spec or edge-list path")
    r.add_argument("--labels", help="ground-truth label file for an edge-list dataset")
    r.add_argument("--algo", action="append", choices=sorted(harness.ALGORITHMS))
    r.add_argument("--budgets", help="comma-separated Q values")
    r.add_argument("--auto-budgets", action="store_true")
    r.add_argument("--trials", type=int, default=50)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--charge-duplicates", action="store_true")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--with-truth", action="store_true", help="prepend a ground-truth row")
    r.add_argument("--summary", help="also write mean/std per (algorithm, Q)")
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run property-verification suites")
    v.add_argument("suite", nargs="+", choices=[*harness.SUITES, "all"])
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("opt", help="exact OPT of a small instance (n <= 12)")
    o.add_argument("--dataset", required=True)
    o.add_argument("--labels")
    o.set_defaults(func=cmd_opt)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
