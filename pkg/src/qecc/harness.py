"""Seeded experiment sweeps, CSV output and property-verification suites."""

from __future__ import annotations

import csv
import io
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from math import comb, sqrt
from pathlib import Path

import numpy as np

from . import generators as gen
from .algorithms import ALGORITHMS, nonadaptive_sample_size, qecc, qecc_nonadaptive, qwick_cluster
from .graph import Clustering, SimilarityGraph, load_graph
from .metrics import brute_force_opt, cost, evaluate
from .oracle import BudgetedOracle

SCHEMA = "qecc-trials/1"
MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, algorithm: str, budget: int, trial: int) -> int:
    """64-bit seed from chained SplitMix64 over (base, crc32(algorithm), Q, trial)."""
    h = splitmix64(base_seed & MASK64)
    for part in (zlib.crc32(algorithm.encode()), budget, trial):
        h = splitmix64(h ^ (part & MASK64))
    return h


# --- datasets ---------------------------------------------------------------

@dataclass(frozen=True)
class Dataset:
    """Where an instance comes from. Exactly one source field is set."""

    path: str | None = None
    labels: str | None = None
    synthetic: gen.SyntheticSpec | None = None
    lower_bound: gen.LowerBoundSpec | None = None
    sizes: tuple[int, ...] | None = None

    def load(self) -> tuple[SimilarityGraph, Clustering | None]:
        if self.path is not None:
            return load_graph(self.path, self.labels)
        if self.synthetic is not None:
            return gen.generate_synthetic(self.synthetic)
        if self.lower_bound is not None:
            return gen.generate_lower_bound_instance(self.lower_bound)
        if self.sizes is not None:
            return gen.generate_cluster_graph(self.sizes)
        raise ValueError("dataset has no source")

    @property
    def id(self) -> str:
        if self.path is not None:
            return Path(self.path).stem
        if self.synthetic is not None:
            s = self.synthetic
            return f"S({s.n},{s.k},{s.alpha:g},{s.beta:g})#{s.seed}"
        if self.lower_bound is not None:
            s = self.lower_bound
            return f"LB({s.n},{s.c:g},{s.effective_epsilon:g})#{s.seed}"
        return "cliques(" + ",".join(map(str, self.sizes)) + ")"


def parse_dataset(text: str, labels: str | None = None) -> Dataset:
    """``S:n,k,alpha,beta[,seed]``, ``LB:n,c,eps[,seed]``, ``cliques:3,3,4`` or a file path."""
    kind, _, rest = text.partition(":")
    args = [a for a in rest.split(",") if a]
    if kind == "S":
        n, k, a, b, *seed = args
        return Dataset(synthetic=gen.SyntheticSpec(int(n), int(k), float(a), float(b),
                                                   int(seed[0]) if seed else 0))
    if kind == "LB":
        n, c, eps, *seed = args
        return Dataset(lower_bound=gen.LowerBoundSpec(int(n), float(c), float(eps),
                                                      int(seed[0]) if seed else 0))
    if kind == "cliques":
        return Dataset(sizes=tuple(int(s) for s in args))
    return Dataset(path=text, labels=labels)


# --- sweeps -----------------------------------------------------------------

@dataclass
class ExperimentConfig:
    dataset: Dataset
    algorithms: tuple[str, ...] = ("qecc", "qecc-heur")
    budgets: tuple[int, ...] | str = "auto"
    trials: int = 50
    base_seed: int = 0
    charge_duplicates: bool = False
    auto_points: int = 8
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithm(s): {sorted(unknown)}")
        if not self.algorithms:
            raise ValueError("no algorithms selected")
        if self.budgets != "auto":
            self.budgets = tuple(int(q) for q in self.budgets)
            if not self.budgets or min(self.budgets) < 0:
                raise ValueError("budgets must be a non-empty list of non-negative ints")


@dataclass(frozen=True)
class TrialRecord:
    dataset: str
    algorithm: str
    Q: int
    trial: int
    seed: int
    cost: int
    precision: float
    recall: float
    num_clusters: int
    num_nonsingleton_clusters: int
    queries_used: int
    stopped_early: bool


def resolve_auto_budgets(g: SimilarityGraph, trials: int = 50, base_seed: int = 0,
                         points: int = 8) -> list[int]:
    """Evenly spaced grid from ``min(2n, A)`` to ``A``, A = mean QwickCluster queries."""
    used = []
    for t in range(trials):
        oracle = BudgetedOracle.unlimited(g, record=False)
        used.append(qwick_cluster(oracle, rng=trial_seed(base_seed, "auto", 0, t)).queries_used)
    top = float(np.mean(used))
    low = min(2 * g.n, top)
    return sorted({int(round(q)) for q in np.linspace(low, top, points)})


def run_trial(g: SimilarityGraph, truth_id: str, algorithm: str, budget: int, trial: int,
              base_seed: int, charge_duplicates: bool = False) -> TrialRecord:
    seed = trial_seed(base_seed, algorithm, budget, trial)
    oracle = BudgetedOracle(g, budget, charge_duplicates=charge_duplicates, record=False)
    res = ALGORITHMS[algorithm](oracle, g.n, np.random.default_rng(seed))
    q = evaluate(g, res.clustering)
    return TrialRecord(truth_id, algorithm, budget, trial, seed, q.cost, q.precision, q.recall,
                       q.num_clusters, q.num_nonsingleton_clusters, res.queries_used,
                       res.stopped_early)


def _trial_grid(cfg: ExperimentConfig, g: SimilarityGraph) -> list[tuple[str, int, int]]:
    budgets = cfg.budgets
    if budgets == "auto":
        budgets = resolve_auto_budgets(g, cfg.trials, cfg.base_seed, cfg.auto_points)
    grid = []
    for algo in cfg.algorithms:
        # QwickCluster ignores the sweep; it always gets every pair
        qs = [comb(g.n, 2)] if algo == "qwick" else budgets
        grid += [(algo, q, t) for q in qs for t in range(cfg.trials)]
    return grid


def _run_chunk(args):
    g, did, chunk, base_seed, dup = args
    return [run_trial(g, did, a, q, t, base_seed, dup) for a, q, t in chunk]


def run_experiment(cfg: ExperimentConfig, graph: SimilarityGraph | None = None) -> list[TrialRecord]:
    """One record per (algorithm, Q, trial), sorted by algorithm order, Q, trial."""
    g = graph if graph is not None else cfg.dataset.load()[0]
    did = cfg.dataset.id
    grid = _trial_grid(cfg, g)
    if cfg.workers > 1 and len(grid) > 1:
        chunks = [grid[i::cfg.workers] for i in range(cfg.workers)]
        with ProcessPoolExecutor(cfg.workers) as ex:
            out = [r for part in ex.map(_run_chunk, [(g, did, c, cfg.base_seed,
                                                      cfg.charge_duplicates) for c in chunks])
                   for r in part]
    else:
        out = _run_chunk((g, did, grid, cfg.base_seed, cfg.charge_duplicates))
    order = {a: i for i, a in enumerate(cfg.algorithms)}
    return sorted(out, key=lambda r: (order[r.algorithm], r.Q, r.trial))


def ground_truth_record(g: SimilarityGraph, truth: Clustering, dataset_id: str) -> TrialRecord:
    q = evaluate(g, truth)
    return TrialRecord(dataset_id, "ground-truth", 0, 0, 0, q.cost, q.precision, q.recall,
                       q.num_clusters, q.num_nonsingleton_clusters, 0, False)


RECORD_FIELDS = [f.name for f in fields(TrialRecord)]


def _fmt(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def records_to_csv(records, out=None) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow([_fmt(v) for v in asdict(r).values()])
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def read_records(text: str) -> list[TrialRecord]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    types = {f.name: f.type for f in fields(TrialRecord)}
    out = []
    for row in rows:
        kw = {}
        for k, v in row.items():
            t = types[k]
            kw[k] = (v if t == "str" else float(v) if t == "float"
                     else bool(int(v)) if t == "bool" else int(v))
        out.append(TrialRecord(**kw))
    return out


@dataclass(frozen=True)
class Summary:
    dataset: str
    algorithm: str
    Q: int
    trials: int
    cost_mean: float
    cost_std: float
    precision_mean: float
    precision_std: float
    recall_mean: float
    recall_std: float
    queries_mean: float


def aggregate(records) -> list[Summary]:
    """Mean and sample std (ddof=1; 0 for a single trial) per (dataset, algorithm, Q)."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.algorithm, r.Q), []).append(r)

    def ms(xs):
        a = np.asarray(xs, dtype=float)
        return float(a.mean()), float(a.std(ddof=1)) if len(a) > 1 else 0.0

    out = []
    for (d, a, q), rs in groups.items():
        c, p, rc = (ms([getattr(r, k) for r in rs]) for k in ("cost", "precision", "recall"))
        out.append(Summary(d, a, q, len(rs), *c, *p, *rc,
                           float(np.mean([r.queries_used for r in rs]))))
    return out


def summary_to_csv(summaries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(Summary)])
    for s in summaries:
        w.writerow([_fmt(v) for v in asdict(s).values()])
    return buf.getvalue()


# --- verification suites ----------------------------------------------------

@dataclass
class Check:
    name: str
    lhs: float
    rhs: float
    passed: bool

    @property
    def slack(self) -> float:
        return float(self.rhs - self.lhs)


@dataclass
class VerifyReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def min_slack(self) -> float:
        return min(c.slack for c in self.checks) if self.checks else float("inf")

    def lines(self) -> list[str]:
        out = [f"[{'PASS' if c.passed else 'FAIL'}] {self.suite}: {c.name}: "
               f"{c.lhs:.6g} <= {c.rhs:.6g} (slack {c.slack:.6g})" for c in self.checks]
        out.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} "
                   f"({len(self.checks)} checks, min slack {self.min_slack:.6g})")
        return out


def closed_neighborhood_removal(g: SimilarityGraph) -> list[int]:
    """For each pivot p: number of edges with an endpoint in {p} u N(p)."""
    edges = g.edges()
    out = []
    for p in range(g.n):
        ball = np.zeros(g.n, dtype=bool)
        ball[p] = True
        ball[g.neighbors(p)] = True
        out.append(int(np.count_nonzero(ball[edges[:, 0]] | ball[edges[:, 1]])) if len(edges) else 0)
    return out


def lemma1_margin(g: SimilarityGraph) -> tuple[Fraction, Fraction]:
    """Exact (average removed edges over all pivots, C(avg_degree + 1, 2))."""
    avg_removed = Fraction(sum(closed_neighborhood_removal(g)), g.n)
    d = Fraction(2 * g.m, g.n)
    return avg_removed, d * (d + 1) / 2


def uncovered_edges(g: SimilarityGraph, pivots) -> int:
    """Positive edges with no endpoint in P u N(P)."""
    covered = np.zeros(g.n, dtype=bool)
    for p in pivots:
        covered[p] = True
        covered[g.neighbors(p)] = True
    e = g.edges()
    return int(np.count_nonzero(~covered[e[:, 0]] & ~covered[e[:, 1]])) if len(e) else 0


def _stderr(xs) -> float:
    a = np.asarray(xs, dtype=float)
    return float(a.std(ddof=1) / sqrt(len(a))) if len(a) > 1 else 0.0


def suite_lemma1(graphs: int = 100, n: int = 40, ps=(0.05, 0.2, 0.5), seed: int = 0) -> VerifyReport:
    rep = VerifyReport("lemma1")
    for i in range(graphs):
        p = ps[i % len(ps)]
        g = gen.gnp(n, p, [seed, i])
        removed, bound = lemma1_margin(g)
        rep.checks.append(Check(f"G({n},{p}) #{i}", float(bound), float(removed), removed >= bound))
    return rep


def suite_lemma2(n: int = 100, p: float = 0.1, rs=(1, 5, 10, 20), trials: int = 1000,
                 seed: int = 0) -> VerifyReport:
    """Each trial draws a fresh G(n, p) and a fresh QwickCluster run."""
    rep = VerifyReport("lemma2")
    counts = {r: [] for r in rs}
    for t in range(trials):
        g = gen.gnp(n, p, [seed, 1, t])
        res = qwick_cluster(BudgetedOracle.unlimited(g, record=False), rng=[seed, 2, t])
        for r in rs:
            counts[r].append(uncovered_edges(g, res.pivots[:r]))
    for r in rs:
        mean = float(np.mean(counts[r]))
        bound = n * n / (2 * (r + 1)) + 3 * _stderr(counts[r])
        rep.checks.append(Check(f"r={r}", mean, bound, mean < bound))
    return rep


def suite_thm1_bound(n: int = 50, k: int = 5, alpha: float = 0.3, beta: float = 0.1,
                     budgets=(100, 250, 500, 1225), trials: int = 500, seed: int = 0,
                     algorithm: str = "qecc") -> VerifyReport:
    """Mean cost <= 3 cost(ground truth) + n^3/(2Q) + 3 stderr (OPT <= cost(truth))."""
    rep = VerifyReport("thm1-bound")
    g, truth = gen.generate_synthetic(gen.SyntheticSpec(n, k, alpha, beta, seed))
    gt = cost(g, truth)
    algo = ALGORITHMS[algorithm]
    for q in budgets:
        costs = [cost(g, algo(BudgetedOracle(g, q, record=False), n, [seed, q, t]).clustering)
                 for t in range(trials)]
        mean = float(np.mean(costs))
        bound = 3 * gt + n ** 3 / (2 * q) + 3 * _stderr(costs)
        rep.checks.append(Check(f"Q={q}", mean, bound, mean <= bound))
    return rep


def suite_thm2_nonadaptive(n: int = 60, budgets=(0, 59, 200, 900, 1770), seed: int = 0) -> VerifyReport:
    """Same (n, Q, seed) on two unrelated graphs must issue identical query sequences."""
    rep = VerifyReport("thm2-nonadaptive")
    g1 = gen.gnp(n, 0.1, [seed, 1])
    g2, _ = gen.generate_synthetic(gen.SyntheticSpec(n, 4, 0.4, 0.2, seed + 1))
    for q in budgets:
        o1, o2 = BudgetedOracle(g1, q), BudgetedOracle(g2, q)
        qecc_nonadaptive(o1, n, [seed, q])
        qecc_nonadaptive(o2, n, [seed, q])
        k = nonadaptive_sample_size(n, q)
        expected = (2 * n - 1 - k) * k // 2
        same = o1.query_pairs_list() == o2.query_pairs_list()
        rep.checks.append(Check(f"Q={q} identical transcripts", 0, 0, same))
        rep.checks.append(Check(f"Q={q} queries == (2n-1-k)k/2 = {expected}",
                                o1.budget_used, expected,
                                o1.budget_used == expected == len(o1.transcript)))
    return rep


def suite_approx3(instances: int = 20, n: int = 8, trials: int = 2000, seed: int = 0,
                  ps=(0.3, 0.5, 0.7)) -> VerifyReport:
    """Full-budget QECC: mean cost <= 3 OPT + 3 stderr, OPT by exhaustive search."""
    rep = VerifyReport("approx3")
    full = comb(n, 2)
    for i in range(instances):
        p = ps[i % len(ps)]
        g = gen.gnp(n, p, [seed, 3, i])
        opt, _ = brute_force_opt(g)
        costs = [cost(g, qecc(BudgetedOracle(g, full, record=False), n, [seed, 4, i, t]).clustering)
                 for t in range(trials)]
        mean = float(np.mean(costs))
        bound = 3 * opt + 3 * _stderr(costs)
        rep.checks.append(Check(f"G({n},{p}) #{i} OPT={opt}", mean, bound, mean <= bound))
    return rep


SUITES = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "thm1-bound": suite_thm1_bound,
    "thm2-nonadaptive": suite_thm2_nonadaptive,
    "approx3": suite_approx3,
}


def verify_suite(name: str, **params) -> VerifyReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**params)
