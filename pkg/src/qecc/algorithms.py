"""Pivot-based correlation clustering under a query budget.

All four procedures see the graph only through a :class:`BudgetedOracle` and
draw every random choice from the ``rng`` they are given (a
``numpy.random.Generator``). Pivot clusters are labelled ``0, 1, ...`` in pivot
order; vertices left unclustered become singletons labelled afterwards in
ascending vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .graph import Clustering
from .oracle import BudgetedOracle


@dataclass
class RunResult:
    clustering: Clustering
    pivots: list[int]
    queries_used: int
    stopped_early: bool


class _Remaining:
    """The set R of unclustered vertices with O(1) uniform pick and removal."""

    def __init__(self, n: int):
        self.items = list(range(n))
        self.pos = list(range(n))

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return self.pos[v] >= 0

    def pick(self, rng) -> int:
        return self.items[int(rng.integers(len(self.items)))]

    def remove(self, v: int) -> None:
        i = self.pos[v]
        last = self.items.pop()
        if last != v:
            self.items[i] = last
            self.pos[last] = i
        self.pos[v] = -1

    def others(self, *exclude: int) -> list[int]:
        return sorted(w for w in self.items if w not in exclude)


def _finish(labels: np.ndarray, next_label: int, R: _Remaining) -> Clustering:
    for v in sorted(R.items):
        labels[v] = next_label
        next_label += 1
    return Clustering(labels)


def _pivot_loop(oracle: BudgetedOracle, n: int, rng, bounded: bool) -> RunResult:
    start = oracle.budget_used
    R = _Remaining(n)
    labels = np.full(n, -1, dtype=np.int64)
    pivots: list[int] = []
    while len(R):
        if bounded and oracle.remaining_budget() < len(R) - 1:
            break
        v = R.pick(rng)
        members = oracle.positive_among(v, R.others(v))
        label = len(pivots)
        pivots.append(v)
        for w in (v, *members):
            labels[w] = label
            R.remove(w)
    stopped = len(R) > 0
    return RunResult(_finish(labels, len(pivots), R), pivots,
                     oracle.budget_used - start, stopped)


def qwick_cluster(oracle: BudgetedOracle, n: int | None = None, rng=None) -> RunResult:
    """Run pivoting to completion; ``oracle`` must afford every pair."""
    n = oracle.n if n is None else n
    if oracle.remaining_budget() < comb(n, 2):
        raise ValueError(f"qwick_cluster needs budget >= C({n}, 2) = {comb(n, 2)}, "
                         f"have {oracle.remaining_budget()}")
    return _pivot_loop(oracle, n, np.random.default_rng(rng), bounded=False)


def qecc(oracle: BudgetedOracle, n: int | None = None, rng=None) -> RunResult:
    """Pivot while the remaining budget covers a full ``|R| - 1`` neighborhood scan.

    With budget >= C(n, 2) this consumes ``rng`` exactly like
    :func:`qwick_cluster` and returns the same clustering.
    """
    n = oracle.n if n is None else n
    return _pivot_loop(oracle, n, np.random.default_rng(rng), bounded=True)


def nonadaptive_sample_size(n: int, budget: int) -> int:
    """Largest ``t <= n`` with ``(2n - 1 - t) * t <= 2 * budget``."""
    lo, hi = 0, n
    while lo < hi:  # f(t) = (2n-1-t)t is nondecreasing on [0, n]
        mid = (lo + hi + 1) // 2
        if (2 * n - 1 - mid) * mid <= 2 * budget:
            lo = mid
        else:
            hi = mid - 1
    return lo


def qecc_nonadaptive(oracle: BudgetedOracle, n: int | None = None, rng=None) -> RunResult:
    """Query the neighborhoods of a random sample up front, then pivot on it.

    The sample is drawn without replacement. Sample member ``s_i`` is paired with
    every vertex except ``s_1..s_i``, in ascending vertex order, so the issued
    pairs depend only on ``(n, budget, rng)`` and total ``(2n - 1 - k) k / 2``.
    """
    n = oracle.n if n is None else n
    rng = np.random.default_rng(rng)
    start = oracle.budget_used
    k = nonadaptive_sample_size(n, oracle.remaining_budget())
    sample = rng.choice(n, size=k, replace=False).tolist() if k else []

    seen = np.zeros(n, dtype=bool)
    rows = []
    for s in sample:
        seen[s] = True
        rows.append(np.flatnonzero(~seen).tolist())
    # every pair is issued before any answer is looked at
    answers = [set(oracle.positive_among(s, row)) for s, row in zip(sample, rows)]

    R = _Remaining(n)
    labels = np.full(n, -1, dtype=np.int64)
    pivots: list[int] = []
    for s, nbrs in zip(sample, answers):
        if not len(R):
            break
        if s not in R:
            continue
        label = len(pivots)
        pivots.append(s)
        for w in [s, *nbrs]:
            if w in R:
                labels[w] = label
                R.remove(w)
    stopped = len(R) > 0
    return RunResult(_finish(labels, len(pivots), R), pivots,
                     oracle.budget_used - start, stopped)


def qecc_heur(oracle: BudgetedOracle, n: int | None = None, rng=None) -> RunResult:
    """Degree-biased pivoting: probe random ordered pairs of R until one is positive.

    The pivot is the second endpoint ``v`` of the first positive probe
    ``(u, v)``; within a round this picks vertex ``x`` with probability
    ``deg_R(x) / 2|E(R)|``. Probes with ``u == v`` issue no query.

    Under default charging, repeated probes are free, so the loop also stops
    once every pair inside R is known to be negative (R is then edgeless).
    """
    n = oracle.n if n is None else n
    rng = np.random.default_rng(rng)
    start = oracle.budget_used
    R = _Remaining(n)
    labels = np.full(n, -1, dtype=np.int64)
    pivots: list[int] = []
    free_repeats = not oracle.charge_duplicates
    neg_partners: dict[int, list[int]] = {}
    known_neg = 0  # probed negative pairs with both ends in R

    def drop(x):
        nonlocal known_neg
        R.remove(x)
        for y in neg_partners.pop(x, ()):
            if y in R:
                known_neg -= 1

    while len(R) > 1 and oracle.remaining_budget() >= len(R) - 1:
        if free_repeats and known_neg == comb(len(R), 2):
            break
        i, j = rng.integers(len(R), size=2).tolist()
        if i == j:
            continue
        u, v = R.items[i], R.items[j]
        fresh = not oracle.is_known(u, v)
        if oracle.query(u, v) < 0:
            if fresh:
                known_neg += 1
                neg_partners.setdefault(u, []).append(v)
                neg_partners.setdefault(v, []).append(u)
            continue
        members = oracle.positive_among(v, R.others(u, v))
        label = len(pivots)
        pivots.append(v)
        for w in (v, u, *members):
            labels[w] = label
            drop(w)
    stopped = len(R) > 1
    return RunResult(_finish(labels, len(pivots), R), pivots,
                     oracle.budget_used - start, stopped)


ALGORITHMS = {
    "qwick": qwick_cluster,
    "qecc": qecc,
    "qecc-nonadaptive": qecc_nonadaptive,
    "qecc-heur": qecc_heur,
}
