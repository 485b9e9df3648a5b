"""Budgeted access to edge signs.

Algorithms never touch a :class:`~qecc.graph.SimilarityGraph` directly; every
sign they see goes through a :class:`BudgetedOracle`, which refuses to answer
once the budget is spent.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable
from math import comb
from pathlib import Path

from .graph import SimilarityGraph


class BudgetExhausted(RuntimeError):
    pass


class BudgetedOracle:
    """Edge-sign oracle with a query budget, an answer cache and a transcript.

    By default only the first query of a distinct unordered pair is charged
    and repeats are served from the cache for free. With
    ``charge_duplicates=True`` every issued query costs one unit.

    The budget is checked before answering: a query that cannot be paid for
    raises :class:`BudgetExhausted` and reveals nothing.
    """

    def __init__(self, graph: SimilarityGraph, budget: int, charge_duplicates: bool = False,
                 record: bool = True):
        if budget < 0:
            raise ValueError("budget must be non-negative")
        self._g = graph
        self.n = graph.n
        self.budget_total = int(budget)
        self.budget_used = 0
        self.charge_duplicates = charge_duplicates
        self.record = record
        self._cache: dict[int, bool] = {}
        self.transcript: list[tuple[int, int, int, bool]] = []

    @classmethod
    def unlimited(cls, graph: SimilarityGraph, **kw) -> BudgetedOracle:
        """Oracle whose budget covers every pair of ``graph``."""
        return cls(graph, comb(graph.n, 2), **kw)

    def remaining_budget(self) -> int:
        return self.budget_total - self.budget_used

    @property
    def distinct_pairs(self) -> int:
        return len(self._cache)

    def _key(self, u: int, v: int) -> tuple[int, int, int]:
        if u == v:
            raise ValueError(f"cannot query self-pair ({u}, {v})")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range [0, {self.n}): ({u}, {v})")
        if u > v:
            u, v = v, u
        return u, v, u * self.n + v

    def is_known(self, u: int, v: int) -> bool:
        return self._key(u, v)[2] in self._cache

    def query(self, u: int, v: int) -> int:
        """Sign of ``{u, v}``: +1 for similar, -1 for dissimilar."""
        a, b, key = self._key(u, v)
        hit = self._cache.get(key)
        charged = hit is None or self.charge_duplicates
        if charged:
            if self.budget_used >= self.budget_total:
                raise BudgetExhausted(
                    f"budget {self.budget_total} spent; cannot query ({a}, {b})")
            self.budget_used += 1
        if hit is None:
            hit = b in self._g.neighbor_set(a)
            self._cache[key] = hit
        s = 1 if hit else -1
        if self.record:
            self.transcript.append((a, b, s, charged))
        return s

    def positive_among(self, v: int, others: Iterable[int]) -> list[int]:
        """Query ``(v, w)`` for each ``w`` in order; return the positive ``w``.

        All-or-nothing: if the whole batch cannot be paid for, raises before
        answering any of it.
        """
        others = list(others)
        n, cache = self.n, self._cache
        if not (0 <= v < n):
            raise ValueError(f"vertex out of range [0, {n}): {v}")
        keys = []
        for w in others:
            if w == v:
                raise ValueError(f"cannot query self-pair ({v}, {w})")
            if not (0 <= w < n):
                raise ValueError(f"vertex out of range [0, {n}): {w}")
            keys.append(v * n + w if v < w else w * n + v)
        if self.charge_duplicates:
            cost = len(keys)
        else:
            cost = sum(1 for k in keys if k not in cache)
        if cost > self.remaining_budget():
            raise BudgetExhausted(
                f"batch of {cost} charged queries exceeds remaining budget "
                f"{self.remaining_budget()}")
        self.budget_used += cost
        nbrs = self._g.neighbor_set(v)
        out = []
        rec = self.transcript if self.record else None
        dup = self.charge_duplicates
        for w, k in zip(others, keys):
            hit = cache.get(k)
            charged = dup or hit is None
            if hit is None:
                hit = w in nbrs
                cache[k] = hit
            if hit:
                out.append(w)
            if rec is not None:
                rec.append((min(v, w), max(v, w), 1 if hit else -1, charged))
        return out

    def query_pairs_list(self) -> list[tuple[int, int]]:
        """Issued pairs in order, each normalized to ``(min, max)``."""
        return [(u, v) for u, v, _, _ in self.transcript]

    def write_transcript(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "u", "v", "sign", "charged"])
            for step, (u, v, s, charged) in enumerate(self.transcript):
                w.writerow([step, u, v, s, int(charged)])
