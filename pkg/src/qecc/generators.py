"""Seeded instance families.

Every generator is a pure function of its spec: the same spec (seed included)
gives a bit-identical graph. Randomness comes from ``numpy`` PCG64 streams;
per-pair coin flips are drawn in lexicographic pair order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np

from .graph import Clustering, SimilarityGraph


class ParameterError(ValueError):
    pass


def _block_labels(sizes) -> np.ndarray:
    return np.repeat(np.arange(len(sizes), dtype=np.int64), sizes)


def _clique_edges(labels: np.ndarray) -> np.ndarray:
    parts = []
    start = 0
    for size in np.bincount(labels).tolist():
        if size > 1:
            iu, ju = np.triu_indices(size, k=1)
            parts.append(np.stack([iu + start, ju + start], axis=1))
        start += size
    return np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)


def generate_cluster_graph(sizes) -> tuple[SimilarityGraph, Clustering]:
    """Disjoint cliques of the given sizes, vertices numbered block by block."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ParameterError("sizes must be non-empty")
    if any(s < 1 for s in sizes):
        raise ParameterError(f"clique sizes must be positive, got {sizes}")
    labels = _block_labels(sizes)
    return SimilarityGraph.from_edges(len(labels), _clique_edges(labels)), Clustering(labels)


@dataclass(frozen=True)
class SyntheticSpec:
    """Noisy planted clustering: one cluster of ``round(alpha n)`` vertices, the
    rest split as evenly as possible into ``k - 1`` clusters; within-cluster
    pairs turn negative w.p. ``beta``, cross pairs positive w.p. ``beta/(k-1)``."""

    n: int
    k: int
    alpha: float
    beta: float
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ParameterError(f"k must be >= 2, got {self.k}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 <= self.beta <= 1:
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if self.beta / (self.k - 1) > 1:
            raise ParameterError("beta / (k - 1) exceeds 1")
        big = round(self.alpha * self.n)
        if big < 1 or self.n - big < self.k - 1:
            raise ParameterError(
                f"cannot fit a cluster of round(alpha n) = {big} plus {self.k - 1} "
                f"non-empty clusters into n = {self.n}")

    def cluster_sizes(self) -> list[int]:
        big = round(self.alpha * self.n)
        q, r = divmod(self.n - big, self.k - 1)
        return [big] + [q + 1] * r + [q] * (self.k - 1 - r)


def generate_synthetic(spec: SyntheticSpec) -> tuple[SimilarityGraph, Clustering]:
    n = spec.n
    truth = _block_labels(spec.cluster_sizes())
    rng = np.random.default_rng(spec.seed)
    iu, ju = np.triu_indices(n, k=1)
    same = truth[iu] == truth[ju]
    flip = rng.random(len(iu)) < np.where(same, spec.beta, spec.beta / (spec.k - 1))
    positive = same ^ flip
    edges = np.stack([iu[positive], ju[positive]], axis=1)
    return SimilarityGraph.from_edges(n, edges), Clustering(truth)


def within_pair_count(sizes) -> int:
    return sum(comb(int(s), 2) for s in sizes)


@dataclass(frozen=True)
class LowerBoundSpec:
    """Hard-instance family: ``k`` equal cliques on A, each B-vertex attached to one
    uniformly chosen clique.

    ``alpha = 1/(4c)`` and ``k ~ 1/(32 c epsilon)``. The requested ``epsilon`` is
    snapped so that ``k`` divides both ``|A|`` and ``|B|``; the snapped value is
    ``effective_epsilon``.
    """

    n: int
    c: float = 1.0
    epsilon: float = 1 / 32
    seed: int = 0
    b_size: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        if self.c < 1:
            raise ParameterError(f"c must be >= 1, got {self.c}")
        if self.epsilon <= 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        b = round(self.n / (4 * self.c))
        a = self.n - b
        if b < 1 or a < 1:
            raise ParameterError(f"n = {self.n} too small for c = {self.c}")
        raw = 1 / (32 * self.c * self.epsilon)
        divisors = [d for d in range(1, gcd(a, b) + 1) if a % d == 0 and b % d == 0]
        k = min(divisors, key=lambda d: (abs(d - raw), d))
        object.__setattr__(self, "b_size", b)
        object.__setattr__(self, "k", k)

    @property
    def alpha(self) -> float:
        return 1 / (4 * self.c)

    @property
    def a_size(self) -> int:
        return self.n - self.b_size

    @property
    def effective_epsilon(self) -> float:
        return 1 / (32 * self.c * self.k)

    @property
    def T(self) -> float:
        return self.effective_epsilon * self.n ** 2

    @property
    def expected_natural_cost(self) -> float:
        return comb(self.b_size, 2) / self.k


def generate_lower_bound_instance(spec: LowerBoundSpec) -> tuple[SimilarityGraph, Clustering]:
    """Returns the graph and its natural clustering.

    Vertices ``0..|A|-1`` form A (clique ``i`` is the ``i``-th block of
    ``|A|/k``); the remaining ``|B|`` vertices form B.
    """
    a, b, k = spec.a_size, spec.b_size, spec.k
    per = a // k
    a_labels = np.repeat(np.arange(k, dtype=np.int64), per)
    rng = np.random.default_rng(spec.seed)
    choice = rng.integers(k, size=b)
    parts = [_clique_edges(a_labels)]
    for j, r in enumerate(choice.tolist()):
        members = np.arange(r * per, (r + 1) * per, dtype=np.int64)
        parts.append(np.stack([members, np.full(per, a + j, dtype=np.int64)], axis=1))
    g = SimilarityGraph.from_edges(spec.n, np.concatenate(parts))
    return g, Clustering(np.concatenate([a_labels, choice]))


def gnp(n: int, p: float, seed) -> SimilarityGraph:
    """Erdos-Renyi positive graph, pairs flipped in lexicographic order."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return SimilarityGraph.from_edges(n, np.stack([iu[keep], ju[keep]], axis=1))
