"""Disagreement cost, pairwise precision/recall, and exact OPT for tiny graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Clustering, SimilarityGraph

BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class QualityReport:
    cost: int
    precision: float
    recall: float
    num_clusters: int
    num_nonsingleton_clusters: int
    pairs_together: int
    positive_together: int
    m: int


def _labels(g: SimilarityGraph, c: Clustering) -> np.ndarray:
    if len(c) != g.n:
        raise ValueError(f"clustering covers {len(c)} vertices, graph has {g.n}")
    return c.labels


def _pair_counts(g: SimilarityGraph, c: Clustering) -> tuple[int, int]:
    """(pairs clustered together, positive edges clustered together)."""
    lab = _labels(g, c)
    sizes = np.unique(lab, return_counts=True)[1].astype(np.int64)
    together = int((sizes * (sizes - 1) // 2).sum())
    e = g.edges()
    inside = int(np.count_nonzero(lab[e[:, 0]] == lab[e[:, 1]])) if len(e) else 0
    return together, inside


def cost(g: SimilarityGraph, c: Clustering) -> int:
    """Negative pairs inside clusters plus positive pairs across clusters."""
    together, inside = _pair_counts(g, c)
    return (together - inside) + (g.m - inside)


def precision_recall(g: SimilarityGraph, c: Clustering) -> tuple[float, float]:
    """Precision is 1.0 when no pair is clustered together; recall is 1.0 when m = 0."""
    together, inside = _pair_counts(g, c)
    precision = inside / together if together else 1.0
    recall = inside / g.m if g.m else 1.0
    return precision, recall


def evaluate(g: SimilarityGraph, c: Clustering) -> QualityReport:
    together, inside = _pair_counts(g, c)
    sizes = c.sizes()
    return QualityReport(
        cost=(together - inside) + (g.m - inside),
        precision=inside / together if together else 1.0,
        recall=inside / g.m if g.m else 1.0,
        num_clusters=len(sizes),
        num_nonsingleton_clusters=int(np.count_nonzero(sizes > 1)),
        pairs_together=together,
        positive_together=inside,
        m=g.m,
    )


def naive_cost(g: SimilarityGraph, c: Clustering) -> int:
    """All-pairs O(n^2) disagreement count."""
    lab = _labels(g, c).tolist()
    total = 0
    for u in range(g.n):
        nb = g.neighbor_set(u)
        for v in range(u + 1, g.n):
            if (lab[u] == lab[v]) != (v in nb):
                total += 1
    return total


def brute_force_opt(g: SimilarityGraph, limit: int = BRUTE_FORCE_LIMIT) -> tuple[int, Clustering]:
    """Exact minimum cost over all set partitions, by depth-first search.

    Partitions are visited as restricted-growth strings in lexicographic order
    and the first minimizer found is returned. Branches whose partial cost
    already reaches the best complete cost are cut.
    """
    n = g.n
    if n > limit:
        raise ValueError(f"brute_force_opt limited to n <= {limit}, got n = {n}")
    if n == 0:
        return 0, Clustering(np.zeros(0, dtype=np.int64))
    pos = [[v in g.neighbor_set(u) for v in range(n)] for u in range(n)]
    # positive edges from i back to vertices < i
    back = [sum(pos[i][:i]) for i in range(n)]
    rgs = [0] * n
    blocks: list[list[int]] = [[0]]
    best = [g.m + n * n, None]

    def place(i: int, partial: int) -> None:
        if partial >= best[0]:
            return
        if i == n:
            best[0], best[1] = partial, rgs.copy()
            return
        row = pos[i]
        for b, members in enumerate(blocks):
            pos_in = sum(row[w] for w in members)
            step = (len(members) - pos_in) + (back[i] - pos_in)
            rgs[i] = b
            members.append(i)
            place(i + 1, partial + step)
            members.pop()
        rgs[i] = len(blocks)
        blocks.append([i])
        place(i + 1, partial + back[i])
        blocks.pop()

    place(1, 0)
    return best[0], Clustering(np.array(best[1], dtype=np.int64))
