"""Complete +/- similarity graphs stored through their positive edges.

Only positive pairs are stored; every absent pair is a negative edge.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

log = logging.getLogger(__name__)


class ParseError(ValueError):
    """Malformed edge-list or label-file line."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class IngestStats:
    duplicates: int = 0
    self_loops: int = 0


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Positive graph in CSR form.

    ``indices[indptr[v]:indptr[v + 1]]`` is the sorted positive neighborhood of
    ``v``. Build through :meth:`from_edges` or :func:`build_from_edge_list`;
    the constructor trusts its input.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    tokens: tuple[str, ...] | None = None
    stats: IngestStats = IngestStats()
    _sets: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        object.__setattr__(self, "_sets", [None] * self.n)

    @classmethod
    def from_edges(cls, n: int, edges, tokens=None, stats: IngestStats | None = None) -> SimilarityGraph:
        """Symmetrize, drop self-loops and deduplicate ``edges`` (any orientation)."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError(f"edge endpoint out of range [0, {n})")
        loops = int(np.count_nonzero(e[:, 0] == e[:, 1]))
        e = e[e[:, 0] != e[:, 1]]
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        codes = np.unique(lo * n + hi)
        dups = len(e) - len(codes)
        lo, hi = codes // n, codes % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if stats is None:
            stats = IngestStats(duplicates=dups, self_loops=loops)
        if tokens is not None:
            tokens = tuple(tokens)
            if len(tokens) != n:
                raise ValueError("token map length must equal n")
        return cls(n, indptr, dst.astype(np.int64), tokens, stats)

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def neighbor_set(self, v: int) -> frozenset:
        s = self._sets[v]
        if s is None:
            s = frozenset(self.neighbors(v).tolist())
            self._sets[v] = s
        return s

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of positive edges with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    def sign(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError(f"no sign for self-pair ({u}, {v})")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range [0, {self.n}): ({u}, {v})")
        return 1 if v in self.neighbor_set(u) else -1

    def adjacency_matrix(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def label_of(self, v: int) -> str:
        return self.tokens[v] if self.tokens is not None else str(v)


def edge_sign(g: SimilarityGraph, u: int, v: int) -> int:
    return g.sign(u, v)


@dataclass(frozen=True, eq=False)
class Clustering:
    """Vertex -> cluster id labeling. Clusters are maximal equal-label sets."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if lab.size and lab.min() < 0:
            raise ValueError("cluster ids must be non-negative")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, Clustering):
            return NotImplemented
        return np.array_equal(self.canonical().labels, other.canonical().labels)

    def __hash__(self):
        return hash(self.canonical().labels.tobytes())

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]], n: int) -> Clustering:
        labels = np.full(n, -1, dtype=np.int64)
        for i, members in enumerate(clusters):
            for v in members:
                if labels[v] != -1:
                    raise ValueError(f"vertex {v} assigned twice")
                labels[v] = i
        if (labels < 0).any():
            raise ValueError("clusters do not cover all vertices")
        return cls(labels)

    @classmethod
    def singletons(cls, n: int) -> Clustering:
        return cls(np.arange(n))

    def canonical(self) -> Clustering:
        """Relabel clusters 0, 1, ... in order of first appearance."""
        _, first, inv = np.unique(self.labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first)] = np.arange(len(first))
        return Clustering(rank[inv])

    def sizes(self) -> np.ndarray:
        return np.unique(self.labels, return_counts=True)[1]

    @property
    def num_clusters(self) -> int:
        return len(np.unique(self.labels))

    @property
    def num_nonsingleton(self) -> int:
        return int(np.count_nonzero(self.sizes() > 1))

    def clusters(self) -> list[list[int]]:
        """Member lists, ordered by first member."""
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.labels.tolist()):
            out.setdefault(c, []).append(v)
        return list(out.values())


def positive_components(g: SimilarityGraph) -> Clustering:
    if g.n == 0:
        return Clustering(np.zeros(0, dtype=np.int64))
    _, labels = connected_components(g.adjacency_matrix(), directed=False)
    return Clustering(labels).canonical()


def _iter_pairs(lines: Iterable) -> Iterable[tuple[int, tuple[str, str] | None, str]]:
    for lineno, line in enumerate(lines, 1):
        if isinstance(line, str):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
        else:
            parts = list(line)
            s = repr(line)
        if len(parts) != 2:
            raise ParseError(lineno, s, f"expected 2 tokens, got {len(parts)}")
        yield lineno, (str(parts[0]), str(parts[1])), s


def build_from_edge_list(lines: Iterable, extra_tokens: Sequence[str] = ()) -> SimilarityGraph:
    """Build a graph from token pairs or raw ``"u v"`` text lines.

    Tokens get dense ids in first-seen order; ``extra_tokens`` (e.g. vertices
    that only appear in a label file) are appended after the edge tokens.
    """
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    for _, (a, b), _ in _iter_pairs(lines):
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        edges.append((u, v))
    for t in extra_tokens:
        ids.setdefault(t, len(ids))
    g = SimilarityGraph.from_edges(len(ids), edges, tokens=list(ids))
    if g.stats.duplicates or g.stats.self_loops:
        log.warning("edge list: dropped %d duplicate edge(s), %d self-loop(s)",
                    g.stats.duplicates, g.stats.self_loops)
    return g


def read_labels(path: str | Path) -> list[tuple[str, str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise ParseError(lineno, s, f"expected 'token cluster', got {len(parts)} fields")
            rows.append((parts[0], parts[1]))
    return rows


def load_graph(edge_path: str | Path, labels_path: str | Path | None = None
               ) -> tuple[SimilarityGraph, Clustering | None]:
    """Read an edge-list file and, optionally, its ground-truth label file.

    Vertices listed only in the label file become isolated vertices.
    """
    rows = read_labels(labels_path) if labels_path is not None else []
    with open(edge_path, encoding="utf-8") as fh:
        g = build_from_edge_list(fh, extra_tokens=[t for t, _ in rows])
    if labels_path is None:
        return g, None
    index = {t: i for i, t in enumerate(g.tokens)}
    cluster_ids: dict[str, int] = {}
    labels = np.full(g.n, -1, dtype=np.int64)
    for t, c in rows:
        labels[index[t]] = cluster_ids.setdefault(c, len(cluster_ids))
    missing = np.flatnonzero(labels < 0)
    if len(missing):
        raise ValueError(f"{len(missing)} vertices have no ground-truth label, "
                         f"e.g. {g.label_of(int(missing[0]))!r}")
    return g, Clustering(labels)


def write_graph(g: SimilarityGraph, edge_path: str | Path, truth: Clustering | None = None,
                labels_path: str | Path | None = None, header: str | None = None) -> None:
    with open(edge_path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for u, v in g.edges().tolist():
            fh.write(f"{g.label_of(u)} {g.label_of(v)}\n")
    if labels_path is not None:
        if truth is None:
            truth = Clustering.singletons(g.n)
        with open(labels_path, "w", encoding="utf-8") as fh:
            for v, c in enumerate(truth.labels.tolist()):
                fh.write(f"{g.label_of(v)} {c}\n")
