"""Adapters that turn raw public datasets into canonical edge-list + label files.

The core only reads the canonical files (see :func:`qecc.graph.load_graph`).
Accepted raw inputs:

``cora``
    One record per line: ``id<TAB>cluster<TAB>text``. Records are joined when
    the Jaro similarity of their texts is at least ``threshold`` (0.5).
``citeseer``
    A ``.cites`` file (two ids per line, either direction) and optionally a
    ``.content`` file whose first field is the id and last field the class.
``mushrooms``
    UCI ``agaricus-lepiota.data``: comma-separated, class first. The class is
    dropped and two rows are joined when they differ on at most ``f // 2`` of
    the remaining ``f`` features.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)


def _write_edges(path, tokens, pairs) -> int:
    m = 0
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in pairs:
            fh.write(f"{tokens[u]} {tokens[v]}\n")
            m += 1
    return m


def _write_labels(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tok, cl in rows:
            fh.write(f"{tok} {cl}\n")


def _token(s: str) -> str:
    return "_".join(s.split())


def import_cora(raw: str | Path, edges_out: str | Path, labels_out: str | Path,
                threshold: float = 0.5) -> int:
    import jellyfish

    ids, clusters, texts = [], [], []
    with open(raw, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t", 2)
            if len(parts) != 3:
                raise ValueError(f"{raw}:{lineno}: expected id<TAB>cluster<TAB>text")
            ids.append(_token(parts[0]))
            clusters.append(_token(parts[1]))
            texts.append(parts[2])
    jaro = jellyfish.jaro_similarity

    def pairs():
        for i in range(len(texts)):
            ti = texts[i]
            for j in range(i + 1, len(texts)):
                if jaro(ti, texts[j]) >= threshold:
                    yield i, j

    m = _write_edges(edges_out, ids, pairs())
    _write_labels(labels_out, zip(ids, clusters))
    return m


def import_citeseer(cites: str | Path, edges_out: str | Path, labels_out: str | Path | None = None,
                    content: str | Path | None = None) -> int:
    rows = []
    if content is not None:
        with open(content, encoding="utf-8") as fh:
            for line in fh:
                f = line.split()
                if f:
                    rows.append((_token(f[0]), _token(f[-1])))
    seen = set()
    with open(cites, encoding="utf-8") as fh, open(edges_out, "w", encoding="utf-8") as out:
        m = 0
        for line in fh:
            f = line.split()
            if len(f) != 2 or f[0] == f[1]:
                continue
            a, b = sorted((_token(f[0]), _token(f[1])))
            if (a, b) in seen:
                continue
            seen.add((a, b))
            out.write(f"{a} {b}\n")
            m += 1
    if labels_out is not None:
        if not rows:
            toks = sorted({t for e in seen for t in e})
            rows = [(t, t) for t in toks]
        _write_labels(labels_out, rows)
    return m


def import_mushrooms(raw: str | Path, edges_out: str | Path, labels_out: str | Path,
                     chunk: int = 512) -> int:
    records = [ln.strip().split(",") for ln in Path(raw).read_text().splitlines() if ln.strip()]
    classes = [r[0] for r in records]
    feats = np.array([r[1:] for r in records])
    n, f = feats.shape
    codes = np.empty((n, f), dtype=np.int16)
    for j in range(f):
        _, codes[:, j] = np.unique(feats[:, j], return_inverse=True)
    limit = f // 2
    tokens = [f"m{i}" for i in range(n)]
    m = 0
    with open(edges_out, "w", encoding="utf-8") as out:
        for start in range(0, n, chunk):
            block = codes[start:start + chunk]
            diff = (block[:, None, :] != codes[None, :, :]).sum(axis=2)
            rows, cols = np.nonzero(diff <= limit)
            rows = rows + start
            keep = rows < cols
            for u, v in zip(rows[keep].tolist(), cols[keep].tolist()):
                out.write(f"{tokens[u]} {tokens[v]}\n")
                m += 1
    _write_labels(labels_out, zip(tokens, classes))
    log.info("mushrooms: n=%d, features=%d, threshold=%d, m=%d", n, f, limit, m)
    return m


IMPORTERS = {"cora": import_cora, "citeseer": import_citeseer, "mushrooms": import_mushrooms}
