"""Temporally-directed similarity graph with top-K pruned incoming edges.

Edges point strictly from earlier to later artifacts; artifacts sharing a year
are never connected, so the graph is a DAG and antisymmetric by construction.
Each node keeps at most the K largest-weight incoming edges, weight ties broken
by the smaller source index so rebuilds are bit-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .similarity import SimilarityParams, kernel_block

# Destination rows are scored against their candidate set in slabs of this many
# rows to bound peak memory at roughly 256 * n * 8 bytes.
_DST_CHUNK = 256

TEMPORAL_PRIORS = ("none", "window")


@dataclass(frozen=True)
class GraphParams:
    """Graph construction knobs: pruning K, kernel bandwidth, temporal prior."""

    k: int
    sigma: float
    temporal_prior: str = "none"
    temporal_window_k: int = 500

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        SimilarityParams(self.sigma)
        if self.temporal_prior not in TEMPORAL_PRIORS:
            raise ValueError(f"temporal_prior must be one of {TEMPORAL_PRIORS}, got {self.temporal_prior!r}")
        if not (isinstance(self.temporal_window_k, int) and self.temporal_window_k >= 1):
            raise ValueError(f"temporal_window_k must be a positive integer, got {self.temporal_window_k!r}")


@dataclass(frozen=True)
class PaintingGraph:
    """Edge list (src -> dst, weight) in canonical (dst, src) order.

    Invariants: no self edges, every weight > 0, at most one edge per ordered
    pair. By-destination traversal is the contiguous canonical order; by-source
    traversal via argsort on `src`.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        src = np.ascontiguousarray(self.src, dtype=np.int64)
        dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        weight = np.ascontiguousarray(self.weight, dtype=np.float64)
        for name, arr in (("src", src), ("dst", dst), ("weight", weight)):
            if arr.ndim != 1 or arr.shape[0] != src.shape[0]:
                raise ValueError(f"{name} must be 1-D and equal-length")
            arr.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "weight", weight)
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        if src.size:
            if src.min() < 0 or src.max() >= self.n or dst.min() < 0 or dst.max() >= self.n:
                raise ValueError("edge endpoints out of range")
            if np.any(src == dst):
                raise ValueError("self edges are not allowed")
            if not (np.all(np.isfinite(weight)) and weight.min() > 0.0):
                raise ValueError("edge weights must be positive and finite")
            key = dst * np.int64(self.n) + src
            if np.any(np.diff(key) <= 0):
                raise ValueError("edges must be strictly sorted by (dst, src)")

    @property
    def n_edges(self) -> int:
        return int(self.src.size)


def _year_groups(years: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stable year-ascending order plus [start, end) bounds of each year group."""
    order = np.argsort(years, kind="stable")
    sorted_years = years[order]
    change = np.flatnonzero(np.diff(sorted_years)) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change, [years.size]))
    return order, starts, ends


def _window_candidates(order: np.ndarray, starts: np.ndarray, ends: np.ndarray,
                       group: int, budget: int) -> np.ndarray:
    """The `budget` latest strictly-prior artifacts of year-group `group`.

    Prior artifacts ranked by year descending; within a year, earlier manifest
    rows are admitted first. Stable year sort makes each group slice
    manifest-ascending, so a partial group contributes its slice prefix.
    """
    pieces = []
    for g in range(group - 1, -1, -1):
        size = int(ends[g] - starts[g])
        if budget >= size:
            pieces.append(order[starts[g]:ends[g]])
            budget -= size
            if budget == 0:
                break
        else:
            pieces.append(order[starts[g]:starts[g] + budget])
            break
    return np.concatenate(pieces[::-1]) if pieces else np.empty(0, dtype=np.int64)


def _select_top_k(weights: np.ndarray, sources: np.ndarray, k: int) -> np.ndarray:
    """Positions of the k largest weights; ties at the cut favor the smaller source index."""
    if weights.size <= k:
        return np.arange(weights.size)
    kth = np.partition(weights, weights.size - k)[weights.size - k]
    above = np.flatnonzero(weights > kth)
    need = k - above.size
    if need == 0:
        return above
    ties = np.flatnonzero(weights == kth)
    ties = ties[np.argsort(sources[ties])][:need]
    return np.concatenate((above, ties))


def build_graph(corpus: Corpus, aspect: str, params: GraphParams) -> PaintingGraph:
    """Connect every artifact to its strictly earlier candidates, keep top-K incoming.

    Candidate sources for artifact j are all artifacts dated strictly before j
    (optionally restricted to the `temporal_window_k` latest ones). The kernel
    weight is computed for every candidate and the K largest are kept; weights
    that underflow to zero are dropped.
    """
    if aspect not in corpus.features:
        raise ValueError(f"aspect '{aspect}' not found; corpus has {list(corpus.aspects)}")
    feats = corpus.features[aspect].vectors
    years = corpus.years
    n = corpus.n

    order, starts, ends = _year_groups(years)
    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    w_parts: list[np.ndarray] = []

    for g in range(starts.size):
        gs, ge = int(starts[g]), int(ends[g])
        if gs == 0:
            continue  # earliest year group: no prior candidates
        if params.temporal_prior == "window" and gs > params.temporal_window_k:
            cand = _window_candidates(order, starts, ends, g, params.temporal_window_k)
        else:
            cand = order[:gs]
        for cs in range(gs, ge, _DST_CHUNK):
            rows = order[cs:min(cs + _DST_CHUNK, ge)]
            block = kernel_block(feats[rows], feats[cand], params.sigma)
            for r, j in enumerate(rows):
                w = block[r]
                keep = w > 0.0
                wk = w[keep]
                ck = cand[keep]
                sel = _select_top_k(wk, ck, params.k)
                src_parts.append(ck[sel])
                dst_parts.append(np.full(sel.size, j, dtype=np.int64))
                w_parts.append(wk[sel])

    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
        weight = np.concatenate(w_parts)
        edge_order = np.lexsort((src, dst))
        src, dst, weight = src[edge_order], dst[edge_order], weight[edge_order]
    else:
        src = np.empty(0, dtype=np.int64)
        dst = np.empty(0, dtype=np.int64)
        weight = np.empty(0, dtype=np.float64)
    return PaintingGraph(n=n, src=src, dst=dst, weight=weight)


def write_graph_csv(graph: PaintingGraph, ids: Sequence[str], path: str | Path) -> None:
    """Edge dump `src_id,dst_id,weight` in canonical (dst, src) order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_id", "dst_id", "weight"])
        for s, d, w in zip(graph.src, graph.dst, graph.weight):
            writer.writerow([ids[s], ids[d], repr(float(w))])
