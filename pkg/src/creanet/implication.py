"""Balancing transform: similarity graph -> Creativity Implication Network.

Each similarity edge is judged against a per-node threshold m: the balanced
value b = w - m decides whether the edge survives as-is (b > 0), disappears
(b = 0), or reverses with weight -b (b < 0). Surviving edges carry a temporal
label: `prior` when the edge points back in time, `subsequent` when it points
forward. Edge direction in the result encodes score flow, not time.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import PaintingGraph

BALANCING_MODES = ("global", "local")
BALANCE_ANCHORS = ("destination", "source")

LABEL_PRIOR = "prior"
LABEL_SUBSEQUENT = "subsequent"


@dataclass(frozen=True)
class BalanceSpec:
    """Threshold policy: which percentile, computed globally or local-in-time."""

    mode: str = "global"
    percentile_p: float = 50.0
    local_window_years: int = 50
    min_local_sample: int = 20

    def __post_init__(self):
        if self.mode not in BALANCING_MODES:
            raise ValueError(f"mode must be one of {BALANCING_MODES}, got {self.mode!r}")
        if not 0.0 < self.percentile_p <= 100.0:
            raise ValueError(f"percentile_p must be in (0, 100], got {self.percentile_p!r}")
        if not (isinstance(self.local_window_years, int) and self.local_window_years >= 1):
            raise ValueError(f"local_window_years must be a positive integer, got {self.local_window_years!r}")
        if not (isinstance(self.min_local_sample, int) and self.min_local_sample >= 1):
            raise ValueError(f"min_local_sample must be a positive integer, got {self.min_local_sample!r}")


@dataclass(frozen=True)
class ImplicationNetwork:
    """Non-negative digraph after balancing, edges in canonical (dst, src) order.

    `prior[e]` is True iff edge e points from a later to an earlier artifact.
    kept/reversed/dropped counts partition the originating graph's edges.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    prior: np.ndarray
    kept_count: int
    reversed_count: int
    dropped_count: int

    def __post_init__(self):
        src = np.ascontiguousarray(self.src, dtype=np.int64)
        dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        weight = np.ascontiguousarray(self.weight, dtype=np.float64)
        prior = np.ascontiguousarray(self.prior, dtype=bool)
        for name, arr in (("src", src), ("dst", dst), ("weight", weight), ("prior", prior)):
            if arr.ndim != 1 or arr.shape[0] != src.shape[0]:
                raise ValueError(f"{name} must be 1-D and equal-length")
            arr.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "prior", prior)
        if src.size:
            if np.any(src == dst):
                raise ValueError("self edges are not allowed")
            if not (np.all(np.isfinite(weight)) and weight.min() > 0.0):
                raise ValueError("edge weights must be positive and finite")
            key = dst * np.int64(self.n) + src
            if np.any(np.diff(key) <= 0):
                raise ValueError("edges must be strictly sorted by (dst, src)")
        if self.kept_count + self.reversed_count != src.size:
            raise ValueError("kept + reversed must equal the emitted edge count")

    @property
    def n_edges(self) -> int:
        return int(self.src.size)


def nearest_rank_percentile(values: np.ndarray, p: float) -> float:
    """Nearest-rank percentile (no interpolation): the ceil(p/100 * n)-th smallest."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("percentile of an empty sample")
    if not 0.0 < p <= 100.0:
        raise ValueError(f"percentile must be in (0, 100], got {p!r}")
    rank = math.ceil(p / 100.0 * values.size)
    return float(np.sort(values, kind="stable")[rank - 1])


def compute_thresholds(graph: PaintingGraph, years: np.ndarray, spec: BalanceSpec) -> np.ndarray:
    """Per-node balancing threshold m(i).

    Global mode gives every node the same percentile of all edge weights. Local
    mode restricts the sample to edges whose both endpoints lie within
    ±local_window_years of the node's year, falling back to the global value
    when fewer than min_local_sample edges qualify.
    """
    if graph.n_edges == 0:
        raise ValueError("graph has no edges; balancing threshold is undefined")
    years = np.asarray(years, dtype=np.int64)
    if years.shape != (graph.n,):
        raise ValueError(f"expected {graph.n} years, got shape {years.shape}")
    global_m = nearest_rank_percentile(graph.weight, spec.percentile_p)
    if spec.mode == "global":
        return np.full(graph.n, global_m, dtype=np.float64)

    # Local mode: an edge is in-window for year y iff both endpoint years are
    # within ±w, i.e. max(endpoint years) - w <= y <= min(endpoint years) + w.
    w = spec.local_window_years
    ys, yd = years[graph.src], years[graph.dst]
    lo = np.maximum(ys, yd) - w
    hi = np.minimum(ys, yd) + w
    m = np.empty(graph.n, dtype=np.float64)
    cache: dict[int, float] = {}
    for i in range(graph.n):
        y = int(years[i])
        if y not in cache:
            mask = (lo <= y) & (y <= hi)
            if int(mask.sum()) < spec.min_local_sample:
                cache[y] = global_m
            else:
                cache[y] = nearest_rank_percentile(graph.weight[mask], spec.percentile_p)
        m[i] = cache[y]
    return m


def build_implication_network(graph: PaintingGraph, m: np.ndarray, years: np.ndarray,
                              anchor: str = "destination") -> ImplicationNetwork:
    """Apply b = w - m(anchor node) to every edge; keep, drop, or reverse.

    The anchor picks whose threshold judges edge (i -> j): the receiving node j
    (destination, default) or the emitting node i (source).
    """
    if anchor not in BALANCE_ANCHORS:
        raise ValueError(f"anchor must be one of {BALANCE_ANCHORS}, got {anchor!r}")
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (graph.n,):
        raise ValueError(f"expected {graph.n} thresholds, got shape {m.shape}")
    years = np.asarray(years, dtype=np.int64)
    if years.shape != (graph.n,):
        raise ValueError(f"expected {graph.n} years, got shape {years.shape}")

    b = graph.weight - m[graph.dst if anchor == "destination" else graph.src]
    keep = b > 0.0
    flip = b < 0.0
    src = np.concatenate((graph.src[keep], graph.dst[flip]))
    dst = np.concatenate((graph.dst[keep], graph.src[flip]))
    weight = np.concatenate((b[keep], -b[flip]))
    prior = years[dst] < years[src]

    edge_order = np.lexsort((src, dst))
    return ImplicationNetwork(
        n=graph.n,
        src=src[edge_order],
        dst=dst[edge_order],
        weight=weight[edge_order],
        prior=prior[edge_order],
        kept_count=int(keep.sum()),
        reversed_count=int(flip.sum()),
        dropped_count=int(graph.n_edges - keep.sum() - flip.sum()),
    )


def balance_graph(graph: PaintingGraph, years: np.ndarray, spec: BalanceSpec,
                  anchor: str = "destination") -> ImplicationNetwork:
    """Threshold computation and edge mapping in one step."""
    m = compute_thresholds(graph, years, spec)
    return build_implication_network(graph, m, years, anchor=anchor)


def empty_network(n: int) -> ImplicationNetwork:
    """Edgeless network for corpora whose similarity graph has no edges."""
    empty_i = np.empty(0, dtype=np.int64)
    return ImplicationNetwork(n=n, src=empty_i, dst=empty_i.copy(),
                              weight=np.empty(0, dtype=np.float64),
                              prior=np.empty(0, dtype=bool),
                              kept_count=0, reversed_count=0, dropped_count=0)


def write_cin_csv(net: ImplicationNetwork, ids: Sequence[str], path: str | Path) -> None:
    """Edge dump `src_id,dst_id,weight,label` in canonical (dst, src) order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_id", "dst_id", "weight", "label"])
        for s, d, w, p in zip(net.src, net.dst, net.weight, net.prior):
            writer.writerow([ids[s], ids[d], repr(float(w)), LABEL_PRIOR if p else LABEL_SUBSEQUENT])
