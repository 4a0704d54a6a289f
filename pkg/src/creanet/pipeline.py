"""End-to-end scoring pipeline and its file outputs.

One aspect flows: features -> similarity graph -> implication network ->
stochastic operator(s) -> score vector. Aspects never mix; the multi-aspect
driver just runs the pipeline once per aspect.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .corpus import Corpus, estimate_sigma
from .graph import GraphParams, PaintingGraph, build_graph
from .implication import BalanceSpec, ImplicationNetwork, balance_graph, empty_network
from .scoring import (ScoreVector, normalize, solve_closed_form, solve_power,
                      solve_split, solve_split_closed_form)


@dataclass(frozen=True)
class PipelineResult:
    """Scores for one aspect plus the stats of every intermediate stage."""

    aspect: str
    sigma: float
    graph: PaintingGraph
    network: ImplicationNetwork
    dangling_count: int
    score: ScoreVector


def resolve_sigma(corpus: Corpus, aspect: str, config: RunConfig) -> float:
    """Configured bandwidth, or the seeded median-distance estimate when 'auto'."""
    configured = config.sigma_for(aspect)
    if configured == "auto":
        return estimate_sigma(corpus.features[aspect], seed=config.seed)
    return float(configured)


def run_pipeline(corpus: Corpus, aspect: str, config: RunConfig,
                 sigma: float | None = None) -> PipelineResult:
    """Score one aspect. Passing `sigma` pins the bandwidth (skips resolution)."""
    if aspect not in corpus.features:
        raise ValueError(f"aspect '{aspect}' not found; corpus has {list(corpus.aspects)}")
    if sigma is None:
        sigma = resolve_sigma(corpus, aspect, config)

    params = GraphParams(k=config.k, sigma=sigma, temporal_prior=config.temporal_prior,
                         temporal_window_k=config.temporal_window_k)
    graph = build_graph(corpus, aspect, params)

    if graph.n_edges == 0:
        network = empty_network(corpus.n)
    else:
        spec = BalanceSpec(mode=config.balancing_mode, percentile_p=config.percentile_p,
                           local_window_years=config.local_window_years,
                           min_local_sample=config.min_local_sample)
        network = balance_graph(graph, corpus.years, spec, anchor=config.balance_anchor)

    if config.scoring == "combined":
        op = normalize(network, "all")
        dangling_count = int(op.dangling.sum())
        if config.solver == "closed_form":
            score = solve_closed_form(op, config.alpha)
        else:
            score = solve_power(op, config.alpha, tol=config.tol, max_iters=config.max_iters)
    else:
        op_prior = normalize(network, "prior")
        op_subseq = normalize(network, "subsequent")
        dangling_count = int((op_prior.dangling & op_subseq.dangling).sum())
        if config.solver == "closed_form":
            score = solve_split_closed_form(op_prior, op_subseq, config.alpha, config.beta)
        else:
            score = solve_split(op_prior, op_subseq, config.alpha, config.beta,
                                tol=config.tol, max_iters=config.max_iters)

    return PipelineResult(aspect=aspect, sigma=float(sigma), graph=graph,
                          network=network, dangling_count=dangling_count, score=score)


def run_multi_aspect(corpus: Corpus, config: RunConfig,
                     aspects: list[str] | None = None) -> dict[str, PipelineResult]:
    """Run the pipeline independently per aspect, in declared order."""
    if aspects is None:
        aspects = list(corpus.aspects)
    missing = [a for a in aspects if a not in corpus.features]
    if missing:
        raise ValueError(f"aspects not found: {missing}; corpus has {list(corpus.aspects)}")
    return {aspect: run_pipeline(corpus, aspect, config) for aspect in aspects}


def score_ranks(scores: np.ndarray, ids: tuple[str, ...]) -> np.ndarray:
    """Rank 1 = highest score; score ties broken by id ascending."""
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    ranks = np.empty(len(ids), dtype=np.int64)
    for pos, i in enumerate(order):
        ranks[i] = pos + 1
    return ranks


def write_scores_csv(results: dict[str, PipelineResult], corpus: Corpus,
                     path: str | Path) -> None:
    """Score table `id,year,aspect,score,rank`, one block per aspect in run order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "year", "aspect", "score", "rank"])
        for aspect, result in results.items():
            ranks = score_ranks(result.score.scores, corpus.ids)
            for i, artifact in enumerate(corpus.artifacts):
                writer.writerow([artifact.id, artifact.year, aspect,
                                 repr(float(result.score.scores[i])), int(ranks[i])])


def run_metadata(results: dict[str, PipelineResult], corpus: Corpus,
                 config: RunConfig) -> dict:
    """Config echo plus graph and solver stats, JSON-ready (plain types only)."""
    aspects = {}
    for aspect, r in results.items():
        edges = r.graph.n_edges
        aspects[aspect] = {
            "sigma": r.sigma,
            "graph_edges": edges,
            "cin_edges": r.network.n_edges,
            "kept": r.network.kept_count,
            "reversed": r.network.reversed_count,
            "dropped": r.network.dropped_count,
            "reversed_fraction": (r.network.reversed_count / edges) if edges else 0.0,
            "dangling_count": r.dangling_count,
            "solver": {
                "name": r.score.solver,
                "iterations": r.score.iterations,
                "residual": float(r.score.residual),
                "converged": r.score.converged,
            },
        }
    return {"n_artifacts": corpus.n, "config": config.as_dict(), "aspects": aspects}


def write_run_meta(results: dict[str, PipelineResult], corpus: Corpus,
                   config: RunConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(run_metadata(results, corpus, config), fh, indent=2, sort_keys=True)
        fh.write("\n")
