"""Shared corpus builders and the acceptance-criteria reporting hook."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest

import creanet as cn

_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.line(line)


def make_corpus(years, features, ids=None, styles=None, aspect="visual") -> cn.Corpus:
    """Corpus from bare arrays; ids default to p0000, p0001, ..."""
    features = np.asarray(features, dtype=np.float64)
    n = features.shape[0]
    if ids is None:
        ids = [f"p{i:04d}" for i in range(n)]
    if styles is None:
        styles = [None] * n
    artifacts = [cn.Artifact(id=ids[i], year=int(years[i]), style=styles[i]) for i in range(n)]
    return cn.Corpus(artifacts, {aspect: cn.FeatureSet(aspect, features)})


def random_corpus(seed: int, n: int, dim: int, year_lo: int = 1400, year_hi: int = 1900) -> cn.Corpus:
    rng = np.random.default_rng(seed)
    years = rng.integers(year_lo, year_hi + 1, size=n)
    return make_corpus(years, rng.normal(size=(n, dim)))


def random_network(seed: int, n: int, k: int = 8, p: float = 50.0) -> cn.ImplicationNetwork:
    """Implication network of a random corpus, for solver-level tests."""
    corpus = random_corpus(seed, n, 6)
    sigma = cn.estimate_sigma(corpus.features["visual"], seed=seed)
    graph = cn.build_graph(corpus, "visual", cn.GraphParams(k=k, sigma=sigma))
    return cn.balance_graph(graph, corpus.years, cn.BalanceSpec(percentile_p=p))


def planted_corpus(seed: int = 7) -> cn.Corpus:
    """500 artifacts with planted structure for the time-machine direction test.

    Motif A: 15 tight archetypes (1430-1470) imitated by 80 later artifacts.
    Motif B: 60 echoes (1650-1860) anticipating 15 tight innovators (1870-1900).
    Everything else is unstructured background over 1400-1900; the slice dated
    1550-1650 is labeled `wander` to serve as the near-neutral control group.
    """
    rng = np.random.default_rng(seed)
    dim = 8
    motif_a = np.zeros(dim)
    motif_a[0] = 6.0
    motif_b = np.zeros(dim)
    motif_b[1] = 6.0
    rows: list[tuple[int, str, np.ndarray]] = []
    for _ in range(15):
        rows.append((1430 + int(rng.integers(0, 41)), "archetype", motif_a + rng.normal(0, 0.05, dim)))
    for _ in range(80):
        rows.append((1500 + int(rng.integers(0, 351)), "imitator", motif_a + rng.normal(0, 0.15, dim)))
    for _ in range(15):
        rows.append((1870 + int(rng.integers(0, 31)), "innovator", motif_b + rng.normal(0, 0.05, dim)))
    for _ in range(60):
        rows.append((1650 + int(rng.integers(0, 211)), "echo", motif_b + rng.normal(0, 0.15, dim)))
    for _ in range(330):
        y = 1400 + int(rng.integers(0, 501))
        rows.append((y, "wander" if 1550 <= y <= 1650 else "background", rng.normal(0, 1.0, dim)))
    # pin the corpus year range so clamp bounds are independent of the draw
    rows[0] = (1400, "background", rows[0][2])
    rows[-1] = (1900, "background", rows[-1][2])
    artifacts = [cn.Artifact(id=f"p{i:04d}", year=y, style=s) for i, (y, s, _) in enumerate(rows)]
    features = np.stack([f for _, _, f in rows])
    return cn.Corpus(artifacts, {"visual": cn.FeatureSet("visual", features)})


@pytest.fixture(scope="session")
def planted():
    return planted_corpus()


PIONEER = 1  # row of the pioneer in pioneer_corpus


def pioneer_corpus() -> cn.Corpus:
    """Pioneer P, three later near-copies of P, and one earlier dissimilar precursor.

    With sigma pinned to 1 the precursor's edges all fall below the balancing
    median and reverse, so P also owns a strong novelty (prior-labeled) edge;
    P's edges to its copies stay kept (subsequent-labeled) influence edges.
    P should top the ranking whether the split emphasizes either channel.
    """
    feats = np.array([
        [2.5, 0.0],   # precursor 1400, far from the cluster that follows
        [0.0, 0.0],   # pioneer 1500
        [0.5, 0.0],   # copy 1600
        [-0.5, 0.0],  # copy 1650
        [0.0, 0.5],   # copy 1700
    ])
    years = [1400, 1500, 1600, 1650, 1700]
    ids = ["precursor", "pioneer", "copy1", "copy2", "copy3"]
    return make_corpus(years, feats, ids=ids)


def write_corpus_files(corpus: cn.Corpus, directory: Path) -> tuple[Path, dict[str, Path]]:
    """Write a corpus as manifest + per-aspect feature CSVs for CLI tests."""
    directory.mkdir(parents=True, exist_ok=True)
    manifest = directory / "manifest.csv"
    has_style = any(a.style is not None for a in corpus.artifacts)
    with open(manifest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "year", "style"] if has_style else ["id", "year"])
        for a in corpus.artifacts:
            row = [a.id, a.year] + ([a.style or ""] if has_style else [])
            writer.writerow(row)
    paths = {}
    for aspect in corpus.aspects:
        path = directory / f"{aspect}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in corpus.features[aspect].vectors:
                writer.writerow([repr(float(x)) for x in row])
        paths[aspect] = path
    return manifest, paths
