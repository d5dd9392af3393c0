"""Rank-based retrieval metrics and the tie-averaging rule.

Documents sharing a score form a block whose members all receive the mean
of the block's positions.  The average-rank score of a query is the mean
rank of its relevant documents; the normalized variant maps it into [0, 1]
where 0 is perfect retrieval and 0.5 matches random scoring.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..index import Ranking


def resolve_ties(ranking: Ranking) -> dict[str, float]:
    """Tie-averaged rank per doc id for a strictly ordered scored ranking."""
    scores = np.asarray(ranking.scores)
    n = len(scores)
    out: dict[str, float] = {}
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and scores[stop] == scores[start]:
            stop += 1
        # positions are start+1 .. stop, averaging to their midpoint
        avg = (start + 1 + stop) / 2.0
        for i in range(start, stop):
            out[str(ranking.doc_ids[i])] = avg
        start = stop
    return out


def average_rank(ranks: Sequence[float], n_rel: int) -> float:
    """(1 / N_rel) * sum of the relevant documents' ranks."""
    if len(ranks) != n_rel or n_rel < 1:
        raise ValueError(f"expected {n_rel} ranks, got {len(ranks)}")
    return float(sum(ranks)) / n_rel


def normalized_rank(ranks: Sequence[float], n_rel: int, n: int) -> float:
    """(sum of ranks - N_rel(N_rel + 1)/2) / (N * N_rel), in [0, 1]."""
    if len(ranks) != n_rel or n_rel < 1:
        raise ValueError(f"expected {n_rel} ranks, got {len(ranks)}")
    return (float(sum(ranks)) - n_rel * (n_rel + 1) / 2.0) / (n * n_rel)


def precision_recall_curve(
    ranked_docs: Sequence[str], relevant: set[str]
) -> list[tuple[float, float]]:
    """(recall, precision) at each cutoff where a relevant document appears."""
    if not relevant:
        raise ValueError("relevant set must be non-empty")
    points = []
    hits = 0
    for cutoff, doc in enumerate(ranked_docs, start=1):
        if doc in relevant:
            hits += 1
            points.append((hits / len(relevant), hits / cutoff))
    return points


def interpolated_pr_curve(
    per_query_points: list[list[tuple[float, float]]],
    levels: np.ndarray | None = None,
) -> list[tuple[float, float]]:
    """Macro-averaged 11-point interpolated precision across queries.

    Interpolated precision at recall r is the best precision achieved at any
    recall >= r (0 when the query never reaches r).
    """
    if levels is None:
        levels = np.linspace(0.0, 1.0, 11)
    curves = []
    for points in per_query_points:
        recalls = np.array([r for r, _ in points])
        precs = np.array([p for _, p in points])
        interp = []
        for level in levels:
            at_least = precs[recalls >= level - 1e-12]
            interp.append(float(at_least.max()) if at_least.size else 0.0)
        curves.append(interp)
    mean = np.mean(curves, axis=0) if curves else np.zeros_like(levels)
    return [(float(r), float(p)) for r, p in zip(levels, mean)]
