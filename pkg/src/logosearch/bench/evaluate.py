"""Query-injection evaluation protocol.

For each member q of a query group, the other members are injected into the
indexed test set, the corpus is ranked fully against q, ties are averaged,
and the injected members' ranks feed the average-rank and normalized-rank
scores (with N = corpus size + number injected).  The query image itself is
never part of its own ranking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DuplicateDoc, GroupTooSmall
from ..index import DenseIndex, InvertedIndex
from .ranks import average_rank, interpolated_pr_curve, normalized_rank, precision_recall_curve, resolve_ties


@dataclass(frozen=True)
class QueryGroup:
    """A set of mutually similar images used as queries."""

    group_id: str
    members: list[str]

    def __post_init__(self):
        if len(self.members) < 2:
            raise GroupTooSmall(f"group {self.group_id} has {len(self.members)} member(s)")
        if len(set(self.members)) != len(self.members):
            raise DuplicateDoc(f"group {self.group_id} repeats a member id")


@dataclass
class QueryResult:
    query_id: str
    group_id: str
    injected_ranks: list[float]
    avg_rank: float
    norm_rank: float
    pr_points: list[tuple[float, float]] = field(default_factory=list)


@dataclass
class EvalReport:
    results: list[QueryResult]
    mean_rank: float
    std_rank: float
    mean_norm_rank: float
    std_norm_rank: float
    pr_curve: list[tuple[float, float]]

    @classmethod
    def from_results(cls, results: list[QueryResult]) -> "EvalReport":
        ranks = np.array([r.avg_rank for r in results])
        norms = np.array([r.norm_rank for r in results])
        return cls(
            results=results,
            mean_rank=float(ranks.mean()) if len(results) else float("nan"),
            std_rank=float(ranks.std()) if len(results) else float("nan"),
            mean_norm_rank=float(norms.mean()) if len(results) else float("nan"),
            std_norm_rank=float(norms.std()) if len(results) else float("nan"),
            pr_curve=interpolated_pr_curve([r.pr_points for r in results]),
        )


def _rank_query(index, query_vec, extra, query_id, metric, A):
    if isinstance(index, InvertedIndex):
        return index.query(query_vec, extra=extra, query_id=query_id)
    if isinstance(index, DenseIndex):
        return index.query(query_vec, metric=metric, A=A, extra=extra, query_id=query_id)
    raise TypeError(f"unsupported index type {type(index)!r}")


def injection_rankings(
    group: QueryGroup,
    index,
    features,
    metric: str = "cosine",
    A: np.ndarray | None = None,
):
    """Full ranking per group member over corpus + the other members.

    `features` maps member id to its query representation (a dense vector or
    a BoVWVector, matching the index).  Group members must not already be in
    the corpus.
    """
    corpus_ids = set(index.doc_ids.tolist())
    clash = corpus_ids.intersection(group.members)
    if clash:
        raise DuplicateDoc(f"group members already indexed: {sorted(clash)}")
    out = {}
    for q in group.members:
        injected = [m for m in group.members if m != q]
        out[q] = _rank_query(
            index, features[q], {m: features[m] for m in injected}, q, metric, A
        )
    return out


def result_from_ranking(group: QueryGroup, query_id: str, ranking) -> QueryResult:
    """Score one query's full ranking under the protocol's tie rule."""
    injected = [m for m in group.members if m != query_id]
    averaged = resolve_ties(ranking)
    ranks = sorted(averaged[m] for m in injected)
    n_rel = len(injected)
    return QueryResult(
        query_id=query_id,
        group_id=group.group_id,
        injected_ranks=ranks,
        avg_rank=average_rank(ranks, n_rel),
        norm_rank=normalized_rank(ranks, n_rel, len(ranking)),
        pr_points=precision_recall_curve([str(d) for d in ranking.doc_ids], set(injected)),
    )


def inject_and_evaluate(
    group: QueryGroup,
    index,
    features,
    metric: str = "cosine",
    A: np.ndarray | None = None,
) -> list[QueryResult]:
    """Evaluate every member of one group under the injection protocol."""
    rankings = injection_rankings(group, index, features, metric=metric, A=A)
    return [result_from_ranking(group, q, rankings[q]) for q in group.members]


def evaluate_groups(
    groups: list[QueryGroup],
    index,
    features,
    metric: str = "cosine",
    A: np.ndarray | None = None,
) -> EvalReport:
    """Run the protocol over every group and aggregate."""
    results: list[QueryResult] = []
    for group in groups:
        results.extend(inject_and_evaluate(group, index, features, metric=metric, A=A))
    return EvalReport.from_results(results)
