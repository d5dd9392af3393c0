"""Inverse Rank Position fusion of per-feature rankings.

A document ranked r_j by feature j receives the fused score
1 / sum_j(1 / r_j); relevant documents have small ranks, so small fused
scores are better and the output is sorted ascending.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from .errors import UniverseMismatch
from .index import Ranking


def irp_score(ranks: Sequence[float]) -> float:
    """1 / sum(1/r) — the harmonic mean of the ranks divided by their count."""
    return 1.0 / sum(1.0 / r for r in ranks)


def irp_fuse(rank_maps: Sequence[Mapping[str, float]], query_id: str = "query") -> Ranking:
    """Fuse >= 1 full rankings given as doc id -> (possibly tie-averaged) rank.

    All maps must cover the same document universe.  Output ties are broken
    by ascending doc id.
    """
    if not rank_maps:
        raise UniverseMismatch("need at least one ranking to fuse")
    universe = set(rank_maps[0])
    for other in rank_maps[1:]:
        if set(other) != universe:
            raise UniverseMismatch("rankings cover different document sets")
    docs = sorted(universe)
    inv_sum = np.zeros(len(docs))
    for ranks in rank_maps:
        inv_sum += 1.0 / np.array([ranks[d] for d in docs])
    scores = 1.0 / inv_sum
    order = np.lexsort((np.array(docs), scores))
    return Ranking(query_id, np.array(docs)[order], scores[order])
