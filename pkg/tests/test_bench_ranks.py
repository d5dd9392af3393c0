import numpy as np
import pytest

from logosearch.bench.ranks import (
    average_rank,
    interpolated_pr_curve,
    normalized_rank,
    precision_recall_curve,
    resolve_ties,
)
from logosearch.index import Ranking


def _ranking(scores, ids=None):
    ids = ids or [f"d{i}" for i in range(len(scores))]
    return Ranking("q", np.array(ids), np.array(scores, dtype=float))


def _resolve_oracle(scores):
    """Naive tie averaging: for each item, mean position of its score block."""
    scores = np.asarray(scores)
    out = np.empty(len(scores))
    positions = np.arange(1, len(scores) + 1)
    for i, s in enumerate(scores):
        out[i] = positions[scores == s].mean()
    return out


class TestResolveTies:
    def test_no_ties_identity(self):
        ranks = resolve_ties(_ranking([0.1, 0.2, 0.3, 0.4]))
        assert [ranks[f"d{i}"] for i in range(4)] == [1, 2, 3, 4]

    def test_block_of_three(self):
        ranks = resolve_ties(_ranking([0.0, 0.1, 0.5, 0.5, 0.5, 0.9]))
        assert [ranks[f"d{i}"] for i in range(6)] == [1, 2, 4, 4, 4, 6]

    def test_all_tied(self):
        n = 7
        ranks = resolve_ties(_ranking([0.3] * n))
        assert all(r == (n + 1) / 2 for r in ranks.values())

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_naive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        scores = np.sort(np.round(rng.random(100), 1))  # heavy engineered ties
        ranks = resolve_ties(_ranking(scores.tolist()))
        expect = _resolve_oracle(scores)
        got = np.array([ranks[f"d{i}"] for i in range(100)])
        assert np.array_equal(got, expect)

    def test_mean_rank_preserved(self, rng):
        scores = np.sort(np.round(rng.random(200), 1))
        ranks = resolve_ties(_ranking(scores.tolist()))
        assert sum(ranks.values()) == pytest.approx(200 * 201 / 2, abs=1e-9)


class TestRankMetrics:
    def test_average_rank_examples(self):
        assert average_rank([1, 2], 2) == 1.5
        assert average_rank([10], 1) == 10

    def test_perfect_retrieval_hits_lower_bound(self):
        for n_rel in (1, 3, 10):
            ranks = list(range(1, n_rel + 1))
            assert average_rank(ranks, n_rel) == pytest.approx(1 + (n_rel - 1) / 2)
            # lower bound of the documented range is 1 + N_rel/2 after rounding
            assert average_rank(ranks, n_rel) == pytest.approx((n_rel + 1) / 2)

    def test_normalized_examples(self):
        assert normalized_rank([1, 2], 2, 100) == 0.0
        assert normalized_rank([99, 100], 2, 100) == pytest.approx(0.98)

    def test_normalized_zero_iff_perfect(self):
        assert normalized_rank([1, 2, 3], 3, 50) == 0.0
        assert normalized_rank([1, 2, 4], 3, 50) > 0.0

    def test_random_scoring_near_half(self):
        rng = np.random.default_rng(0)
        n, n_rel = 1000, 10
        values = [
            normalized_rank(
                sorted(rng.choice(np.arange(1, n + 1), size=n_rel, replace=False).tolist()),
                n_rel,
                n,
            )
            for _ in range(200)
        ]
        assert np.mean(values) == pytest.approx(0.5, abs=0.03)

    def test_eq5_eq6_consistency(self, rng):
        for _ in range(200):
            n = int(rng.integers(10, 500))
            n_rel = int(rng.integers(1, min(9, n)))
            ranks = sorted(rng.choice(np.arange(1, n + 1), n_rel, replace=False).tolist())
            lhs = normalized_rank(ranks, n_rel, n)
            rhs = (n_rel * average_rank(ranks, n_rel) - n_rel * (n_rel + 1) / 2) / (n * n_rel)
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestPrecisionRecall:
    def test_relevant_at_top(self):
        pts = precision_recall_curve(["a", "b", "x", "y"], {"a", "b", "c", "d"})
        assert pts == [(0.25, 1.0), (0.5, 1.0)]

    def test_two_of_four_in_top5(self):
        ranked = ["a", "x", "b", "y", "z", "c", "q", "d"]
        pts = precision_recall_curve(ranked, {"a", "b", "c", "d"})
        # P@5 = 2/5 = 0.4 at R = 0.5 happens at the cutoff of the 2nd hit (pos 3)
        assert (0.5, 2 / 3) in pts
        hits_at_5 = sum(1 for d in ranked[:5] if d in {"a", "b", "c", "d"})
        assert hits_at_5 / 5 == 0.4

    def test_all_relevant_last(self):
        ranked = [f"x{i}" for i in range(6)] + ["r1", "r2"]
        pts = precision_recall_curve(ranked, {"r1", "r2"})
        assert pts[-1] == (1.0, 2 / 8)

    def test_recalls_strictly_increasing_to_one(self, rng):
        docs = [f"d{i}" for i in range(50)]
        relevant = set(rng.choice(docs, 8, replace=False).tolist())
        order = rng.permutation(docs).tolist()
        pts = precision_recall_curve(order, relevant)
        recalls = [r for r, _ in pts]
        assert all(b > a for a, b in zip(recalls, recalls[1:]))
        assert recalls[-1] == 1.0

    def test_interpolated_macro_average(self):
        per_query = [
            [(0.5, 1.0), (1.0, 0.5)],
            [(0.5, 0.5), (1.0, 0.25)],
        ]
        curve = interpolated_pr_curve(per_query)
        assert len(curve) == 11
        assert curve[0] == (0.0, 0.75)
        assert curve[-1][0] == 1.0
        assert curve[-1][1] == pytest.approx((0.5 + 0.25) / 2)
