import numpy as np
import pytest

from logosearch.codebook import BoVWVector
from logosearch.errors import DimMismatch, DuplicateDoc
from logosearch.index import (
    DenseIndex,
    build_dense,
    build_inverted,
    load_index,
    query_dense,
    query_inverted,
    save_index,
)


def _random_bovw(rng, k, nnz):
    words = rng.choice(k, size=min(nnz, k), replace=False)
    weights = rng.random(len(words)) + 0.01
    return BoVWVector.from_pairs({int(w): float(x) for w, x in zip(words, weights)})


def _random_corpus(rng, n_docs, k):
    return {
        f"doc{i:04d}": _random_bovw(rng, k, int(rng.integers(1, max(2, k // 3))))
        for i in range(n_docs)
    }


class TestDenseIndex:
    def test_build_shape(self, rng):
        descs = {f"d{i}": rng.random(72) for i in range(3)}
        idx = build_dense(descs, "hsv72")
        assert idx.matrix.shape == (3, 72)
        assert idx.doc_ids.tolist() == sorted(descs)

    def test_empty_corpus_empty_ranking(self):
        idx = build_dense({}, "hsv72")
        ranking = idx.query(np.zeros(72), metric="cosine")
        assert len(ranking) == 0

    def test_duplicate_doc(self, rng):
        pairs = [("a", rng.random(4)), ("a", rng.random(4))]
        with pytest.raises(DuplicateDoc):
            build_dense(pairs, "f")

    def test_mixed_dims_rejected(self, rng):
        with pytest.raises(DimMismatch):
            build_dense({"a": rng.random(4), "b": rng.random(5)}, "f")

    def test_query_self_rank_one(self, rng):
        descs = {f"d{i}": rng.random(16) for i in range(10)}
        idx = build_dense(descs, "f")
        ranking = query_dense(idx, descs["d4"], "euclidean")
        assert ranking.doc_ids[0] == "d4"
        # rows are stored as float32, so self-distance is ~1e-7, not exactly 0
        assert ranking.scores[0] < 1e-6
        exact = query_dense(idx, idx.matrix[4], "euclidean")
        assert exact.scores[0] == 0.0

    def test_top_m_zero_empty(self, rng):
        idx = build_dense({"a": rng.random(4)}, "f")
        assert len(idx.query(rng.random(4), top_m=0)) == 0

    def test_matches_bruteforce_oracle(self, rng):
        descs = {f"d{i:03d}": rng.random(12) for i in range(200)}
        idx = build_dense(descs, "f")
        q = rng.random(12)
        ranking = query_dense(idx, q, "euclidean")
        naive = sorted(
            ((float(np.linalg.norm(np.asarray(v, float) - q)), d) for d, v in descs.items()),
        )
        assert [d for _, d in naive] == ranking.doc_ids.tolist()

    def test_dim_mismatch(self, rng):
        idx = build_dense({"a": rng.random(5)}, "f")
        with pytest.raises(DimMismatch):
            idx.query(rng.random(4))


class TestInvertedIndex:
    def test_single_doc_single_word(self):
        vec = BoVWVector.from_pairs({3: 0.7})
        idx = build_inverted({"a": vec}, k=10)
        assert sum(p[0].size for p in idx.postings) == 1
        assert idx.postings[3][0].tolist() == [0]

    def test_posting_conservation(self, rng):
        corpus = _random_corpus(rng, 30, 40)
        idx = build_inverted(corpus, k=40)
        total = sum(p[0].size for p in idx.postings)
        assert total == sum(len(v.words) for v in corpus.values())

    def test_absent_word_empty_postings(self):
        idx = build_inverted({"a": BoVWVector.from_pairs({0: 1.0})}, k=5)
        assert idx.postings[4][0].size == 0

    def test_identical_vector_first_with_zero_distance(self, rng):
        corpus = _random_corpus(rng, 25, 30)
        idx = build_inverted(corpus, k=30)
        ranking = query_inverted(idx, corpus["doc0007"])
        assert ranking.doc_ids[0] == "doc0007"
        assert abs(ranking.scores[0]) < 1e-9

    def test_unseen_words_all_at_distance_one(self, rng):
        corpus = _random_corpus(rng, 10, 20)
        idx = build_inverted(corpus, k=25)
        q = BoVWVector.from_pairs({24: 1.0})
        ranking = query_inverted(idx, q)
        assert np.allclose(ranking.scores, 1.0)
        assert ranking.doc_ids.tolist() == sorted(corpus)

    @pytest.mark.parametrize("seed", range(5))
    def test_equals_dense_cosine_oracle(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(10, 60))
        corpus = _random_corpus(rng, int(rng.integers(20, 200)), k)
        idx = build_inverted(corpus, k=k)
        q = _random_bovw(rng, k, 6)

        dense = build_dense(
            {d: v.densify(k).astype(np.float32) for d, v in corpus.items()}, "bovw"
        )
        expect = query_dense(dense, q.densify(k), "cosine")
        got = query_inverted(idx, q)
        assert got.doc_ids.tolist() == expect.doc_ids.tolist()
        assert np.allclose(got.scores, expect.scores, atol=1e-6)

    def test_injection_equals_full_rebuild(self, rng):
        k = 30
        corpus = _random_corpus(rng, 40, k)
        extra = {"x1": _random_bovw(rng, k, 5), "x2": _random_bovw(rng, k, 5)}
        q = _random_bovw(rng, k, 5)

        idx = build_inverted(corpus, k=k)
        with_extra = idx.query(q, extra=extra)
        rebuilt = build_inverted({**corpus, **extra}, k=k).query(q)
        assert with_extra.doc_ids.tolist() == rebuilt.doc_ids.tolist()
        assert np.array_equal(with_extra.scores, rebuilt.scores)


class TestPersistence:
    def test_dense_round_trip(self, tmp_path, rng):
        idx = build_dense({f"d{i}": rng.random(8) for i in range(5)}, "hsv72", "l1", seed=2)
        save_index(idx, tmp_path / "a.idx")
        loaded = load_index(tmp_path / "a.idx")
        assert isinstance(loaded, DenseIndex)
        assert loaded.feature_id == "hsv72"
        assert loaded.normalization == "l1"
        assert loaded.seed == 2
        assert np.array_equal(loaded.matrix, idx.matrix)
        assert loaded.doc_ids.tolist() == idx.doc_ids.tolist()

    def test_inverted_round_trip_bit_identical_scores(self, tmp_path, rng):
        k = 25
        corpus = _random_corpus(rng, 30, k)
        idx = build_inverted(corpus, k=k, feature_id="sift")
        save_index(idx, tmp_path / "b.idx")
        loaded = load_index(tmp_path / "b.idx")
        q = _random_bovw(rng, k, 7)
        a = idx.query(q)
        b = loaded.query(q)
        assert a.doc_ids.tolist() == b.doc_ids.tolist()
        assert np.array_equal(a.scores, b.scores)
