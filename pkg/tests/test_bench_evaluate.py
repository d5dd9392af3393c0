import numpy as np
import pytest

from logosearch.bench.evaluate import EvalReport, QueryGroup, inject_and_evaluate
from logosearch.bench.feature_io import (
    import_external_features,
    read_feature_matrix,
    write_feature_matrix,
)
from logosearch.codebook import BoVWVector
from logosearch.errors import DuplicateDoc, FormatError, GroupTooSmall
from logosearch.index import build_dense, build_inverted


class TestQueryGroup:
    def test_too_small(self):
        with pytest.raises(GroupTooSmall):
            QueryGroup("g", ["only"])

    def test_duplicate_member(self):
        with pytest.raises(DuplicateDoc):
            QueryGroup("g", ["a", "a"])


class TestInjectAndEvaluate:
    def test_group_of_two_empty_corpus(self, rng):
        idx = build_dense({}, "f")
        group = QueryGroup("g", ["q1", "q2"])
        feats = {"q1": rng.random(8), "q2": rng.random(8)}
        rows = inject_and_evaluate(group, idx, feats, metric="euclidean")
        assert len(rows) == 2
        for row in rows:
            assert row.injected_ranks == [1.0]
            assert row.avg_rank == 1.0
            assert row.norm_rank == 0.0

    def test_member_already_indexed_rejected(self, rng):
        idx = build_dense({"q1": rng.random(4)}, "f")
        with pytest.raises(DuplicateDoc):
            inject_and_evaluate(
                QueryGroup("g", ["q1", "q2"]),
                idx,
                {"q1": rng.random(4), "q2": rng.random(4)},
            )

    def test_random_scores_average_half(self):
        # pipeline returning random descriptors on a 200-doc corpus
        rng = np.random.default_rng(42)
        corpus = {f"d{i:03d}": rng.random(16) for i in range(200)}
        idx = build_dense(corpus, "f")
        norm_ranks = []
        for t in range(10):
            feats = {f"q{t}a": rng.random(16), f"q{t}b": rng.random(16)}
            group = QueryGroup("g", sorted(feats))
            rows = inject_and_evaluate(group, idx, feats, metric="euclidean")
            norm_ranks.extend(r.norm_rank for r in rows)
        assert np.mean(norm_ranks) == pytest.approx(0.5, abs=0.1)

    def test_exact_duplicates_rank_first(self, rng):
        corpus = {f"d{i:03d}": rng.random(24) for i in range(150)}
        idx = build_dense(corpus, "hsv72")
        shared = rng.random(24).astype(np.float32).astype(np.float64)
        feats = {"qa": shared, "qb": shared.copy(), "qc": shared.copy()}
        group = QueryGroup("g", ["qa", "qb", "qc"])
        rows = inject_and_evaluate(group, idx, feats, metric="intersection_l1")
        for row in rows:
            assert row.norm_rank < 0.01

    def test_bovw_injection(self, rng):
        k = 12
        corpus = {
            f"d{i}": BoVWVector.from_pairs({int(w): 1.0 for w in rng.choice(k, 3, replace=False)})
            for i in range(30)
        }
        idx = build_inverted(corpus, k=k)
        q_vec = BoVWVector.from_pairs({0: 0.5, 3: 0.5})
        feats = {"qa": q_vec, "qb": BoVWVector.from_pairs({0: 0.4, 3: 0.6})}
        rows = inject_and_evaluate(QueryGroup("g", ["qa", "qb"]), idx, feats)
        assert len(rows) == 2
        assert all(1 <= r.avg_rank <= 31 for r in rows)

    def test_report_aggregation(self, rng):
        corpus = {f"d{i}": rng.random(8) for i in range(50)}
        idx = build_dense(corpus, "f")
        feats = {"qa": rng.random(8), "qb": rng.random(8)}
        rows = inject_and_evaluate(QueryGroup("g", ["qa", "qb"]), idx, feats, metric="cosine")
        report = EvalReport.from_results(rows)
        assert report.mean_rank == pytest.approx(np.mean([r.avg_rank for r in rows]))
        assert len(report.pr_curve) == 11


class TestFeatureIO:
    def test_round_trip(self, tmp_path, rng):
        matrix = rng.random((5, 9)).astype(np.float32)
        ids = [f"img{i}.png" for i in range(5)]
        path = tmp_path / "m.tmf"
        write_feature_matrix(path, "hsv72", ids, matrix)
        fid, got_ids, got = read_feature_matrix(path)
        assert fid == "hsv72"
        assert got_ids == ids
        assert np.array_equal(got, matrix)

    def test_truncated_payload_rejected(self, tmp_path, rng):
        path = tmp_path / "m.tmf"
        write_feature_matrix(path, "f", ["a", "b"], rng.random((2, 4)).astype(np.float32))
        data = path.read_bytes()
        path.write_bytes(data[:-5])
        with pytest.raises(FormatError):
            read_feature_matrix(path)

    def test_import_external(self, tmp_path, rng):
        matrix = rng.random((6, 4096)).astype(np.float32)
        ids = [f"doc{i}" for i in range(6)]
        path = tmp_path / "vgg.tmf"
        write_feature_matrix(path, "vgg_fc7", ids, matrix)
        idx = import_external_features(path)
        assert idx.dim == 4096
        assert idx.n_docs == 6
        ranking = idx.query(matrix[2].astype(np.float64), metric="cosine")
        assert ranking.doc_ids[0] == "doc2"

    def test_import_duplicate_ids_rejected(self, tmp_path, rng):
        path = tmp_path / "x.tmf"
        write_feature_matrix(path, "f", ["a", "a"], rng.random((2, 3)).astype(np.float32))
        with pytest.raises(FormatError):
            import_external_features(path)
