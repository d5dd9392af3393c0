import numpy as np
import pytest

from logosearch.errors import DimMismatch, InvalidParam
from logosearch.metrics import (
    METRIC_NAMES,
    distance,
    distance_matrix,
    hsv72_similarity_matrix,
    normalize,
)


class TestNormalize:
    def test_l1(self):
        assert normalize(np.array([2.0, 2.0]), "l1") == pytest.approx([0.5, 0.5])

    def test_l2(self):
        assert normalize(np.array([3.0, 4.0]), "l2") == pytest.approx([0.6, 0.8])

    def test_zero_vector_unchanged(self):
        z = np.zeros(4)
        assert np.array_equal(normalize(z, "l1"), z)
        assert np.array_equal(normalize(z, "l2"), z)

    def test_unknown_scheme(self):
        with pytest.raises(InvalidParam):
            normalize(np.ones(2), "max")


class TestDistanceExamples:
    def test_identical_histograms_intersection_zero(self):
        p = normalize(np.array([1.0, 2.0, 3.0]), "l1")
        assert distance(p, p, "intersection_l1") == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_unit_vectors_cosine_one(self):
        assert distance(np.array([1.0, 0.0]), np.array([0.0, 1.0]), "cosine") == pytest.approx(1.0)

    def test_quadratic_identity_reduces_to_squared_euclidean(self):
        p, q = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert distance(p, q, "quadratic", A=np.eye(2)) == pytest.approx(2.0)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            distance(np.ones(3), np.ones(4), "euclidean")

    def test_cosine_zero_norm_conventions(self):
        z = np.zeros(3)
        assert distance(z, z, "cosine") == 0.0
        assert distance(z, np.ones(3), "cosine") == 1.0


class TestMetricProperties:
    def _pairs(self, n=1000, dim=8):
        rng = np.random.default_rng(7)
        return rng.random((n, 2, dim))

    def test_identity_and_symmetry(self):
        A = hsv72_similarity_matrix()
        rng = np.random.default_rng(3)
        for _ in range(200):
            p = rng.random(72)
            q = rng.random(72)
            for metric in METRIC_NAMES:
                kw = {"A": A} if metric == "quadratic" else {}
                if metric == "intersection_l2":
                    p2, q2 = normalize(p, "l2"), normalize(q, "l2")
                else:
                    p2, q2 = normalize(p, "l1"), normalize(q, "l1")
                assert distance(p2, p2, metric, **kw) == pytest.approx(0.0, abs=1e-9)
                assert distance(p2, q2, metric, **kw) == pytest.approx(
                    distance(q2, p2, metric, **kw), abs=1e-12
                )

    def test_triangle_inequality(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            p, q, r = rng.random((3, 6))
            for metric in ("euclidean", "manhattan"):
                dpq = distance(p, q, metric)
                dqr = distance(q, r, metric)
                dpr = distance(p, r, metric)
                assert dpr <= dpq + dqr + 1e-12

    def test_cosine_scaling_invariance(self):
        rng = np.random.default_rng(5)
        p, q = rng.random(10), rng.random(10)
        base = distance(p, q, "cosine")
        assert distance(3.7 * p, q, "cosine") == pytest.approx(base, abs=1e-12)
        assert distance(p, 0.002 * q, "cosine") == pytest.approx(base, abs=1e-12)

    def test_default_A_is_psd_and_quadratic_nonnegative(self):
        A = hsv72_similarity_matrix()
        assert np.allclose(A, A.T)
        assert np.allclose(np.diag(A), 1.0)
        assert A.min() >= 0 and A.max() <= 1 + 1e-12
        eigs = np.linalg.eigvalsh(A)
        assert eigs.min() >= -1e-9
        rng = np.random.default_rng(13)
        for _ in range(200):
            p = normalize(rng.random(72), "l1")
            q = normalize(rng.random(72), "l1")
            assert distance(p, q, "quadratic", A=A) >= -1e-12

    def test_euclidean_rank_equals_squared_euclidean_rank(self):
        rng = np.random.default_rng(17)
        corpus = rng.random((50, 12))
        q = rng.random(12)
        d = distance_matrix(corpus, q, "euclidean")
        assert np.array_equal(np.argsort(d), np.argsort(d**2))


class TestDistanceMatrix:
    @pytest.mark.parametrize("metric", METRIC_NAMES)
    def test_matches_scalar_calls(self, metric):
        rng = np.random.default_rng(23)
        corpus = rng.random((20, 72))
        q = rng.random(72)
        A = hsv72_similarity_matrix() if metric == "quadratic" else None
        batch = distance_matrix(corpus, q, metric, A=A)
        for i in range(20):
            assert batch[i] == pytest.approx(distance(corpus[i], q, metric, A=A), abs=1e-12)
