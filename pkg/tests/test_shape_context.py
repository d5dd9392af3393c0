import numpy as np
import pytest

from conftest import synthetic_logo
from logosearch.errors import InsufficientEdges
from logosearch.features.shape_context import (
    shape_context,
    shape_context_from_points,
)


class TestShapeContext:
    def test_dim_60(self):
        dset = shape_context(synthetic_logo(0), n_samples=60)
        assert dset.dim == 60
        assert len(dset) == 60

    def test_unnormalized_mass_is_n_minus_one(self, rng):
        pts = rng.random((40, 2)) * 100
        raw = shape_context_from_points(pts, normalize_rows=False)
        assert np.array_equal(raw.sum(axis=1), np.full(40, 39.0))

    def test_rows_l1_normalized(self, rng):
        pts = rng.random((25, 2)) * 50
        hists = shape_context_from_points(pts)
        assert np.allclose(hists.sum(axis=1), 1.0)

    def test_scale_invariance_exact(self, rng):
        pts = rng.random((30, 2)) * 80
        a = shape_context_from_points(pts)
        b = shape_context_from_points(pts * 7.3)
        assert np.abs(a - b).sum() < 1e-6

    def test_insufficient_edges(self):
        with pytest.raises(InsufficientEdges):
            shape_context(np.full((30, 30), 128, dtype=np.uint8), n_samples=50)

    def test_deterministic_sampling(self):
        img = synthetic_logo(5)
        a = shape_context(img, n_samples=50)
        b = shape_context(img, n_samples=50)
        assert np.array_equal(a.vectors, b.vectors)
        assert a.keypoints == b.keypoints
