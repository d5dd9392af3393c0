import numpy as np
import pytest

from logosearch.errors import ImageTooSmall
from logosearch.features.hog import describe_hog_dense


class TestHogDense:
    def test_dim_36(self, rng):
        img = rng.integers(0, 256, (40, 48), dtype=np.uint8)
        dset = describe_hog_dense(img, cell_px=8)
        assert dset.dim == 36
        # dense grid: one descriptor per block position
        assert len(dset) == (40 // 8 - 1) * (48 // 8 - 1)

    def test_constant_image_all_zero(self):
        dset = describe_hog_dense(np.full((32, 32), 99, dtype=np.uint8))
        assert np.array_equal(dset.vectors, np.zeros_like(dset.vectors))

    def test_blocks_l2_normalized(self, rng):
        img = rng.integers(0, 256, (64, 64), dtype=np.uint8)
        norms = np.linalg.norm(describe_hog_dense(img).vectors, axis=1)
        assert np.all((np.abs(norms - 1.0) < 1e-9) | (norms == 0))

    def test_vertical_edge_mass_in_horizontal_gradient_bin(self):
        # vertical edge -> gradient along +x -> orientation 0 -> bin 0
        img = np.zeros((32, 32), dtype=np.uint8)
        img[:, 16:] = 255
        dset = describe_hog_dense(img, cell_px=8)
        active = dset.vectors[np.linalg.norm(dset.vectors, axis=1) > 0]
        assert len(active)
        per_bin = active.reshape(len(active), 4, 9).sum(axis=1)
        assert np.all(per_bin[:, 0] > 0)
        assert np.allclose(per_bin[:, 1:], 0)

    def test_keypoints_record_block_centers(self):
        dset = describe_hog_dense(np.zeros((24, 24), dtype=np.uint8), cell_px=8)
        assert dset.keypoints[0].x == 8.0 and dset.keypoints[0].y == 8.0
        assert dset.keypoints[0].scale == 8.0

    def test_too_small(self):
        with pytest.raises(ImageTooSmall):
            describe_hog_dense(np.zeros((10, 10), dtype=np.uint8), cell_px=8)
