import numpy as np
import pytest

from logosearch.errors import ImageTooSmall, InvalidParam
from logosearch.features.lbp import lbp, lbp_codes, lbp_dim


class TestDims:
    def test_variant_dims_p8(self):
        assert lbp_dim(8, "base") == 256
        assert lbp_dim(8, "ri") == 36
        assert lbp_dim(8, "u2") == 59
        assert lbp_dim(8, "riu2") == 10

    @pytest.mark.parametrize("variant,dim", [("base", 256), ("ri", 36), ("u2", 59), ("riu2", 10)])
    def test_descriptor_dims(self, rng, variant, dim):
        img = rng.integers(0, 256, (24, 24), dtype=np.uint8)
        assert lbp(img, variant=variant).dim == dim

    def test_unknown_variant(self):
        with pytest.raises(InvalidParam):
            lbp(np.zeros((10, 10), dtype=np.uint8), variant="xyz")

    def test_too_small(self):
        with pytest.raises(ImageTooSmall):
            lbp(np.zeros((2, 2), dtype=np.uint8))


class TestCodes:
    def test_constant_image_all_255(self):
        img = np.full((12, 12), 90, dtype=np.uint8)
        hist = lbp(img, variant="base").values
        assert hist[255] == pytest.approx(1.0)
        assert hist.sum() == pytest.approx(1.0)

    def test_codes_shape(self):
        img = np.zeros((10, 14), dtype=np.uint8)
        assert lbp_codes(img, 8, 1.0).shape == (8, 12)


class TestInvariances:
    @pytest.mark.parametrize("seed", range(6))
    def test_riu2_exact_under_90_degree_rotations(self, seed):
        rng = np.random.default_rng(seed)
        img = rng.integers(0, 256, (20, 26), dtype=np.uint8)
        base = lbp(img, variant="riu2").values
        for k in (1, 2, 3):
            rotated = lbp(np.rot90(img, k), variant="riu2").values
            assert np.array_equal(rotated, base)

    def test_checkerboard_riu2_rotation(self):
        img = np.indices((16, 16)).sum(axis=0) % 2 * 255
        a = lbp(img.astype(np.uint8), variant="riu2").values
        b = lbp(np.rot90(img).astype(np.uint8), variant="riu2").values
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("seed", range(6))
    def test_base_invariant_to_gray_shift(self, seed):
        rng = np.random.default_rng(seed)
        img = rng.integers(0, 236, (18, 18)).astype(np.float64)
        a = lbp(img, variant="base").values
        b = lbp(img + 10.0, variant="base").values
        assert np.array_equal(a, b)
