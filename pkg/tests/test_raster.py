import colorsys
import io

import numpy as np
import pytest
from PIL import Image

from logosearch.errors import DecodeError, UnsupportedFormat
from logosearch.raster import (
    autocrop,
    decode_image,
    invert_contrast,
    resize_bilinear,
    rgb_to_hsv,
    to_gray,
)


def _encode(arr, fmt):
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format=fmt)
    return buf.getvalue()


class TestDecode:
    def test_jpeg_30x30(self):
        src = np.random.default_rng(0).integers(0, 256, (30, 30, 3), dtype=np.uint8)
        img = decode_image(_encode(src, "JPEG"))
        assert img.shape == (30, 30, 3)
        assert img.dtype == np.uint8

    def test_truncated_stream_raises(self):
        data = _encode(np.zeros((20, 20, 3), dtype=np.uint8), "JPEG")
        with pytest.raises(DecodeError):
            decode_image(data[: len(data) // 2])

    def test_png_single_white_pixel(self):
        img = decode_image(_encode(np.full((1, 1, 3), 255, dtype=np.uint8), "PNG"))
        assert img.shape == (1, 1, 3)
        assert tuple(img[0, 0]) == (255, 255, 255)

    def test_grayscale_source_replicated(self):
        img = decode_image(_encode(np.full((5, 7), 80, dtype=np.uint8), "PNG"))
        assert img.shape == (5, 7, 3)
        assert np.all(img == 80)

    def test_unsupported_format(self):
        buf = io.BytesIO()
        Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8)).save(buf, format="GIF")
        with pytest.raises(UnsupportedFormat):
            decode_image(buf.getvalue())


class TestToGray:
    def test_constant_fixed_point(self):
        img = np.full((4, 4, 3), 100, dtype=np.uint8)
        assert np.all(to_gray(img) == 100)

    def test_pure_red(self):
        # round(0.299 * 255) = round(76.245) = 76
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        img[..., 0] = 255
        assert np.all(to_gray(img) == 76)

    def test_pure_white(self):
        assert np.all(to_gray(np.full((3, 3, 3), 255, dtype=np.uint8)) == 255)

    def test_double_inversion_identity(self, rng):
        img = rng.integers(0, 256, (9, 11, 3), dtype=np.uint8)
        gray = to_gray(img)
        assert np.array_equal(invert_contrast(invert_contrast(gray)), gray)


class TestRgbToHsv:
    @pytest.mark.parametrize(
        "pixel,expected",
        [((255, 0, 0), (0, 1, 1)), ((0, 0, 0), (0, 0, 0)), ((0, 255, 0), (120, 1, 1))],
    )
    def test_primaries(self, pixel, expected):
        h, s, v = rgb_to_hsv(np.array(pixel))
        assert (h, s, v) == pytest.approx(expected)

    def test_matches_colorsys(self, rng):
        for pixel in rng.integers(0, 256, (200, 3)):
            h, s, v = rgb_to_hsv(pixel.astype(np.uint8))
            eh, es, ev = colorsys.rgb_to_hsv(*(pixel / 255.0))
            assert h / 360.0 == pytest.approx(eh, abs=1e-12)
            assert s == pytest.approx(es, abs=1e-12)
            assert v == pytest.approx(ev, abs=1e-12)

    def test_round_trip_within_one_level(self, rng):
        for pixel in rng.integers(0, 256, (200, 3)):
            h, s, v = rgb_to_hsv(pixel.astype(np.uint8))
            if s == 0:
                continue
            back = np.array(colorsys.hsv_to_rgb(h / 360.0, s, v)) * 255.0
            assert np.abs(back - pixel).max() <= 1.0 + 1e-9


class TestResize:
    def test_identity(self, rng):
        img = rng.integers(0, 256, (7, 5, 3), dtype=np.uint8)
        assert np.array_equal(resize_bilinear(img, 5, 7), img)

    def test_constant_stays_constant(self):
        img = np.full((4, 6, 3), 77, dtype=np.uint8)
        assert np.all(resize_bilinear(img, 13, 9) == 77)

    def test_two_to_three_interpolation(self):
        # source centers at 0.5, 1.5; output center 1 maps to source 0.5 -> 127.5
        img = np.array([[0, 255]], dtype=np.uint8)
        out = resize_bilinear(img, 3, 1)
        assert out[0, 0] == 0 and out[0, 2] == 255
        assert out[0, 1] in (127, 128)


class TestInvert:
    def test_zero_maps_to_255(self):
        assert invert_contrast(np.zeros((2, 2), dtype=np.uint8))[0, 0] == 255

    def test_involution(self, rng):
        img = rng.integers(0, 256, (6, 6), dtype=np.uint8)
        assert np.array_equal(invert_contrast(invert_contrast(img)), img)

    def test_constant_128(self):
        assert np.all(invert_contrast(np.full((3, 3), 128, dtype=np.uint8)) == 127)


def _bbox_oracle(img, tol):
    """Brute-force bounding box of pixels not matching the corner color."""
    luma = to_gray(img).astype(float)
    fg = np.abs(luma - luma[0, 0]) > tol
    ys, xs = np.nonzero(fg)
    return img[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]


class TestAutocrop:
    def test_centered_square_matches_bbox_oracle(self):
        img = np.full((40, 50, 3), 255, dtype=np.uint8)
        img[12:30, 17:35] = 0
        out = autocrop(img, 5)
        assert np.array_equal(out, _bbox_oracle(img, 5))
        assert out.shape == (18, 18, 3)

    def test_all_white_unchanged(self):
        img = np.full((8, 8, 3), 255, dtype=np.uint8)
        assert np.array_equal(autocrop(img), img)

    def test_no_uniform_border_unchanged(self, rng):
        img = rng.integers(0, 256, (16, 16, 3), dtype=np.uint8)
        img[0, 0] = (0, 0, 0)
        img[0, -1] = (255, 255, 255)  # top row spans the luma range
        img[-1, 0] = (255, 255, 255)
        img[:, 0][1::2] = (255, 255, 255)
        img[:, 0][0::2] = (0, 0, 0)
        assert autocrop(img, 5).shape == img.shape

    @pytest.mark.parametrize("seed", range(8))
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        img = np.full((30, 30, 3), 255, dtype=np.uint8)
        x0, y0 = rng.integers(3, 12, 2)
        x1, y1 = rng.integers(18, 28, 2)
        img[y0:y1, x0:x1] = rng.integers(0, 200, 3)
        if seed % 2:
            img[y0 + 3 : y1 - 3, x0 + 3 : x1 - 3] = 255  # hollow ring
        once = autocrop(img)
        twice = autocrop(once)
        assert np.array_equal(once, twice)
