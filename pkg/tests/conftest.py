import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def draw_disk(canvas: np.ndarray, cx: float, cy: float, r: float, value) -> None:
    yy, xx = np.mgrid[0 : canvas.shape[0], 0 : canvas.shape[1]]
    canvas[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = value


def draw_rect(canvas: np.ndarray, x0: int, y0: int, x1: int, y1: int, value) -> None:
    canvas[y0:y1, x0:x1] = value


def synthetic_logo(seed: int, size: int = 96) -> np.ndarray:
    """A deterministic high-contrast gray test mark: scattered blobs + a bar.

    Small isotropic disks produce reliable, describable DoG keypoints.
    """
    rng = np.random.default_rng(seed)
    img = np.full((size, size), 255, dtype=np.uint8)
    margin = 14
    for _ in range(7):
        cx, cy = rng.integers(margin, size - margin, 2)
        r = int(rng.integers(3, 9))
        shade = int(rng.choice([0, 40, 90, 150]))
        draw_disk(img, cx, cy, r, shade)
    x0 = int(rng.integers(margin, size // 2))
    y0 = int(rng.integers(margin, size - 24))
    draw_rect(img, x0, y0, x0 + int(rng.integers(12, 30)), y0 + int(rng.integers(4, 9)), 60)
    return img
