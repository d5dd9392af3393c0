"""Dense histogram-of-oriented-gradients blocks (2x2 cells x 9 bins = 36)."""

from __future__ import annotations

import numpy as np

from ..descriptors import DescriptorSet, Keypoint
from ..errors import ImageTooSmall

N_ORI_BINS = 9
BLOCK_CELLS = 2
DIM = BLOCK_CELLS * BLOCK_CELLS * N_ORI_BINS


def describe_hog_dense(gray: np.ndarray, cell_px: int = 8) -> DescriptorSet:
    """One 36-dim descriptor per 2x2-cell block position on a dense grid.

    Gradient orientations are unsigned (mod pi); each block is L2-normalized
    unless it is all zero.  Keypoints record block centers at scale cell_px.
    """
    img = np.asarray(gray, dtype=np.float64)
    h, w = img.shape
    cells_y, cells_x = h // cell_px, w // cell_px
    if cells_y < BLOCK_CELLS or cells_x < BLOCK_CELLS:
        raise ImageTooSmall(f"need at least {BLOCK_CELLS}x{BLOCK_CELLS} cells of {cell_px}px")

    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    gx[:, 1:-1] = (img[:, 2:] - img[:, :-2]) / 2.0
    gy[1:-1, :] = (img[2:, :] - img[:-2, :]) / 2.0
    mag = np.hypot(gx, gy)
    ori = np.mod(np.arctan2(gy, gx), np.pi)
    bins = np.minimum((ori * N_ORI_BINS / np.pi).astype(np.intp), N_ORI_BINS - 1)

    # per-cell orientation histograms, magnitude weighted
    hy, hx = cells_y * cell_px, cells_x * cell_px
    flat_cell = (
        (np.arange(hy)[:, None] // cell_px) * cells_x + (np.arange(hx)[None, :] // cell_px)
    )
    idx = flat_cell * N_ORI_BINS + bins[:hy, :hx]
    cell_hist = np.bincount(
        idx.ravel(), weights=mag[:hy, :hx].ravel(), minlength=cells_y * cells_x * N_ORI_BINS
    ).reshape(cells_y, cells_x, N_ORI_BINS)

    keypoints = []
    rows = []
    for by in range(cells_y - BLOCK_CELLS + 1):
        for bx in range(cells_x - BLOCK_CELLS + 1):
            block = cell_hist[by : by + BLOCK_CELLS, bx : bx + BLOCK_CELLS].ravel()
            norm = np.linalg.norm(block)
            rows.append(block / norm if norm > 0 else block)
            keypoints.append(
                Keypoint(
                    x=(bx + BLOCK_CELLS / 2) * cell_px,
                    y=(by + BLOCK_CELLS / 2) * cell_px,
                    scale=float(cell_px),
                )
            )
    return DescriptorSet("hog", keypoints, np.array(rows))
