"""Shape context: log-polar histograms of sampled edge points.

Per sampled point, the other n-1 points are binned into 5 radial bins
(log-spaced, radii normalized by the mean pairwise distance) x 12 angular
bins = 60 values.  Both bin axes are clamped, so every point lands in
exactly one bin and the unnormalized row sums are n-1.
"""

from __future__ import annotations

import numpy as np

from ..descriptors import DescriptorSet, Keypoint
from ..errors import InsufficientEdges

N_RADIAL = 5
N_ANGULAR = 12
DIM = N_RADIAL * N_ANGULAR

# log-spaced radial edges relative to the mean pairwise distance
_R_INNER = 0.125
_R_OUTER = 2.0
EDGE_THRESHOLD = 0.2  # fraction of the max gradient magnitude


def edge_points(gray: np.ndarray) -> np.ndarray:
    """(m, 2) array of (x, y) edge pixels: Sobel magnitude >= 0.2 of max."""
    img = np.asarray(gray, dtype=np.float64)
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    gx[1:-1, 1:-1] = (
        img[:-2, 2:] + 2 * img[1:-1, 2:] + img[2:, 2:]
        - img[:-2, :-2] - 2 * img[1:-1, :-2] - img[2:, :-2]
    )
    gy[1:-1, 1:-1] = (
        img[2:, :-2] + 2 * img[2:, 1:-1] + img[2:, 2:]
        - img[:-2, :-2] - 2 * img[:-2, 1:-1] - img[:-2, 2:]
    )
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak == 0:
        return np.empty((0, 2))
    ys, xs = np.nonzero(mag >= EDGE_THRESHOLD * peak)
    return np.stack([xs, ys], axis=1).astype(np.float64)


def shape_context_from_points(points: np.ndarray, normalize_rows: bool = True) -> np.ndarray:
    """(n, 60) log-polar histograms for an (n, 2) point set.

    With normalize_rows=False the raw counts are returned (each row sums to
    n - 1); otherwise rows are L1-normalized.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    diff = pts[None, :, :] - pts[:, None, :]  # diff[i, j] = p_j - p_i
    dist = np.hypot(diff[..., 0], diff[..., 1])
    off = ~np.eye(n, dtype=bool)
    mean_dist = dist[off].mean()
    if mean_dist == 0:
        mean_dist = 1.0

    log_edges = np.logspace(np.log10(_R_INNER), np.log10(_R_OUTER), N_RADIAL + 1)
    with np.errstate(divide="ignore"):
        r_idx = np.searchsorted(log_edges, dist / mean_dist, side="right") - 1
    r_idx = np.clip(r_idx, 0, N_RADIAL - 1)
    theta = np.mod(np.arctan2(diff[..., 1], diff[..., 0]), 2 * np.pi)
    a_idx = np.minimum((theta * N_ANGULAR / (2 * np.pi)).astype(np.intp), N_ANGULAR - 1)

    flat = r_idx * N_ANGULAR + a_idx
    hists = np.zeros((n, DIM))
    for i in range(n):
        hists[i] = np.bincount(flat[i][off[i]], minlength=DIM)
    return hists / (n - 1) if normalize_rows else hists


def shape_context(gray: np.ndarray, n_samples: int = 100) -> DescriptorSet:
    """Shape-context descriptors over uniformly sampled edge pixels.

    Samples every floor(E/n)-th edge pixel in raster order.  Raises
    InsufficientEdges when the image has fewer edge pixels than n_samples.
    """
    pts = edge_points(gray)
    if pts.shape[0] < n_samples:
        raise InsufficientEdges(f"{pts.shape[0]} edge pixels < {n_samples} samples")
    step = pts.shape[0] // n_samples
    sampled = pts[np.arange(n_samples) * step]
    hists = shape_context_from_points(sampled)
    keypoints = [Keypoint(x=float(x), y=float(y), scale=1.0) for x, y in sampled]
    return DescriptorSet("shapectx", keypoints, hists)
