"""Color histograms: non-uniform 72-bin HSV and uniform RGB quantizations."""

from __future__ import annotations

import numpy as np

from ..descriptors import DenseDescriptor
from ..errors import InvalidParam
from ..raster import rgb_to_hsv

# Non-uniform hue bin boundaries in degrees; the interval [316, 20) wraps
# around 0 and forms bin 0 (the red region).
HUE_EDGES = (20.0, 40.0, 75.0, 155.0, 190.0, 270.0, 295.0, 316.0)


def _hsv72_bin_indices(hsv: np.ndarray) -> np.ndarray:
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
    h_idx = np.searchsorted(HUE_EDGES, h, side="right") % 8
    s_idx = np.minimum((s * 3).astype(np.intp), 2)
    v_idx = np.minimum((v * 3).astype(np.intp), 2)
    return h_idx * 9 + s_idx * 3 + v_idx


def color_histogram_hsv72(img: np.ndarray) -> DenseDescriptor:
    """72-bin HSV histogram: 8 non-uniform hue x 3 saturation x 3 value bins.

    Counts are L1-normalized, so the descriptor is invariant to image size.
    """
    hsv = rgb_to_hsv(np.asarray(img).reshape(-1, 3))
    counts = np.bincount(_hsv72_bin_indices(hsv), minlength=72).astype(np.float64)
    return DenseDescriptor("hsv72", counts / counts.sum())


def hsv72_bin_centers() -> np.ndarray:
    """(72, 3) array of (hue deg, saturation, value) bin centers."""
    edges = np.array([316.0 - 360.0, *HUE_EDGES])  # bin 0 spans [-44, 20)
    hue_centers = ((edges[:-1] + edges[1:]) / 2.0) % 360.0
    sv_centers = np.array([1 / 6, 1 / 2, 5 / 6])
    out = np.empty((72, 3))
    for hi in range(8):
        for si in range(3):
            for vi in range(3):
                out[hi * 9 + si * 3 + vi] = (hue_centers[hi], sv_centers[si], sv_centers[vi])
    return out


def color_histogram_rgb(img: np.ndarray, bins_per_channel: int) -> DenseDescriptor:
    """Uniformly quantized RGB histogram with 4 or 8 bins per channel."""
    if bins_per_channel not in (4, 8):
        raise InvalidParam(f"bins_per_channel must be 4 or 8, got {bins_per_channel}")
    px = np.asarray(img).reshape(-1, 3).astype(np.intp)
    q = px * bins_per_channel // 256
    flat = (q[:, 0] * bins_per_channel + q[:, 1]) * bins_per_channel + q[:, 2]
    counts = np.bincount(flat, minlength=bins_per_channel**3).astype(np.float64)
    return DenseDescriptor(f"rgb{bins_per_channel ** 3}", counts / counts.sum())
