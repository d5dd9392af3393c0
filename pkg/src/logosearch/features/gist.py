"""GIST-style layout descriptor: oriented band-pass energy pooled on a grid.

The image is resized to a fixed working size, filtered with a bank of
frequency-domain Gabor filters (4 scales x 8 orientations), and the response
magnitude is averaged over a 4x4 spatial grid, giving 4*8*16 = 512 values.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..descriptors import DenseDescriptor
from ..raster import resize_bilinear

WORKING_SIZE = 128
N_SCALES = 4
N_ORIENTATIONS = 8
GRID = 4
DIM = N_SCALES * N_ORIENTATIONS * GRID * GRID

_BASE_FREQ = 0.25          # cycles/pixel at the finest scale
_SIGMA_LOG = np.log(2) / 2  # ~one octave radial bandwidth
_SIGMA_ANG = np.pi / 8 * 0.75


@lru_cache(maxsize=4)
def _filter_bank(size: int) -> np.ndarray:
    """(scales * orientations, size, size) one-sided Gabor transfer functions."""
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.fftfreq(size)[None, :]
    f = np.hypot(fx, fy)
    ang = np.arctan2(fy, fx)

    bank = np.empty((N_SCALES * N_ORIENTATIONS, size, size))
    with np.errstate(divide="ignore"):
        logf = np.log(np.where(f > 0, f, 1.0))
    for s in range(N_SCALES):
        radial = np.exp(-((logf - np.log(_BASE_FREQ / 2**s)) ** 2) / (2 * _SIGMA_LOG**2))
        for o in range(N_ORIENTATIONS):
            theta = o * np.pi / N_ORIENTATIONS
            d = np.angle(np.exp(1j * (ang - theta)))
            angular = np.exp(-(d**2) / (2 * _SIGMA_ANG**2))
            t = radial * angular
            t[0, 0] = 0.0  # no DC response: constant images map to zero
            bank[s * N_ORIENTATIONS + o] = t
    return bank


def gist(gray: np.ndarray) -> DenseDescriptor:
    """512-dim layout descriptor, L2-normalized.

    A constant image has no oriented energy and maps to the zero vector
    (normalization skipped).
    """
    img = resize_bilinear(np.asarray(gray), WORKING_SIZE, WORKING_SIZE)
    img = np.asarray(img, dtype=np.float64) / 255.0

    spectrum = np.fft.fft2(img)
    cell = WORKING_SIZE // GRID
    out = np.empty(DIM)
    for i, transfer in enumerate(_filter_bank(WORKING_SIZE)):
        energy = np.abs(np.fft.ifft2(spectrum * transfer))
        pooled = energy.reshape(GRID, cell, GRID, cell).mean(axis=(1, 3))
        out[i * GRID * GRID : (i + 1) * GRID * GRID] = pooled.ravel()

    norm = np.linalg.norm(out)
    if norm < 1e-8:
        return DenseDescriptor("gist", np.zeros(DIM))
    return DenseDescriptor("gist", out / norm)
