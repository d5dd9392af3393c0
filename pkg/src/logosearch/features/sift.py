"""Difference-of-Gaussians keypoint detection and SIFT-style descriptors.

`describe_sift` produces the classic 4x4x8 = 128-dim gradient histogram.
`describe_orsift` folds gradient orientations modulo pi before binning
(4 bins per cell, 4x4x4 = 64), and also reduces the keypoint reference
orientation modulo pi, which makes the descriptor invariant to contrast
inversion: negating the image flips every gradient by pi, and folding
cancels the flip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from ..descriptors import DescriptorSet, Keypoint
from ..errors import ImageTooSmall

_ASSUMED_BLUR = 0.5
_DESCR_WIDTH = 4          # spatial cells per side
_DESCR_SCL_FCTR = 3.0     # cell width in units of keypoint scale
_ORI_BINS = 36
_ORI_SIG_FCTR = 1.5
_ORI_PEAK_RATIO = 0.8
_MAG_CLAMP = 0.2
_MIN_IMAGE = 16
_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DogConfig:
    """Detector configuration (Lowe's published defaults)."""

    octaves: int = 4
    scales_per_octave: int = 3
    sigma: float = 1.6
    contrast_threshold: float = 0.03
    edge_threshold: float = 10.0
    max_keypoints: int = 2000


def fold_orientation(theta: float | np.ndarray) -> float | np.ndarray:
    """Reduce an angle modulo pi, merging directions 180 degrees apart."""
    return np.mod(theta, np.pi)


def gaussian_pyramid(gray: np.ndarray, cfg: DogConfig = DogConfig()) -> list[list[np.ndarray]]:
    """Per-octave lists of progressively blurred images (S + 3 per octave)."""
    img = np.asarray(gray, dtype=np.float64)
    if img.max() > 1.5:
        img = img / 255.0
    s = cfg.scales_per_octave
    k = 2.0 ** (1.0 / s)
    sigmas = cfg.sigma * k ** np.arange(s + 3)

    base = gaussian_filter(img, np.sqrt(max(cfg.sigma**2 - _ASSUMED_BLUR**2, 0.01)))
    pyramid = []
    for _ in range(cfg.octaves):
        if min(base.shape) < _MIN_IMAGE:
            break
        octave = [base]
        for i in range(1, s + 3):
            step = np.sqrt(sigmas[i] ** 2 - sigmas[i - 1] ** 2)
            octave.append(gaussian_filter(octave[-1], step))
        pyramid.append(octave)
        base = octave[s][::2, ::2]
    return pyramid


def _dog_stack(octave: list[np.ndarray]) -> np.ndarray:
    return np.stack([b - a for a, b in zip(octave, octave[1:])])


def _local_extrema(dogs: np.ndarray, layer: int, threshold: float) -> np.ndarray:
    """(y, x) positions in dogs[layer] that beat all 26 neighbors (ties allowed)."""
    center = dogs[layer, 1:-1, 1:-1]
    strong = np.abs(center) > threshold
    is_max = strong.copy()
    is_min = strong.copy()
    for dl in (-1, 0, 1):
        plane = dogs[layer + dl]
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dl == 0 and dy == 0 and dx == 0:
                    continue
                nb = plane[1 + dy : plane.shape[0] - 1 + dy, 1 + dx : plane.shape[1] - 1 + dx]
                is_max &= center >= nb
                is_min &= center <= nb
                if not (is_max.any() or is_min.any()):
                    return np.empty((0, 2), dtype=np.intp)
    ys, xs = np.nonzero(is_max | is_min)
    return np.stack([ys + 1, xs + 1], axis=1)


def _refine(dogs: np.ndarray, layer: int, y: int, x: int, cfg: DogConfig):
    """Sub-pixel refinement; returns (layer_f, y_f, x_f, response) or None."""
    s = cfg.scales_per_octave
    n_layers, h, w = dogs.shape
    for _ in range(5):
        v = dogs[layer, y, x]
        g = np.array(
            [
                (dogs[layer, y, x + 1] - dogs[layer, y, x - 1]) / 2.0,
                (dogs[layer, y + 1, x] - dogs[layer, y - 1, x]) / 2.0,
                (dogs[layer + 1, y, x] - dogs[layer - 1, y, x]) / 2.0,
            ]
        )
        dxx = dogs[layer, y, x + 1] + dogs[layer, y, x - 1] - 2 * v
        dyy = dogs[layer, y + 1, x] + dogs[layer, y - 1, x] - 2 * v
        dss = dogs[layer + 1, y, x] + dogs[layer - 1, y, x] - 2 * v
        dxy = (dogs[layer, y + 1, x + 1] - dogs[layer, y + 1, x - 1]
               - dogs[layer, y - 1, x + 1] + dogs[layer, y - 1, x - 1]) / 4.0
        dxs = (dogs[layer + 1, y, x + 1] - dogs[layer + 1, y, x - 1]
               - dogs[layer - 1, y, x + 1] + dogs[layer - 1, y, x - 1]) / 4.0
        dys = (dogs[layer + 1, y + 1, x] - dogs[layer + 1, y - 1, x]
               - dogs[layer - 1, y + 1, x] + dogs[layer - 1, y - 1, x]) / 4.0
        hess = np.array([[dxx, dxy, dxs], [dxy, dyy, dys], [dxs, dys, dss]])
        try:
            offset = -np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            return None
        if np.all(np.abs(offset) < 0.5):
            response = v + 0.5 * float(g @ offset)
            if abs(response) * s < cfg.contrast_threshold:
                return None
            tr = dxx + dyy
            det = dxx * dyy - dxy * dxy
            r = cfg.edge_threshold
            if det <= 0 or tr * tr * r >= (r + 1) ** 2 * det:
                return None
            return (layer + offset[2], y + offset[1], x + offset[0], abs(response))
        x += int(np.round(offset[0]))
        y += int(np.round(offset[1]))
        layer += int(np.round(offset[2]))
        if not (1 <= layer < n_layers - 1 and 1 <= y < h - 1 and 1 <= x < w - 1):
            return None
    return None


def _smooth_circular(hist: np.ndarray, passes: int = 2) -> np.ndarray:
    kernel = np.array([1, 4, 6, 4, 1], dtype=np.float64) / 16.0
    for _ in range(passes):
        padded = np.concatenate([hist[-2:], hist, hist[:2]])
        hist = np.convolve(padded, kernel, mode="valid")
    return hist


def _orientation_histogram(gauss: np.ndarray, x: float, y: float, scl_octv: float) -> np.ndarray:
    radius = int(round(3.0 * _ORI_SIG_FCTR * scl_octv))
    h, w = gauss.shape
    xi, yi = int(round(x)), int(round(y))
    y0, y1 = max(yi - radius, 1), min(yi + radius, h - 2)
    x0, x1 = max(xi - radius, 1), min(xi + radius, w - 2)
    if y0 > y1 or x0 > x1:
        return np.zeros(_ORI_BINS)

    patch = gauss[y0 - 1 : y1 + 2, x0 - 1 : x1 + 2]
    gx = (patch[1:-1, 2:] - patch[1:-1, :-2]) / 2.0
    gy = (patch[2:, 1:-1] - patch[:-2, 1:-1]) / 2.0
    mag = np.hypot(gx, gy)
    ang = np.arctan2(gy, gx)

    yy, xx = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
    sig = _ORI_SIG_FCTR * scl_octv
    weight = np.exp(-((yy - y) ** 2 + (xx - x) ** 2) / (2.0 * sig * sig))
    bins = np.round(ang * _ORI_BINS / _TWO_PI).astype(np.int64) % _ORI_BINS
    hist = np.bincount(bins.ravel(), weights=(mag * weight).ravel(), minlength=_ORI_BINS)
    return _smooth_circular(hist)


def _peak_orientations(hist: np.ndarray) -> list[float]:
    top = hist.max()
    if top <= 0:
        return [0.0]
    out = []
    for i in range(_ORI_BINS):
        left = hist[(i - 1) % _ORI_BINS]
        right = hist[(i + 1) % _ORI_BINS]
        if hist[i] > left and hist[i] > right and hist[i] >= _ORI_PEAK_RATIO * top:
            denom = left - 2.0 * hist[i] + right
            frac = 0.5 * (left - right) / denom if denom != 0 else 0.0
            out.append(((i + frac) * _TWO_PI / _ORI_BINS) % _TWO_PI)
    return out or [0.0]


def detect_dog_keypoints(
    gray: np.ndarray,
    cfg: DogConfig = DogConfig(),
    pyramid: list[list[np.ndarray]] | None = None,
) -> list[Keypoint]:
    """Scale-space extrema of the DoG pyramid, sub-pixel refined.

    Low-contrast and edge-like responses are rejected; surviving points are
    ordered by response strength (ties by position) and capped at
    cfg.max_keypoints.  Deterministic for fixed input and configuration.
    """
    img = np.asarray(gray)
    if img.shape[0] < _MIN_IMAGE or img.shape[1] < _MIN_IMAGE:
        raise ImageTooSmall(f"need at least {_MIN_IMAGE}x{_MIN_IMAGE}, got {img.shape}")
    if pyramid is None:
        pyramid = gaussian_pyramid(img, cfg)
    s = cfg.scales_per_octave
    prefilter = 0.5 * cfg.contrast_threshold / s

    found = []
    for o, octave in enumerate(pyramid):
        dogs = _dog_stack(octave)
        scale_factor = float(2**o)
        for layer in range(1, s + 1):
            for y, x in _local_extrema(dogs, layer, prefilter):
                hit = _refine(dogs, layer, int(y), int(x), cfg)
                if hit is None:
                    continue
                layer_f, y_f, x_f, response = hit
                scale = cfg.sigma * 2.0 ** (o + layer_f / s)
                scl_octv = scale / scale_factor
                gauss = octave[min(max(int(round(layer_f)), 0), s + 2)]
                hist = _orientation_histogram(gauss, x_f, y_f, scl_octv)
                for theta in _peak_orientations(hist):
                    found.append(
                        (response, x_f * scale_factor, y_f * scale_factor, scale, theta)
                    )

    found.sort(key=lambda t: (-t[0], t[2], t[1], t[3], t[4]))
    return [
        Keypoint(x=x, y=y, scale=scale, orientation=theta)
        for _resp, x, y, scale, theta in found[: cfg.max_keypoints]
    ]


def _octave_of(scale: float, cfg: DogConfig, n_octaves: int) -> tuple[int, int]:
    s = cfg.scales_per_octave
    level = int(round(np.log2(scale / cfg.sigma) * s))
    octave = min(max((level - 1) // s if level >= 1 else 0, 0), n_octaves - 1)
    layer = min(max(level - octave * s, 0), s + 2)
    return octave, layer


def _describe(
    gray: np.ndarray,
    keypoints: list[Keypoint],
    cfg: DogConfig,
    fold: bool,
    pyramid: list[list[np.ndarray]] | None,
) -> DescriptorSet:
    if pyramid is None:
        pyramid = gaussian_pyramid(gray, cfg)
    d = _DESCR_WIDTH
    nbins = 4 if fold else 8
    ori_span = np.pi if fold else _TWO_PI

    gradients: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def grads(o: int, layer: int):
        key = (o, layer)
        if key not in gradients:
            g = pyramid[o][layer]
            gx = np.zeros_like(g)
            gy = np.zeros_like(g)
            gx[:, 1:-1] = (g[:, 2:] - g[:, :-2]) / 2.0
            gy[1:-1, :] = (g[2:, :] - g[:-2, :]) / 2.0
            gradients[key] = (np.hypot(gx, gy), np.arctan2(gy, gx))
        return gradients[key]

    kept: list[Keypoint] = []
    rows: list[np.ndarray] = []
    for kp in keypoints:
        octave, layer = _octave_of(kp.scale, cfg, len(pyramid))
        factor = float(2**octave)
        xo, yo = kp.x / factor, kp.y / factor
        scl_octv = kp.scale / factor
        hist_width = _DESCR_SCL_FCTR * scl_octv
        radius = int(round(hist_width * np.sqrt(2) * (d + 1) * 0.5))
        h, w = pyramid[octave][layer].shape
        xi, yi = int(round(xo)), int(round(yo))
        if not (1 <= xi <= w - 2 and 1 <= yi <= h - 2):
            continue  # center on the border: drop
        # out-of-image window samples are skipped, as in standard SIFT
        ylo, yhi = max(yi - radius, 1), min(yi + radius, h - 2)
        xlo, xhi = max(xi - radius, 1), min(xi + radius, w - 2)

        theta = fold_orientation(kp.orientation) if fold else kp.orientation
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        mag, ang = grads(octave, layer)
        yy, xx = np.mgrid[ylo : yhi + 1, xlo : xhi + 1]
        dx = xx - xo
        dy = yy - yo
        c_rot = (cos_t * dx + sin_t * dy) / hist_width
        r_rot = (-sin_t * dx + cos_t * dy) / hist_width
        rbin = r_rot + d / 2 - 0.5
        cbin = c_rot + d / 2 - 0.5
        valid = (rbin > -1) & (rbin < d) & (cbin > -1) & (cbin < d)
        if not valid.any():
            continue

        rel = np.mod(ang[yy, xx] - theta, ori_span)
        obin = rel * nbins / ori_span
        weight = mag[yy, xx] * np.exp(-(c_rot**2 + r_rot**2) / (0.5 * d * d))

        rb, cb, ob, wt = rbin[valid], cbin[valid], obin[valid], weight[valid]
        r0 = np.floor(rb).astype(np.intp)
        c0 = np.floor(cb).astype(np.intp)
        o0 = np.floor(ob).astype(np.intp)
        fr, fc, fo = rb - r0, cb - c0, ob - o0

        hist = np.zeros((d + 2, d + 2, nbins))
        for dr in (0, 1):
            wr = wt * (fr if dr else 1 - fr)
            for dc in (0, 1):
                wc = wr * (fc if dc else 1 - fc)
                for do in (0, 1):
                    wo = wc * (fo if do else 1 - fo)
                    np.add.at(hist, (r0 + 1 + dr, c0 + 1 + dc, (o0 + do) % nbins), wo)

        vec = hist[1 : d + 1, 1 : d + 1, :].ravel()
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec = np.minimum(vec / norm, _MAG_CLAMP)
            norm = np.linalg.norm(vec)
            if norm > 0:
                vec = vec / norm
        kept.append(kp)
        rows.append(vec)

    dim = d * d * nbins
    matrix = np.array(rows) if rows else np.zeros((0, dim))
    return DescriptorSet("orsift" if fold else "sift", kept, matrix)


def describe_sift(
    gray: np.ndarray,
    keypoints: list[Keypoint],
    cfg: DogConfig = DogConfig(),
    pyramid: list[list[np.ndarray]] | None = None,
) -> DescriptorSet:
    """128-dim SIFT descriptors; keypoints too close to the border are dropped."""
    return _describe(gray, keypoints, cfg, fold=False, pyramid=pyramid)


def describe_orsift(
    gray: np.ndarray,
    keypoints: list[Keypoint],
    cfg: DogConfig = DogConfig(),
    pyramid: list[list[np.ndarray]] | None = None,
) -> DescriptorSet:
    """64-dim contrast-inversion-invariant descriptors (orientations mod pi)."""
    return _describe(gray, keypoints, cfg, fold=True, pyramid=pyramid)
