"""Local binary patterns over a circular neighborhood, with the
rotation-invariant (ri), uniform (u2) and rotation-invariant-uniform (riu2)
code mappings."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..descriptors import DenseDescriptor
from ..errors import ImageTooSmall, InvalidParam
from ..metrics import normalize

VARIANTS = ("base", "ri", "u2", "riu2")

# Comparison tolerance: interpolated neighbor values can carry ~1e-13 of
# round-off, which must not flip the s(g_p - g_c) >= 0 decision at exact ties
# (constant regions, rotated copies of the same pixels).
_TIE_EPS = 1e-9


def _rotations(code: int, P: int) -> list[int]:
    mask = (1 << P) - 1
    return [((code >> i) | (code << (P - i))) & mask for i in range(P)]


def _transitions(code: int, P: int) -> int:
    prev = (code >> (P - 1)) & 1
    count = 0
    for i in range(P):
        bit = (code >> i) & 1
        count += bit != prev
        prev = bit
    return count


@lru_cache(maxsize=None)
def _code_tables(P: int) -> dict[str, np.ndarray]:
    """Per-variant lookup tables mapping a raw P-bit code to its bin index."""
    n = 1 << P
    codes = np.arange(n)

    minima = np.array([min(_rotations(c, P)) for c in range(n)])
    classes = {c: i for i, c in enumerate(sorted(set(minima.tolist())))}
    ri = np.array([classes[m] for m in minima])

    uniform = np.array([_transitions(c, P) <= 2 for c in range(n)])
    u2_ids = {c: i for i, c in enumerate(codes[uniform].tolist())}
    u2 = np.array([u2_ids[c] if uniform[c] else len(u2_ids) for c in range(n)])

    pop = np.array([bin(c).count("1") for c in range(n)])
    riu2 = np.where(uniform, pop, P + 1)

    return {"base": codes, "ri": ri, "u2": u2, "riu2": riu2}


def lbp_dim(P: int, variant: str) -> int:
    """Histogram length for a variant: 2^P, rotation classes, P(P-1)+3 or P+2."""
    if variant not in VARIANTS:
        raise InvalidParam(f"unknown LBP variant {variant!r}")
    table = _code_tables(P)[variant]
    return int(table.max()) + 1


def _sample_offsets(P: int, R: float) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(P) / P
    # snap near-integer components so axis-aligned samples skip interpolation
    return np.round(np.stack([-R * np.sin(angles), R * np.cos(angles)], axis=1), 9)


def lbp_codes(gray: np.ndarray, P: int = 8, R: float = 1.0) -> np.ndarray:
    """Raw LBP code image over the interior region (H-2R, W-2R).

    Neighbor intensities are sampled on the circle of radius R with bilinear
    interpolation; bit p is set when the neighbor is >= the center pixel.
    """
    img = np.asarray(gray, dtype=np.float64)
    h, w = img.shape
    r = int(np.ceil(R))
    if h < 2 * r + 1 or w < 2 * r + 1:
        raise ImageTooSmall(f"need at least {2 * r + 1} pixels per side for R={R}")

    center = img[r : h - r, r : w - r]
    codes = np.zeros(center.shape, dtype=np.int64)
    rows = np.arange(r, h - r)
    cols = np.arange(r, w - r)
    for p, (dy, dx) in enumerate(_sample_offsets(P, R)):
        y0, x0 = int(np.floor(dy)), int(np.floor(dx))
        ty, tx = dy - y0, dx - x0
        y1 = y0 + (ty > 0)
        x1 = x0 + (tx > 0)
        a = img[np.ix_(rows + y0, cols + x0)]
        b = img[np.ix_(rows + y0, cols + x1)]
        c = img[np.ix_(rows + y1, cols + x0)]
        d = img[np.ix_(rows + y1, cols + x1)]
        top = a + tx * (b - a)
        bot = c + tx * (d - c)
        val = top + ty * (bot - top)
        codes |= (val - center > -_TIE_EPS).astype(np.int64) << p
    return codes


def lbp(
    gray: np.ndarray,
    P: int = 8,
    R: float = 1.0,
    variant: str = "base",
    normalization: str = "l1",
) -> DenseDescriptor:
    """LBP code histogram of an image under the chosen variant mapping."""
    if P < 4:
        raise InvalidParam("P must be >= 4")
    if R < 1:
        raise InvalidParam("R must be >= 1")
    if variant not in VARIANTS:
        raise InvalidParam(f"unknown LBP variant {variant!r}")
    table = _code_tables(P)[variant]
    binned = table[lbp_codes(gray, P, R)]
    counts = np.bincount(binned.ravel(), minlength=lbp_dim(P, variant)).astype(np.float64)
    feature_id = "lbp.base" if variant == "base" else f"lbp.{variant}"
    return DenseDescriptor(feature_id, normalize(counts, normalization))
