"""Triplet grouping of same-scale keypoints for geometry-aware matching.

Within each discrete scale level, every keypoint forms one triplet with its
two nearest same-level neighbors; a triplet is encoded as the sorted triple
of the members' visual-word ids.  Triplet codes hash into a fixed-size
histogram so images can be compared with cosine distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..codebook import Codebook, assign_words
from ..descriptors import DescriptorSet
from .sift import DogConfig

TRIPLET_HIST_BINS = 10007  # prime, keeps the open vocabulary collisions spread


@dataclass(frozen=True)
class TripletCode:
    """Sorted triple of visual-word ids plus the shared scale level."""

    words: tuple[int, int, int]
    scale_level: int


def _scale_level(scale: float, cfg: DogConfig) -> int:
    return int(round(np.log2(scale / cfg.sigma) * cfg.scales_per_octave))


def group_triplets(
    dset: DescriptorSet, codebook: Codebook, cfg: DogConfig = DogConfig()
) -> list[TripletCode]:
    """Deduplicated triplet codes for one image; levels with < 3 keypoints contribute nothing."""
    if len(dset) < 3:
        return []
    words = assign_words(dset.vectors, codebook)
    levels = np.array([_scale_level(kp.scale, cfg) for kp in dset.keypoints])
    coords = np.array([[kp.x, kp.y] for kp in dset.keypoints])

    seen: set[TripletCode] = set()
    out: list[TripletCode] = []
    for level in sorted(set(levels.tolist())):
        members = np.flatnonzero(levels == level)
        if members.size < 3:
            continue
        pts = coords[members]
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        np.fill_diagonal(d, np.inf)
        for i in range(members.size):
            # two nearest same-level neighbors; ties broken by member order
            nearest = np.argsort(d[i], kind="stable")[:2]
            triple = tuple(sorted(int(words[members[j]]) for j in (i, *nearest)))
            code = TripletCode(triple, int(level))
            if code not in seen:
                seen.add(code)
                out.append(code)
    return out


def triplet_histogram(codes: list[TripletCode], bins: int = TRIPLET_HIST_BINS) -> dict[int, int]:
    """Hash triplet codes into a sparse fixed-size count map (stable across runs)."""
    counts: dict[int, int] = {}
    for code in codes:
        h = code.scale_level & 0xFFFFFFFF
        for w in code.words:
            h = (h * 1000003 + w + 1) & 0xFFFFFFFFFFFFFFFF
        b = int(h % bins)
        counts[b] = counts.get(b, 0) + 1
    return counts
