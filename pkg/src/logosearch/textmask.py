"""Text-region detection and keypoint filtering.

A multi-threshold connected-component sweep stands in for a trained
character detector: components that look like characters (size, aspect,
fill, stroke-width regularity) and line up in rows of three or more are
merged into word boxes.  Keypoints whose centers fall inside a box can then
be dropped before quantization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .descriptors import DescriptorSet

N_THRESHOLDS = 8
MIN_CHAIN = 3          # a word needs >= 2 aligned neighbors per character
MERGE_IOU = 0.5
MIN_CHAR_HEIGHT = 8
MAX_CHAR_HEIGHT_FRAC = 0.8
ASPECT_RANGE = (0.1, 1.5)
FILL_RANGE = (0.1, 0.95)
STROKE_CV_MAX = 0.85   # std/mean bound on stroke widths inside a component


@dataclass(frozen=True)
class TextBox:
    """Pixel rectangle (x0, y0) inclusive to (x1, y1) exclusive."""

    x0: int
    y0: int
    x1: int
    y1: int
    confidence: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass(frozen=True)
class _Candidate:
    x0: int
    y0: int
    x1: int
    y1: int
    score: float  # fraction of character heuristics passed

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    @property
    def cy(self) -> float:
        return (self.y0 + self.y1) / 2.0


def _component_candidates(mask: np.ndarray, img_h: int) -> list[_Candidate]:
    labels, count = ndimage.label(mask)
    if count == 0:
        return []
    out = []
    for sl in ndimage.find_objects(labels):
        if sl is None:
            continue
        ys, xs = sl
        h = ys.stop - ys.start
        w = xs.stop - xs.start
        if h < MIN_CHAR_HEIGHT or h > MAX_CHAR_HEIGHT_FRAC * img_h:
            continue  # the height gate is hard; everything else is scored
        comp = mask[sl]
        checks = [ASPECT_RANGE[0] <= w / h <= ASPECT_RANGE[1]]
        fill = comp.mean()
        checks.append(FILL_RANGE[0] <= fill <= FILL_RANGE[1])
        dt = ndimage.distance_transform_edt(comp)
        widths = dt[comp & (dt > 0)]
        if widths.size:
            cv = widths.std() / widths.mean()
            checks.append(cv <= STROKE_CV_MAX)
        else:
            checks.append(False)
        passed = 1 + sum(checks)  # height gate counts as the fourth heuristic
        if sum(checks) < 2:
            continue
        out.append(_Candidate(xs.start, ys.start, xs.stop, ys.stop, passed / 4.0))
    return out


def _chain_boxes(cands: list[_Candidate]) -> list[TextBox]:
    """Group horizontally aligned, similar-height candidates into word boxes."""
    if len(cands) < MIN_CHAIN:
        return []
    cands = sorted(cands, key=lambda c: (c.x0, c.y0))
    n = len(cands)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # characters in one word share height and baseline almost exactly and
    # sit at a regular pitch; keeping these gates tight stops rows of
    # similar-looking figure elements from chaining into fake words
    for i in range(n):
        for j in range(i + 1, n):
            a, b = cands[i], cands[j]
            hmax = max(a.height, b.height)
            if min(a.height, b.height) < 0.7 * hmax:
                continue
            if abs(a.cy - b.cy) > 0.25 * hmax:
                continue
            gap = max(b.x0 - a.x1, a.x0 - b.x1)
            if gap > 1.2 * hmax:
                continue
            parent[find(i)] = find(j)

    groups: dict[int, list[_Candidate]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(cands[i])

    boxes = []
    for members in groups.values():
        if len(members) < MIN_CHAIN:
            continue
        boxes.append(
            TextBox(
                x0=min(c.x0 for c in members),
                y0=min(c.y0 for c in members),
                x1=max(c.x1 for c in members),
                y1=max(c.y1 for c in members),
                confidence=float(np.mean([c.score for c in members])),
            )
        )
    return boxes


def _iou(a: TextBox, b: TextBox) -> float:
    ix = max(0, min(a.x1, b.x1) - max(a.x0, b.x0))
    iy = max(0, min(a.y1, b.y1) - max(a.y0, b.y0))
    inter = ix * iy
    union = a.area() + b.area() - inter
    return inter / union if union else 0.0


def _merge_across_levels(boxes: list[TextBox]) -> list[TextBox]:
    merged: list[TextBox] = []
    for box in sorted(boxes, key=lambda b: (-b.confidence, b.x0, b.y0, b.x1, b.y1)):
        for i, kept in enumerate(merged):
            if _iou(box, kept) >= MERGE_IOU:
                merged[i] = TextBox(
                    min(box.x0, kept.x0),
                    min(box.y0, kept.y0),
                    max(box.x1, kept.x1),
                    max(box.y1, kept.y1),
                    max(box.confidence, kept.confidence),
                )
                break
        else:
            merged.append(box)
    return sorted(merged, key=lambda b: (b.x0, b.y0, b.x1, b.y1))


def detect_text_regions(gray: np.ndarray) -> list[TextBox]:
    """Likely word boxes from an 8-level threshold sweep over both polarities."""
    img = np.asarray(gray, dtype=np.float64)
    h = img.shape[0]
    boxes: list[TextBox] = []
    levels = np.linspace(img.min(), img.max(), N_THRESHOLDS + 2)[1:-1]
    for thr in levels:
        for mask in (img <= thr, img >= thr):
            boxes.extend(_chain_boxes(_component_candidates(mask, h)))
    return _merge_across_levels(boxes)


def filter_keypoints(dset: DescriptorSet, boxes: list[TextBox]) -> DescriptorSet:
    """Keep exactly the rows whose keypoint center lies in no box, order preserved."""
    if not boxes or not len(dset):
        return DescriptorSet(dset.feature_id, list(dset.keypoints), dset.vectors.copy())
    keep = [
        i
        for i, kp in enumerate(dset.keypoints)
        if not any(b.contains(kp.x, kp.y) for b in boxes)
    ]
    return DescriptorSet(
        dset.feature_id,
        [dset.keypoints[i] for i in keep],
        dset.vectors[keep] if keep else np.zeros((0, dset.vectors.shape[1])),
    )
