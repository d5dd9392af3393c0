"""Deterministic synthetic logo corpus generator.

Stands in for a real trademark collection: renders figure primitives
(circles, polygons, strokes) and pseudo-words from a built-in 5x7 block
font, composes distractors in configurable type proportions, and builds
query groups whose members are transformed variants (scale, small rotation,
contrast inversion, overlaid text) of a base mark.  Everything derives from
the spec seed, so two runs emit byte-identical images.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import ndimage

from ..raster import encode_png, invert_contrast, resize_bilinear
from .evaluate import QueryGroup

# 5x7 uppercase bitmap font; '#' marks ink.
_FONT = {
    "A": ".###.|#...#|#...#|#####|#...#|#...#|#...#",
    "B": "####.|#...#|####.|#...#|#...#|#...#|####.",
    "C": ".###.|#...#|#....|#....|#....|#...#|.###.",
    "D": "####.|#...#|#...#|#...#|#...#|#...#|####.",
    "E": "#####|#....|####.|#....|#....|#....|#####",
    "F": "#####|#....|####.|#....|#....|#....|#....",
    "G": ".###.|#...#|#....|#.###|#...#|#...#|.###.",
    "H": "#...#|#...#|#...#|#####|#...#|#...#|#...#",
    "I": "#####|..#..|..#..|..#..|..#..|..#..|#####",
    "J": "..###|...#.|...#.|...#.|...#.|#..#.|.##..",
    "K": "#...#|#..#.|#.#..|##...|#.#..|#..#.|#...#",
    "L": "#....|#....|#....|#....|#....|#....|#####",
    "M": "#...#|##.##|#.#.#|#.#.#|#...#|#...#|#...#",
    "N": "#...#|##..#|#.#.#|#..##|#...#|#...#|#...#",
    "O": ".###.|#...#|#...#|#...#|#...#|#...#|.###.",
    "P": "####.|#...#|#...#|####.|#....|#....|#....",
    "Q": ".###.|#...#|#...#|#...#|#.#.#|#..#.|.##.#",
    "R": "####.|#...#|#...#|####.|#.#..|#..#.|#...#",
    "S": ".###.|#...#|.#...|..#..|...#.|#...#|.###.",
    "T": "#####|..#..|..#..|..#..|..#..|..#..|..#..",
    "U": "#...#|#...#|#...#|#...#|#...#|#...#|.###.",
    "V": "#...#|#...#|#...#|#...#|#...#|.#.#.|..#..",
    "W": "#...#|#...#|#...#|#.#.#|#.#.#|##.##|#...#",
    "X": "#...#|.#.#.|..#..|..#..|..#..|.#.#.|#...#",
    "Y": "#...#|.#.#.|..#..|..#..|..#..|..#..|..#..",
    "Z": "#####|...#.|..#..|..#..|.#...|#....|#####",
}
_GLYPH_W, _GLYPH_H = 5, 7

PALETTE = np.array(
    [
        (0, 0, 0),        # black
        (200, 16, 16),    # red
        (16, 140, 16),    # green
        (24, 40, 200),    # blue
        (10, 160, 170),   # teal
        (210, 165, 10),   # mustard
        (160, 20, 160),   # purple
        (230, 110, 20),   # orange
        (100, 60, 20),    # brown
        (70, 70, 70),     # dark gray
    ],
    dtype=np.uint8,
)


@dataclass(frozen=True)
class SynthSpec:
    """Corpus recipe; default distractor mix mirrors a realistic collection
    (mostly text-only marks, very few pure figures)."""

    seed: int = 0
    text_only: int = 63
    figure_only: int = 2
    combined: int = 34
    groups: int = 10
    members_per_group: int = 3
    canvas: int = 128
    scale_jitter: bool = True
    rotation_jitter: bool = True
    contrast_inversion: bool = False
    text_contamination: bool = False

    def __post_init__(self):
        if min(self.text_only, self.figure_only, self.combined, self.groups) < 0:
            raise ValueError("counts must be >= 0")
        if self.groups > 0 and self.members_per_group < 2:
            raise ValueError("groups need at least 2 members")


@dataclass
class SynthImage:
    image_id: str
    pixels: np.ndarray
    kind: str
    group_id: str | None = None
    annotations: dict = field(default_factory=dict)


@dataclass
class SynthCorpus:
    spec: SynthSpec
    distractors: list[SynthImage]
    groups: list[QueryGroup]
    queries: list[SynthImage]

    def images(self) -> dict[str, np.ndarray]:
        return {im.image_id: im.pixels for im in [*self.distractors, *self.queries]}

    def annotations(self) -> dict[str, dict]:
        return {
            im.image_id: {"kind": im.kind, "group_id": im.group_id, **im.annotations}
            for im in [*self.distractors, *self.queries]
        }

    def save(self, outdir: str | os.PathLike) -> None:
        outdir = os.fspath(outdir)
        os.makedirs(os.path.join(outdir, "corpus"), exist_ok=True)
        os.makedirs(os.path.join(outdir, "queries"), exist_ok=True)
        for im in self.distractors:
            with open(os.path.join(outdir, "corpus", im.image_id), "wb") as fh:
                fh.write(encode_png(im.pixels))
        for im in self.queries:
            with open(os.path.join(outdir, "queries", im.image_id), "wb") as fh:
                fh.write(encode_png(im.pixels))
        with open(os.path.join(outdir, "groups.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["group_id", "image_path"])
            for group in self.groups:
                for member in group.members:
                    writer.writerow([group.group_id, f"queries/{member}"])
        with open(os.path.join(outdir, "annotations.json"), "w") as fh:
            json.dump(
                {"spec": asdict(self.spec), "images": self.annotations()},
                fh, indent=1, sort_keys=True,
            )


def render_word(
    canvas: np.ndarray, word: str, x: int, y: int, scale: int, color: np.ndarray
) -> tuple[int, int, int, int]:
    """Draw a word at (x, y); returns its pixel bounds (x0, y0, x1, y1)."""
    cx = x
    for ch in word:
        rows = _FONT[ch].split("|")
        for r, row in enumerate(rows):
            for c, cell in enumerate(row):
                if cell == "#":
                    y0, x0 = y + r * scale, cx + c * scale
                    canvas[y0 : y0 + scale, x0 : x0 + scale] = color
        cx += (_GLYPH_W + 1) * scale
    return (x, y, cx - scale, y + _GLYPH_H * scale)


def word_extent(word: str, scale: int) -> tuple[int, int]:
    return (len(word) * (_GLYPH_W + 1) - 1) * scale, _GLYPH_H * scale


def _random_word(rng: np.random.Generator, min_len: int = 3, max_len: int = 7) -> str:
    letters = sorted(_FONT)
    n = int(rng.integers(min_len, max_len + 1))
    return "".join(letters[i] for i in rng.integers(0, len(letters), n))


def _draw_circle(canvas, rng, color):
    n = canvas.shape[0]
    cx, cy = rng.integers(n // 4, 3 * n // 4, 2)
    r = int(rng.integers(n // 10, n // 4))
    yy, xx = np.mgrid[0:n, 0:n]
    d2 = (xx - cx) ** 2 + (yy - cy) ** 2
    if rng.random() < 0.5:
        canvas[d2 <= r * r] = color
    else:
        inner = max(2, int(r * 0.6))
        canvas[(d2 <= r * r) & (d2 >= inner * inner)] = color


def _draw_polygon(canvas, rng, color):
    n = canvas.shape[0]
    cx, cy = rng.integers(n // 4, 3 * n // 4, 2)
    r = int(rng.integers(n // 8, n // 4))
    sides = int(rng.integers(3, 7))
    phase = rng.random() * 2 * np.pi
    angles = phase + 2 * np.pi * np.arange(sides) / sides
    vx = cx + r * np.cos(angles)
    vy = cy + r * np.sin(angles)
    yy, xx = np.mgrid[0 : canvas.shape[0], 0 : canvas.shape[1]]
    inside = np.ones(canvas.shape[:2], dtype=bool)
    for i in range(sides):
        j = (i + 1) % sides
        cross = (vx[j] - vx[i]) * (yy - vy[i]) - (vy[j] - vy[i]) * (xx - vx[i])
        inside &= cross >= 0
    canvas[inside] = color


def _draw_stroke(canvas, rng, color):
    n = canvas.shape[0]
    x0, y0, x1, y1 = rng.integers(n // 8, 7 * n // 8, 4)
    width = int(rng.integers(2, 6))
    yy, xx = np.mgrid[0:n, 0:n]
    dx, dy = x1 - x0, y1 - y0
    length2 = max(dx * dx + dy * dy, 1)
    t = np.clip(((xx - x0) * dx + (yy - y0) * dy) / length2, 0, 1)
    dist2 = (xx - (x0 + t * dx)) ** 2 + (yy - (y0 + t * dy)) ** 2
    canvas[dist2 <= width * width] = color


_PRIMITIVES = (_draw_circle, _draw_polygon, _draw_stroke)


def _blank(n: int) -> np.ndarray:
    return np.full((n, n, 3), 255, dtype=np.uint8)


def _render_figure(rng: np.random.Generator, n: int) -> np.ndarray:
    canvas = _blank(n)
    color = PALETTE[int(rng.integers(0, len(PALETTE)))]
    for _ in range(int(rng.integers(1, 4))):
        _PRIMITIVES[int(rng.integers(0, len(_PRIMITIVES)))](canvas, rng, color)
        if rng.random() < 0.3:
            color = PALETTE[int(rng.integers(0, len(PALETTE)))]
    # decorative dots give every mark some blob structure
    yy, xx = np.mgrid[0:n, 0:n]
    for _ in range(int(rng.integers(2, 6))):
        cx, cy = rng.integers(n // 6, 5 * n // 6, 2)
        r = int(rng.integers(2, 6))
        canvas[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = color
        if rng.random() < 0.4:
            color = PALETTE[int(rng.integers(0, len(PALETTE)))]
    return canvas


def _place_word(canvas, rng, word, scale, color, clear: bool = False) -> tuple[int, int, int, int] | None:
    """Draw a word at a random position; with clear=True, prefer a spot whose
    background is uniform (text beside the figure, not across it)."""
    n = canvas.shape[0]
    w, h = word_extent(word, scale)
    if w >= n - 2 or h >= n - 2:
        return None
    attempts = 25 if clear else 1
    x = y = 1
    for _ in range(attempts):
        x = int(rng.integers(1, n - w - 1))
        y = int(rng.integers(1, n - h - 1))
        region = canvas[y : y + h, x : x + w]
        if not clear or int(region.max()) - int(region.min()) < 10:
            break
    return render_word(canvas, word, x, y, scale, color)


def _render_text_mark(rng: np.random.Generator, n: int) -> tuple[np.ndarray, list]:
    canvas = _blank(n)
    bounds = []
    color = PALETTE[int(rng.integers(0, len(PALETTE)))]
    for _ in range(int(rng.integers(1, 3))):
        word = _random_word(rng)
        scale = int(rng.integers(2, 4))
        box = _place_word(canvas, rng, word, scale, color)
        if box:
            bounds.append(list(box))
    return canvas, bounds


def _render_combined(rng: np.random.Generator, n: int) -> tuple[np.ndarray, list]:
    canvas = _render_figure(rng, n)
    word = _random_word(rng)
    box = _place_word(canvas, rng, word, int(rng.integers(2, 4)), PALETTE[0])
    return canvas, [list(box)] if box else []


def _transform_member(
    base: np.ndarray,
    rng: np.random.Generator,
    spec: SynthSpec,
    force_invert: bool,
    used_words: set[str] | None = None,
) -> tuple[np.ndarray, dict]:
    img = base
    note: dict = {"scale": 1.0, "rotation": 0.0, "inverted": False, "text": None}
    n = spec.canvas
    if spec.scale_jitter:
        f = float(rng.uniform(0.7, 1.3))
        note["scale"] = round(f, 4)
        m = max(8, int(round(n * f)))
        scaled = resize_bilinear(img, m, m)
        img = _blank(n)
        if m <= n:
            off = (n - m) // 2
            img[off : off + m, off : off + m] = scaled
        else:
            off = (m - n) // 2
            img = scaled[off : off + n, off : off + n].copy()
    if spec.rotation_jitter:
        deg = float(rng.uniform(-15, 15))
        note["rotation"] = round(deg, 4)
        img = ndimage.rotate(
            img, deg, axes=(1, 0), reshape=False, order=1, mode="constant", cval=255
        ).astype(np.uint8)
    if force_invert or (spec.contrast_inversion and rng.random() < 0.5):
        note["inverted"] = True
        img = invert_contrast(img)
    if spec.text_contamination:
        img = img.copy()
        color = PALETTE[0] if not note["inverted"] else np.array([255, 255, 255], np.uint8)
        words = []
        bounds = []
        for length_range, scale in (((5, 7), 3), ((4, 6), 2)):
            word = _random_word(rng, *length_range)
            while used_words is not None and word in used_words:
                word = _random_word(rng, *length_range)
            if used_words is not None:
                used_words.add(word)
            box = _place_word(img, rng, word, scale, color, clear=True)
            if box is None:
                box = _place_word(img, rng, word, 2, color, clear=True)
            if box:
                words.append(word)
                bounds.append(list(box))
        if words:
            note["text"] = " ".join(words)
            note["text_bounds"] = bounds
    return img, note


def standard_benchmark_spec(seed: int = 0, distractors: int = 200, groups: int = 10) -> SynthSpec:
    """The default benchmark recipe: realistic type mix, scale and rotation
    jitter on, inversion and contamination off."""
    text = round(distractors * 0.63)
    figure = max(1, round(distractors * 0.02))
    return SynthSpec(
        seed=seed,
        text_only=text,
        figure_only=figure,
        combined=distractors - text - figure,
        groups=groups,
        members_per_group=3,
    )


def synth_corpus(spec: SynthSpec) -> SynthCorpus:
    """Generate distractors, query groups and annotations from a seed."""
    rng = np.random.default_rng(spec.seed)
    n = spec.canvas

    distractors = []
    plan = (
        [("text", _render_text_mark)] * spec.text_only
        + [("figure", None)] * spec.figure_only
        + [("combined", _render_combined)] * spec.combined
    )
    for i, (kind, renderer) in enumerate(plan):
        if kind == "figure":
            pixels, bounds = _render_figure(rng, n), []
        else:
            pixels, bounds = renderer(rng, n)
        distractors.append(
            SynthImage(
                image_id=f"d{i:05d}.png",
                pixels=pixels,
                kind=kind,
                annotations={"text_bounds": bounds},
            )
        )

    groups = []
    queries = []
    for g in range(spec.groups):
        gid = f"g{g:03d}"
        base_kind = "figure" if (spec.text_contamination or rng.random() < 0.7) else "combined"
        if base_kind == "figure":
            base, bounds = _render_figure(rng, n), []
        else:
            base, bounds = _render_combined(rng, n)
        member_ids = []
        used_words: set[str] = set()
        for m in range(spec.members_per_group):
            mid = f"{gid}_m{m}.png"
            member_ids.append(mid)
            if m == 0 and not spec.text_contamination:
                pixels = base.copy()
                note = {"scale": 1.0, "rotation": 0.0, "inverted": False, "text": None}
            elif m == 1 and spec.contrast_inversion:
                # the designated exact contrast-inverted duplicate
                pixels = invert_contrast(base)
                note = {"scale": 1.0, "rotation": 0.0, "inverted": True, "text": None}
            else:
                pixels, note = _transform_member(
                    base, rng, spec, force_invert=False, used_words=used_words
                )
            queries.append(
                SynthImage(
                    image_id=mid,
                    pixels=pixels,
                    kind=base_kind,
                    group_id=gid,
                    annotations={"member": m, "transform": note, "text_bounds": bounds},
                )
            )
        groups.append(QueryGroup(gid, member_ids))

    return SynthCorpus(spec, distractors, groups, queries)
