"""Image decoding, preprocessing and color-space conversion.

Images are plain numpy arrays: an RGB image is a (H, W, 3) uint8 array in
row-major order, a gray image is a (H, W) uint8 array.  All functions here
are pure and safe to call from any number of workers.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, UnsupportedFormat

# Rec. 601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])

_JPEG_MAGIC = b"\xff\xd8\xff"
_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")


def decode_image(data: bytes) -> np.ndarray:
    """Decode a JPEG or PNG byte stream into a (H, W, 3) uint8 RGB array.

    Grayscale and palette sources are expanded to three channels.
    Raises UnsupportedFormat for other file types and DecodeError for
    malformed or truncated streams.
    """
    if not (data.startswith(_JPEG_MAGIC) or data.startswith(_PNG_MAGIC)):
        raise UnsupportedFormat("expected a JPEG or PNG stream")
    try:
        with Image.open(io.BytesIO(data)) as img:
            img.load()
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DecodeError(f"decoded to unexpected shape {arr.shape}")
    return arr


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Read and decode one image file."""
    with open(path, "rb") as fh:
        return decode_image(fh.read())


def encode_png(img: np.ndarray) -> bytes:
    """Encode an RGB or gray array as PNG bytes (deterministic for fixed input)."""
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img, dtype=np.uint8)).save(buf, format="PNG")
    return buf.getvalue()


def to_gray(img: np.ndarray) -> np.ndarray:
    """Convert (H, W, 3) RGB to (H, W) uint8 luma: round(0.299R + 0.587G + 0.114B)."""
    luma = np.rint(np.asarray(img, dtype=np.float64) @ _LUMA)
    return np.clip(luma, 0, 255).astype(np.uint8)


def rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    """Standard hexcone RGB -> HSV conversion.

    Accepts a single (3,) pixel or any (..., 3) array with channels in
    [0, 255].  Returns float64 with h in degrees [0, 360), s and v in [0, 1].
    h is defined as 0 where s == 0.
    """
    arr = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    v = arr.max(axis=-1)
    delta = v - arr.min(axis=-1)
    s = np.where(v > 0, delta / np.where(v > 0, v, 1.0), 0.0)

    with np.errstate(invalid="ignore", divide="ignore"):
        safe = np.where(delta > 0, delta, 1.0)
        h = np.select(
            [delta == 0, v == r, v == g],
            [0.0, (g - b) / safe, (b - r) / safe + 2.0],
            default=(r - g) / safe + 4.0,
        )
    h = (h * 60.0) % 360.0
    return np.stack([h, s, v], axis=-1)


def resize_bilinear(img: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resize with pixel centers at i + 0.5.

    Source coordinates are (dst + 0.5) * size_in / size_out - 0.5, clamped to
    the valid range, so resizing to the same dimensions is an exact identity
    and constant images stay constant.
    """
    if new_w < 1 or new_h < 1:
        raise ValueError("target dimensions must be >= 1")
    arr = np.asarray(img)
    h, w = arr.shape[:2]
    if (new_w, new_h) == (w, h):
        return arr.copy()

    src_x = np.clip((np.arange(new_w) + 0.5) * (w / new_w) - 0.5, 0, w - 1)
    src_y = np.clip((np.arange(new_h) + 0.5) * (h / new_h) - 0.5, 0, h - 1)
    x0 = np.floor(src_x).astype(np.intp)
    y0 = np.floor(src_y).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    tx = (src_x - x0)[None, :]
    ty = (src_y - y0)[:, None]
    if arr.ndim == 3:
        tx = tx[..., None]
        ty = ty[..., None]

    f = arr.astype(np.float64)
    top = f[y0[:, None], x0[None, :]] * (1 - tx) + f[y0[:, None], x1[None, :]] * tx
    bot = f[y1[:, None], x0[None, :]] * (1 - tx) + f[y1[:, None], x1[None, :]] * tx
    out = top * (1 - ty) + bot * ty
    if np.issubdtype(arr.dtype, np.integer):
        return np.clip(np.rint(out), 0, 255).astype(arr.dtype)
    return out


def invert_contrast(gray: np.ndarray) -> np.ndarray:
    """Map every pixel p to 255 - p."""
    return (255 - np.asarray(gray, dtype=np.int64)).astype(np.uint8)


def _strip_once(img: np.ndarray, tol: float) -> np.ndarray | None:
    """One border-stripping pass; None when everything is background."""
    luma = to_gray(img).astype(np.float64) if img.ndim == 3 else np.asarray(img, dtype=np.float64)
    bg = np.abs(luma - luma[0, 0]) <= tol
    keep_rows = ~bg.all(axis=1)
    keep_cols = ~bg.all(axis=0)
    if not keep_rows.any() or not keep_cols.any():
        return None
    r0, r1 = np.flatnonzero(keep_rows)[[0, -1]]
    c0, c1 = np.flatnonzero(keep_cols)[[0, -1]]
    return img[r0 : r1 + 1, c0 : c1 + 1]


def autocrop(img: np.ndarray, background_tolerance: float = 8) -> np.ndarray:
    """Crop away uniform borders matching the corner-pixel color.

    Border rows/columns whose luma all lies within `background_tolerance` of
    the top-left corner pixel are removed, repeatedly until a fixpoint.  A
    pass that would leave nothing returns the image from before that pass,
    which also makes the operation idempotent on all-background inputs.
    """
    cur = np.asarray(img)
    while True:
        nxt = _strip_once(cur, background_tolerance)
        if nxt is None:
            return cur
        if nxt.shape == cur.shape:
            return nxt
        cur = nxt


def ingest_corpus(root: str | os.PathLike) -> list[tuple[str, str]]:
    """Walk a directory tree and list (image_id, absolute_path) pairs.

    The image id is the relative POSIX path; the listing is sorted by id so
    corpus order never depends on filesystem traversal order.
    """
    root = os.fspath(root)
    found = []
    for dirpath, _dirnames, filenames in os.walk(root):
        for name in filenames:
            if name.lower().endswith(IMAGE_EXTENSIONS):
                full = os.path.join(dirpath, name)
                rel = os.path.relpath(full, root).replace(os.sep, "/")
                found.append((rel, full))
    return sorted(found)
