"""Distance metrics and vector normalizations behind one dispatch point.

All metrics are distances: lower means more similar.  The cosine measure is
therefore exposed as 1 - similarity, and the intersection measures as
1 - (histogram overlap).  The names accepted by `distance` and `normalize`
are the exact strings used in CLI flags and config files.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, InvalidParam

METRIC_NAMES = ("euclidean", "cosine", "intersection_l1", "intersection_l2", "quadratic", "manhattan")
NORMALIZATION_NAMES = ("l1", "l2", "none")


def normalize(v: np.ndarray, scheme: str) -> np.ndarray:
    """L1 or L2 normalization; the zero vector is returned unchanged."""
    v = np.asarray(v, dtype=np.float64)
    if scheme == "none":
        return v.copy()
    if scheme == "l1":
        denom = np.abs(v).sum(axis=-1, keepdims=True)
    elif scheme == "l2":
        denom = np.sqrt((v * v).sum(axis=-1, keepdims=True))
    else:
        raise InvalidParam(f"unknown normalization {scheme!r}")
    return np.where(denom > 0, v / np.where(denom > 0, denom, 1.0), v)


def distance(p: np.ndarray, q: np.ndarray, metric: str, A: np.ndarray | None = None) -> float:
    """Distance between two equal-length vectors under the named metric.

    `quadratic` needs a symmetric bin-similarity matrix A; the intersection
    variants expect histograms normalized under the matching scheme.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimMismatch(f"vector dims differ: {p.shape} vs {q.shape}")

    if metric == "euclidean":
        d = p - q
        return float(np.sqrt(np.dot(d, d)))
    if metric == "manhattan":
        return float(np.abs(p - q).sum())
    if metric == "cosine":
        np_, nq = np.linalg.norm(p), np.linalg.norm(q)
        if np_ == 0 and nq == 0:
            return 0.0
        if np_ == 0 or nq == 0:
            return 1.0
        return float(1.0 - np.dot(p, q) / (np_ * nq))
    if metric == "intersection_l1":
        lo = min(np.abs(p).sum(), np.abs(q).sum())
        if lo == 0:
            return 0.0 if np.abs(p - q).sum() == 0 else 1.0
        return float(1.0 - np.minimum(p, q).sum() / lo)
    if metric == "intersection_l2":
        return float(1.0 - np.sqrt(np.minimum(p * p, q * q).sum()))
    if metric == "quadratic":
        if A is None:
            raise InvalidParam("quadratic distance needs a bin-similarity matrix A")
        A = np.asarray(A, dtype=np.float64)
        if A.shape != (p.shape[0], p.shape[0]):
            raise DimMismatch(f"A has shape {A.shape}, expected {(p.shape[0],) * 2}")
        d = p - q
        return float(d @ A @ d)
    raise InvalidParam(f"unknown metric {metric!r}")


def distance_matrix(Q: np.ndarray, q: np.ndarray, metric: str, A: np.ndarray | None = None) -> np.ndarray:
    """Distances from one query vector q to every row of Q (vectorized)."""
    Q = np.asarray(Q, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[1] != q.shape[0]:
        raise DimMismatch(f"matrix is {Q.shape}, query is {q.shape}")

    if metric == "euclidean":
        d = Q - q
        return np.sqrt((d * d).sum(axis=1))
    if metric == "manhattan":
        return np.abs(Q - q).sum(axis=1)
    if metric == "cosine":
        nq = np.linalg.norm(q)
        nr = np.linalg.norm(Q, axis=1)
        out = np.ones(Q.shape[0])
        if nq == 0:
            out[nr == 0] = 0.0
            return out
        ok = nr > 0
        out[ok] = 1.0 - (Q[ok] @ q) / (nr[ok] * nq)
        return out
    if metric == "intersection_l1":
        lo = np.minimum(np.abs(Q).sum(axis=1), np.abs(q).sum())
        inter = np.minimum(Q, q).sum(axis=1)
        out = np.where(lo > 0, 1.0 - inter / np.where(lo > 0, lo, 1.0), 1.0)
        out[(lo == 0) & (np.abs(Q - q).sum(axis=1) == 0)] = 0.0
        return out
    if metric == "intersection_l2":
        return 1.0 - np.sqrt(np.minimum(Q * Q, q * q).sum(axis=1))
    if metric == "quadratic":
        if A is None:
            raise InvalidParam("quadratic distance needs a bin-similarity matrix A")
        d = Q - q
        return ((d @ A) * d).sum(axis=1)
    raise InvalidParam(f"unknown metric {metric!r}")


def hsv72_similarity_matrix() -> np.ndarray:
    """Default bin-similarity matrix A for the 72-bin HSV histogram.

    Bin centers are mapped into HSV cone coordinates
    (s*v*cos h, s*v*sin h, v) and A[i][j] = 1 - |c_i - c_j| / max |c_i - c_j|,
    giving a symmetric matrix with unit diagonal and entries in [0, 1].
    """
    from .features.color import hsv72_bin_centers

    centers = hsv72_bin_centers()
    h = np.deg2rad(centers[:, 0])
    sv = centers[:, 1] * centers[:, 2]
    pts = np.stack([sv * np.cos(h), sv * np.sin(h), centers[:, 2]], axis=1)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    return 1.0 - d / d.max()
