"""Visual vocabulary: k-means training, quantization and TF-IDF weighting."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, FormatError, TooFewSamples

_CODEBOOK_MAGIC = "TMCB1"


@dataclass(frozen=True)
class Codebook:
    """k-means centroids over a descriptor family."""

    feature_id: str
    centroids: np.ndarray  # (k, dim)
    seed: int

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


@dataclass(frozen=True)
class BoVWVector:
    """Sparse tf-idf weighted word vector with its L2 norm cached."""

    words: np.ndarray    # sorted int64 word ids
    weights: np.ndarray  # positive float64 weights
    norm: float

    @classmethod
    def from_pairs(cls, pairs: dict[int, float]) -> "BoVWVector":
        items = sorted((w, x) for w, x in pairs.items() if x != 0.0)
        words = np.array([w for w, _ in items], dtype=np.int64)
        weights = np.array([x for _, x in items], dtype=np.float64)
        return cls(words, weights, float(np.sqrt((weights**2).sum())))

    def densify(self, k: int) -> np.ndarray:
        out = np.zeros(k)
        out[self.words] = self.weights
        return out


@dataclass
class IdfModel:
    """Document frequencies and ln(N/df) inverse document frequencies."""

    doc_count: int
    doc_freq: dict[int, int] = field(default_factory=dict)

    def idf(self, word: int) -> float:
        df = self.doc_freq.get(word, 0)
        if df == 0 or df == self.doc_count:
            return 0.0
        return float(np.log(self.doc_count / df))


def _chunked_assign(samples: np.ndarray, centroids: np.ndarray, chunk: int = 8192):
    """Nearest-centroid ids and squared distances, lowest id winning ties."""
    m = samples.shape[0]
    assign = np.empty(m, dtype=np.intp)
    dist2 = np.empty(m)
    c_sq = (centroids**2).sum(axis=1)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        block = samples[lo:hi]
        d2 = (block**2).sum(axis=1)[:, None] - 2.0 * block @ centroids.T + c_sq[None, :]
        assign[lo:hi] = np.argmin(d2, axis=1)
        dist2[lo:hi] = np.maximum(d2[np.arange(hi - lo), assign[lo:hi]], 0.0)
    return assign, dist2


def _kmeans_pp_init(samples: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    m = samples.shape[0]
    centroids = np.empty((k, samples.shape[1]))
    centroids[0] = samples[rng.integers(m)]
    d2 = ((samples - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[i] = samples[rng.integers(m)]
            continue
        centroids[i] = samples[rng.choice(m, p=d2 / total)]
        d2 = np.minimum(d2, ((samples - centroids[i]) ** 2).sum(axis=1))
    return centroids


def train_kmeans(
    samples: np.ndarray,
    k: int,
    max_iters: int = 50,
    seed: int = 0,
    feature_id: str = "generic",
    history: list[float] | None = None,
) -> Codebook:
    """Lloyd's k-means with k-means++ seeding, deterministic for a fixed seed.

    Runs until the assignment reaches a fixpoint or max_iters; empty clusters
    are reseeded to the sample farthest from its assigned centroid.  Pass a
    list as `history` to capture the objective after each assignment step.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] < 1:
        raise DimMismatch("samples must be an (m, dim) matrix")
    m = samples.shape[0]
    if m < k:
        raise TooFewSamples(f"{m} samples < k={k}")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(samples, k, rng)
    prev_assign = None
    for _ in range(max_iters):
        assign, dist2 = _chunked_assign(samples, centroids)
        if history is not None:
            history.append(float(dist2.sum()))
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        prev_assign = assign

        counts = np.bincount(assign, minlength=k)
        sums = np.zeros_like(centroids)
        np.add.at(sums, assign, samples)
        nonempty = counts > 0
        centroids[nonempty] = sums[nonempty] / counts[nonempty, None]

        empties = np.flatnonzero(~nonempty)
        if empties.size:
            order = np.argsort(-dist2, kind="stable")
            for slot, j in zip(empties, order[: empties.size]):
                centroids[slot] = samples[j]

    # round-trip through float32 so a trained codebook and a reloaded one
    # quantize identically
    centroids = centroids.astype(np.float32).astype(np.float64)
    return Codebook(feature_id, centroids, seed)


def assign_words(vectors: np.ndarray, cb: Codebook) -> np.ndarray:
    """Nearest-centroid word id per row (Euclidean, lowest id wins ties)."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] != cb.dim:
        raise DimMismatch(f"descriptor dim {vectors.shape} vs codebook dim {cb.dim}")
    if vectors.shape[0] == 0:
        return np.empty(0, dtype=np.intp)
    assign, _ = _chunked_assign(vectors, cb.centroids)
    return assign


def quantize(dset, cb: Codebook) -> dict[int, int]:
    """Aggregate nearest-word counts for a DescriptorSet (or raw matrix)."""
    vectors = dset.vectors if hasattr(dset, "vectors") else dset
    words = assign_words(vectors, cb)
    counts = np.bincount(words, minlength=0)
    return {int(w): int(c) for w, c in enumerate(counts) if c > 0}


def compute_idf(corpus_counts: list[dict[int, int]]) -> IdfModel:
    """Document frequencies over per-document term-count maps."""
    df: dict[int, int] = {}
    for counts in corpus_counts:
        for word in counts:
            df[word] = df.get(word, 0) + 1
    return IdfModel(doc_count=len(corpus_counts), doc_freq=df)


def tfidf_weight(counts: dict[int, int], idf: IdfModel) -> BoVWVector:
    """weight(w) = (count(w) / total) * idf(w); zero-weight entries dropped."""
    total = sum(counts.values())
    if total == 0:
        return BoVWVector.from_pairs({})
    pairs = {w: (c / total) * idf.idf(w) for w, c in counts.items()}
    return BoVWVector.from_pairs(pairs)


def save_codebook(cb: Codebook, path: str | os.PathLike) -> None:
    """Text header (magic, feature_id, k, dim, seed) + float32 centroid payload."""
    header = f"{_CODEBOOK_MAGIC} {cb.feature_id} {cb.k} {cb.dim} {cb.seed}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(cb.centroids.astype("<f4").tobytes(order="C"))


def load_codebook(path: str | os.PathLike) -> Codebook:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if len(header) != 5 or header[0] != _CODEBOOK_MAGIC:
            raise FormatError(f"bad codebook header in {path}")
        _, feature_id, k, dim, seed = header
        payload = fh.read()
    k, dim = int(k), int(dim)
    expected = k * dim * 4
    if len(payload) != expected:
        raise FormatError(f"codebook payload is {len(payload)} bytes, expected {expected}")
    centroids = np.frombuffer(payload, dtype="<f4").reshape(k, dim).astype(np.float64)
    return Codebook(feature_id, centroids, int(seed))


def pool_samples(
    matrices: list[np.ndarray], limit: int = 500_000, seed: int = 0
) -> np.ndarray:
    """Stack descriptor matrices, subsampling to `limit` rows with the run seed."""
    stacked = np.vstack([m for m in matrices if m.shape[0]]) if matrices else np.zeros((0, 0))
    if stacked.shape[0] <= limit:
        return stacked
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(stacked.shape[0], size=limit, replace=False))
    return stacked[keep]
