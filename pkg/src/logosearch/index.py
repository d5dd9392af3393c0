"""Corpus indexes: dense descriptor scan and inverted file for BoVW vectors.

Rankings are always sorted ascending by (score, doc id); the tie-averaging
rule of the evaluation protocol is applied separately by the bench module.
Stored weights are 32-bit floats, but every dot product and norm accumulates
in 64-bit.

Scores are rounded to 9 decimals before ranking: mathematically tied
documents can land a final bit apart depending on summation order, and the
rounding makes such ties exact on every evaluation path (dense scan,
posting-list accumulation, injected extras).
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .codebook import BoVWVector
from .errors import DimMismatch, DuplicateDoc, FormatError
from .metrics import distance_matrix

_MAGIC = "TMIDX1"


@dataclass
class Ranking:
    """Ordered retrieval result; position i is rank i + 1."""

    query_id: str
    doc_ids: np.ndarray
    scores: np.ndarray

    def __len__(self) -> int:
        return len(self.doc_ids)

    def top(self, m: int) -> "Ranking":
        return Ranking(self.query_id, self.doc_ids[:m], self.scores[:m])


def _sorted_ranking(query_id: str, doc_ids: np.ndarray, scores: np.ndarray) -> Ranking:
    scores = np.round(scores, 9)
    order = np.lexsort((doc_ids, scores))
    return Ranking(query_id, doc_ids[order], scores[order])


@dataclass
class DenseIndex:
    """All documents' fixed-length descriptors in one (N, dim) matrix."""

    feature_id: str
    doc_ids: np.ndarray          # sorted unicode array
    matrix: np.ndarray           # float32, rows follow doc_ids
    normalization: str = "none"
    seed: int = 0

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def query(
        self,
        q: np.ndarray,
        metric: str = "cosine",
        top_m: int | None = None,
        A: np.ndarray | None = None,
        extra: dict[str, np.ndarray] | None = None,
        query_id: str = "query",
    ) -> Ranking:
        q = np.asarray(q, dtype=np.float64)
        if self.n_docs and q.shape[0] != self.dim:
            raise DimMismatch(f"query dim {q.shape[0]} != index dim {self.dim}")
        ids = self.doc_ids
        mat = self.matrix.astype(np.float64)
        if extra:
            extra_ids = sorted(extra)
            ids = np.concatenate([ids, np.array(extra_ids)]) if len(ids) else np.array(extra_ids)
            rows = np.stack([np.asarray(extra[i], dtype=np.float64) for i in extra_ids])
            if rows.shape[1] != q.shape[0]:
                raise DimMismatch("extra document dim mismatch")
            mat = np.vstack([mat, rows]) if mat.size else rows
        if len(ids) == 0 or (top_m is not None and top_m <= 0):
            return Ranking(query_id, np.array([], dtype=str), np.array([]))
        scores = distance_matrix(mat, q, metric, A=A)
        ranking = _sorted_ranking(query_id, ids, scores)
        return ranking if top_m is None else ranking.top(top_m)


def build_dense(
    descriptors,
    feature_id: str,
    normalization: str = "none",
    seed: int = 0,
) -> DenseIndex:
    """Assemble per-document vectors into a DenseIndex in doc-id order.

    `descriptors` is a doc id -> vector mapping or an iterable of
    (doc id, vector) pairs; repeating an id raises DuplicateDoc.
    """
    if not hasattr(descriptors, "keys"):
        pairs = list(descriptors)
        descriptors = dict(pairs)
        if len(descriptors) != len(pairs):
            raise DuplicateDoc("duplicate document ids")
    ids = sorted(descriptors)
    if not ids:
        return DenseIndex(feature_id, np.array([], dtype="U1"), np.zeros((0, 0), np.float32),
                          normalization, seed)
    dims = {np.asarray(descriptors[i]).shape[0] for i in ids}
    if len(dims) != 1:
        raise DimMismatch(f"mixed descriptor dims {sorted(dims)}")
    matrix = np.stack([np.asarray(descriptors[i], dtype=np.float32) for i in ids])
    return DenseIndex(feature_id, np.array(ids), matrix, normalization, seed)


def query_dense(idx: DenseIndex, q, metric: str, top_m: int | None = None, **kw) -> Ranking:
    values = q.values if hasattr(q, "values") else q
    return idx.query(values, metric=metric, top_m=top_m, **kw)


@dataclass
class InvertedIndex:
    """Per-word posting lists of (doc position, tf-idf weight)."""

    feature_id: str
    k: int
    doc_ids: np.ndarray
    postings: list[tuple[np.ndarray, np.ndarray]] = field(repr=False, default_factory=list)
    norms: np.ndarray = field(repr=False, default_factory=lambda: np.array([]))
    normalization: str = "none"
    seed: int = 0

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def query(
        self,
        q: BoVWVector,
        top_m: int | None = None,
        extra: dict[str, BoVWVector] | None = None,
        query_id: str = "query",
    ) -> Ranking:
        if len(q.words) and int(q.words.max()) >= self.k:
            raise DimMismatch(f"query word id {int(q.words.max())} >= k={self.k}")
        acc = np.zeros(self.n_docs)
        if q.norm > 0:
            for word, qw in zip(q.words.tolist(), q.weights.tolist()):
                idx_arr, w_arr = self.postings[word]
                if idx_arr.size:
                    acc[idx_arr] += qw * w_arr.astype(np.float64)
        scores = np.ones(self.n_docs)
        matched = (acc > 0) & (self.norms > 0)
        if q.norm > 0:
            scores[matched] = 1.0 - acc[matched] / (q.norm * self.norms[matched])

        ids = self.doc_ids
        if extra:
            extra_ids = sorted(extra)
            extra_scores = np.array([_sparse_cosine_distance(q, extra[i]) for i in extra_ids])
            ids = np.concatenate([ids, np.array(extra_ids)]) if len(ids) else np.array(extra_ids)
            scores = np.concatenate([scores, extra_scores])
        if len(ids) == 0 or (top_m is not None and top_m <= 0):
            return Ranking(query_id, np.array([], dtype=str), np.array([]))
        ranking = _sorted_ranking(query_id, ids, scores)
        return ranking if top_m is None else ranking.top(top_m)


def _sparse_cosine_distance(a: BoVWVector, b: BoVWVector) -> float:
    if a.norm == 0 or b.norm == 0:
        return 0.0 if (a.norm == 0 and b.norm == 0) else 1.0
    dot = 0.0
    pos = {int(w): float(x) for w, x in zip(b.words, b.weights.astype(np.float32).astype(np.float64))}
    for w, x in zip(a.words.tolist(), a.weights.tolist()):
        other = pos.get(int(w))
        if other is not None:
            dot += x * other
    bnorm = float(np.sqrt((b.weights.astype(np.float32).astype(np.float64) ** 2).sum()))
    return 1.0 - dot / (a.norm * bnorm) if bnorm > 0 else 1.0


def build_inverted(
    vectors: dict[str, BoVWVector],
    k: int,
    feature_id: str = "bovw",
    normalization: str = "tfidf",
    seed: int = 0,
) -> InvertedIndex:
    """Postings per word in doc-id order; per-doc norms over float32 weights."""
    ids = sorted(vectors)
    word_docs: list[list[int]] = [[] for _ in range(k)]
    word_weights: list[list[float]] = [[] for _ in range(k)]
    norms = np.zeros(len(ids))
    for pos, doc in enumerate(ids):
        vec = vectors[doc]
        if len(vec.words) and int(vec.words.max()) >= k:
            raise DimMismatch(f"doc {doc} has word id >= k={k}")
        w32 = vec.weights.astype(np.float32)
        norms[pos] = np.sqrt((w32.astype(np.float64) ** 2).sum())
        for word, weight in zip(vec.words.tolist(), w32.tolist()):
            word_docs[word].append(pos)
            word_weights[word].append(weight)
    postings = [
        (np.array(d, dtype=np.uint32), np.array(w, dtype=np.float32))
        for d, w in zip(word_docs, word_weights)
    ]
    return InvertedIndex(feature_id, k, np.array(ids) if ids else np.array([], dtype="U1"),
                         postings, norms, normalization, seed)


def query_inverted(idx: InvertedIndex, q: BoVWVector, top_m: int | None = None, **kw) -> Ranking:
    return idx.query(q, top_m=top_m, **kw)


def save_index(index: DenseIndex | InvertedIndex, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        if isinstance(index, DenseIndex):
            fh.write(f"{_MAGIC} dense {index.feature_id} {index.dim} {index.n_docs} "
                     f"{index.normalization} {index.seed}\n".encode())
            for doc in index.doc_ids:
                fh.write(f"{doc}\n".encode())
            fh.write(index.matrix.astype("<f4").tobytes(order="C"))
        else:
            fh.write(f"{_MAGIC} inverted {index.feature_id} {index.k} {index.n_docs} "
                     f"{index.normalization} {index.seed}\n".encode())
            for doc in index.doc_ids:
                fh.write(f"{doc}\n".encode())
            buf = io.BytesIO()
            for idx_arr, w_arr in index.postings:
                buf.write(np.uint32(idx_arr.size).tobytes())
                buf.write(idx_arr.astype("<u4").tobytes())
                buf.write(w_arr.astype("<f4").tobytes())
            buf.write(index.norms.astype("<f8").tobytes())
            fh.write(buf.getvalue())


def load_index(path: str | os.PathLike) -> DenseIndex | InvertedIndex:
    with open(path, "rb") as fh:
        header = fh.readline().decode().split()
        if len(header) != 7 or header[0] != _MAGIC:
            raise FormatError(f"bad index header in {path}")
        _, kind, feature_id, size, n_docs, normalization, seed = header
        size, n_docs, seed = int(size), int(n_docs), int(seed)
        doc_ids = np.array([fh.readline().decode().rstrip("\n") for _ in range(n_docs)])
        payload = fh.read()

    if kind == "dense":
        expected = n_docs * size * 4
        if len(payload) != expected:
            raise FormatError(f"dense payload is {len(payload)} bytes, expected {expected}")
        matrix = np.frombuffer(payload, dtype="<f4").reshape(n_docs, size).copy()
        return DenseIndex(feature_id, doc_ids, matrix, normalization, seed)
    if kind == "inverted":
        postings = []
        off = 0
        for _ in range(size):
            (count,) = np.frombuffer(payload, dtype="<u4", count=1, offset=off)
            off += 4
            idx_arr = np.frombuffer(payload, dtype="<u4", count=int(count), offset=off).copy()
            off += 4 * int(count)
            w_arr = np.frombuffer(payload, dtype="<f4", count=int(count), offset=off).copy()
            off += 4 * int(count)
            postings.append((idx_arr, w_arr))
        norms = np.frombuffer(payload, dtype="<f8", count=n_docs, offset=off).copy()
        return InvertedIndex(feature_id, size, doc_ids, postings, norms, normalization, seed)
    raise FormatError(f"unknown index kind {kind!r}")
