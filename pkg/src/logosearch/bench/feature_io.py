"""Feature-matrix files: the exchange format between pipeline stages.

Layout: one text header line `TMFEAT1 <feature_id> <n_rows> <dim>`, then
n_rows doc-id lines, then the row-major little-endian float32 payload.
Keypoint descriptor sets use the same container with a `.kp.csv` sidecar
holding x, y, scale, orientation per row.
"""

from __future__ import annotations

import os

import numpy as np

from ..descriptors import DescriptorSet, Keypoint
from ..errors import DimMismatch, FormatError
from ..index import DenseIndex

MAGIC = "TMFEAT1"


def write_feature_matrix(
    path: str | os.PathLike, feature_id: str, doc_ids: list[str], matrix: np.ndarray
) -> None:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != len(doc_ids):
        raise DimMismatch(f"matrix {matrix.shape} does not match {len(doc_ids)} doc ids")
    with open(path, "wb") as fh:
        fh.write(f"{MAGIC} {feature_id} {len(doc_ids)} {matrix.shape[1]}\n".encode())
        for doc in doc_ids:
            fh.write(f"{doc}\n".encode())
        fh.write(matrix.astype("<f4").tobytes(order="C"))


def read_feature_matrix(path: str | os.PathLike) -> tuple[str, list[str], np.ndarray]:
    """Returns (feature_id, doc_ids, float32 matrix)."""
    with open(path, "rb") as fh:
        header = fh.readline().decode().split()
        if len(header) != 4 or header[0] != MAGIC:
            raise FormatError(f"bad feature-matrix header in {path}")
        _, feature_id, n_rows, dim = header
        n_rows, dim = int(n_rows), int(dim)
        doc_ids = [fh.readline().decode().rstrip("\n") for _ in range(n_rows)]
        if any(not d for d in doc_ids):
            raise FormatError(f"{path} ended before {n_rows} doc-id lines")
        payload = fh.read()
    if len(payload) != n_rows * dim * 4:
        raise FormatError(
            f"payload is {len(payload)} bytes, expected {n_rows * dim * 4} for {n_rows}x{dim}"
        )
    matrix = np.frombuffer(payload, dtype="<f4").reshape(n_rows, dim).copy()
    return feature_id, doc_ids, matrix


def write_descriptor_set(path: str | os.PathLike, dset: DescriptorSet) -> None:
    """Feature matrix with row ids 0..n-1 plus the keypoint sidecar."""
    write_feature_matrix(path, dset.feature_id, [str(i) for i in range(len(dset))], dset.vectors)
    with open(f"{os.fspath(path)}.kp.csv", "w", encoding="ascii") as fh:
        fh.write("x,y,scale,orientation\n")
        for kp in dset.keypoints:
            fh.write(f"{kp.x:.6f},{kp.y:.6f},{kp.scale:.6f},{kp.orientation:.6f}\n")


def read_descriptor_set(path: str | os.PathLike) -> DescriptorSet:
    feature_id, _ids, matrix = read_feature_matrix(path)
    keypoints = []
    with open(f"{os.fspath(path)}.kp.csv", encoding="ascii") as fh:
        next(fh)
        for line in fh:
            x, y, scale, orientation = map(float, line.split(","))
            keypoints.append(Keypoint(x, y, scale, orientation))
    if len(keypoints) != matrix.shape[0]:
        raise FormatError(f"sidecar rows {len(keypoints)} != matrix rows {matrix.shape[0]}")
    return DescriptorSet(feature_id, keypoints, matrix.astype(np.float64))


def import_external_features(path: str | os.PathLike) -> DenseIndex:
    """Load externally computed per-document vectors as a cosine-queryable index.

    The result is interchangeable with natively extracted dense features,
    including as a fusion input.
    """
    feature_id, doc_ids, matrix = read_feature_matrix(path)
    if len(set(doc_ids)) != len(doc_ids):
        raise FormatError("duplicate doc ids in feature matrix")
    order = sorted(range(len(doc_ids)), key=lambda i: doc_ids[i])
    return DenseIndex(
        feature_id,
        np.array([doc_ids[i] for i in order]),
        matrix[order],
        normalization="none",
    )
