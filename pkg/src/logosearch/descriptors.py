"""Descriptor container types shared by the feature extractors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class DenseDescriptor:
    """One fixed-length global feature vector for one image."""

    feature_id: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 1:
            raise ValueError("descriptor values must be a 1-D vector")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("descriptor values must be finite")

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Keypoint:
    """A sub-pixel image location with a scale and a reference orientation."""

    x: float
    y: float
    scale: float
    orientation: float = 0.0


@dataclass
class DescriptorSet:
    """Variable-count keypoint descriptors for one image.

    `vectors` is an (n, dim) float matrix with one row per keypoint.
    """

    feature_id: str
    keypoints: list[Keypoint] = field(default_factory=list)
    vectors: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be an (n, dim) matrix")
        if self.vectors.shape[0] != len(self.keypoints):
            raise ValueError("row count must match keypoint count")
        if self.vectors.size and not np.all(np.isfinite(self.vectors)):
            raise ValueError("descriptor rows must be finite")

    def __len__(self) -> int:
        return len(self.keypoints)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]
