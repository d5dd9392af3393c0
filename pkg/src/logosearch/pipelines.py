"""Feature pipeline registry: extraction, defaults, and BoVW assembly.

A pipeline names a feature family plus its retrieval settings.  Dense
features are compared directly under their tuned metric; keypoint features
go through codebook quantization, tf-idf weighting and the inverted index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codebook import BoVWVector, Codebook, IdfModel, compute_idf, pool_samples, tfidf_weight, train_kmeans, quantize
from .descriptors import DenseDescriptor, DescriptorSet
from .errors import InvalidParam
from .features import (
    DogConfig,
    color_histogram_hsv72,
    color_histogram_rgb,
    describe_hog_dense,
    describe_orsift,
    describe_sift,
    detect_dog_keypoints,
    gist,
    group_triplets,
    lbp,
    shape_context,
    triplet_histogram,
)
from .features.sift import gaussian_pyramid
from .features.triplets import TRIPLET_HIST_BINS
from .raster import to_gray
from .textmask import detect_text_regions, filter_keypoints

DENSE_FEATURES = ("hsv72", "rgb64", "rgb512", "lbp.base", "lbp.ri", "lbp.u2", "lbp.riu2", "gist")
KEYPOINT_FEATURES = ("sift", "orsift", "hog", "shapectx", "trisift")
# "external" marks vectors produced outside this package (imported matrices);
# they are dense, compared with cosine, and have no extraction step
EXTERNAL_FEATURE = "external"

# paper-tuned defaults: color pairs intersection with L1, LBP pairs cosine
# with L1, GIST is L2-normalized by construction
DEFAULT_METRIC = {
    "hsv72": "intersection_l1",
    "rgb64": "intersection_l1",
    "rgb512": "intersection_l1",
    "lbp.base": "cosine",
    "lbp.ri": "cosine",
    "lbp.u2": "cosine",
    "lbp.riu2": "cosine",
    "gist": "cosine",
}
DEFAULT_NORMALIZATION = {feature: "l1" for feature in DENSE_FEATURES} | {"gist": "l2"}


@dataclass(frozen=True)
class PipelineConfig:
    """One retrieval pipeline: a feature family and its settings."""

    feature: str
    metric: str = ""
    normalization: str = ""
    codebook_k: int = 200
    codebook_seed: int = 0
    codebook_iters: int = 25
    sample_limit: int = 500_000
    strip_text: bool = False
    cell_px: int = 8
    n_samples: int = 100
    dog: DogConfig = field(default_factory=DogConfig)

    def __post_init__(self):
        if self.feature not in DENSE_FEATURES + KEYPOINT_FEATURES + (EXTERNAL_FEATURE,):
            raise InvalidParam(f"unknown feature {self.feature!r}")

    @property
    def is_dense(self) -> bool:
        return self.feature in DENSE_FEATURES or self.feature == EXTERNAL_FEATURE

    @property
    def is_external(self) -> bool:
        return self.feature == EXTERNAL_FEATURE

    @property
    def resolved_metric(self) -> str:
        return self.metric or DEFAULT_METRIC.get(self.feature, "cosine")


def extract_dense(img: np.ndarray, cfg: PipelineConfig) -> DenseDescriptor:
    """Global descriptor of an RGB image under a dense pipeline."""
    feature = cfg.feature
    if feature == EXTERNAL_FEATURE:
        raise InvalidParam("external features are imported, not extracted")
    if feature == "hsv72":
        return color_histogram_hsv72(img)
    if feature == "rgb64":
        return color_histogram_rgb(img, 4)
    if feature == "rgb512":
        return color_histogram_rgb(img, 8)
    if feature.startswith("lbp."):
        return lbp(to_gray(img), variant=feature.split(".", 1)[1])
    if feature == "gist":
        return gist(to_gray(img))
    raise InvalidParam(f"{feature!r} is not a dense feature")


def extract_descriptor_set(img: np.ndarray, cfg: PipelineConfig) -> DescriptorSet:
    """Keypoint descriptors of an RGB image, optionally text-filtered."""
    gray = to_gray(img)
    feature = cfg.feature
    if feature in ("sift", "orsift", "trisift"):
        pyramid = gaussian_pyramid(gray, cfg.dog)
        keypoints = detect_dog_keypoints(gray, cfg.dog, pyramid=pyramid)
        describe = describe_orsift if feature == "orsift" else describe_sift
        dset = describe(gray, keypoints, cfg.dog, pyramid=pyramid)
    elif feature == "hog":
        dset = describe_hog_dense(gray, cell_px=cfg.cell_px)
    elif feature == "shapectx":
        dset = shape_context(gray, n_samples=cfg.n_samples)
    else:
        raise InvalidParam(f"{feature!r} is not a keypoint feature")
    if cfg.strip_text:
        dset = filter_keypoints(dset, detect_text_regions(gray))
    return dset


def train_pipeline_codebook(
    corpus_sets: dict[str, DescriptorSet], cfg: PipelineConfig, run_seed: int = 0
) -> Codebook:
    """k-means codebook over pooled (and possibly subsampled) corpus descriptors."""
    pooled = pool_samples(
        [corpus_sets[doc].vectors for doc in sorted(corpus_sets)],
        limit=cfg.sample_limit,
        seed=run_seed,
    )
    k = min(cfg.codebook_k, pooled.shape[0])
    return train_kmeans(
        pooled, k, max_iters=cfg.codebook_iters, seed=cfg.codebook_seed,
        feature_id=cfg.feature,
    )


def term_counts(dset: DescriptorSet, cb: Codebook, cfg: PipelineConfig) -> dict[int, int]:
    """Word counts for one image: plain quantization, or hashed triplet codes."""
    if cfg.feature == "trisift":
        return triplet_histogram(group_triplets(dset, cb, cfg.dog))
    return quantize(dset, cb)


def bovw_vocabulary_size(cb: Codebook, cfg: PipelineConfig) -> int:
    return TRIPLET_HIST_BINS if cfg.feature == "trisift" else cb.k


def build_bovw_vectors(
    sets: dict[str, DescriptorSet], cb: Codebook, idf: IdfModel, cfg: PipelineConfig
) -> dict[str, BoVWVector]:
    return {doc: tfidf_weight(term_counts(sets[doc], cb, cfg), idf) for doc in sorted(sets)}


def corpus_idf(
    corpus_sets: dict[str, DescriptorSet], cb: Codebook, cfg: PipelineConfig
) -> IdfModel:
    """IDF over the indexed corpus (injected queries reuse these weights)."""
    return compute_idf([term_counts(corpus_sets[doc], cb, cfg) for doc in sorted(corpus_sets)])
