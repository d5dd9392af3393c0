"""Feature extractors: global descriptors and keypoint descriptor sets."""

from .color import color_histogram_hsv72, color_histogram_rgb
from .gist import gist
from .hog import describe_hog_dense
from .lbp import lbp
from .shape_context import shape_context, shape_context_from_points
from .sift import DogConfig, describe_orsift, describe_sift, detect_dog_keypoints
from .triplets import group_triplets, triplet_histogram

__all__ = [
    "color_histogram_hsv72",
    "color_histogram_rgb",
    "gist",
    "lbp",
    "describe_hog_dense",
    "shape_context",
    "shape_context_from_points",
    "DogConfig",
    "detect_dog_keypoints",
    "describe_sift",
    "describe_orsift",
    "group_triplets",
    "triplet_histogram",
]
