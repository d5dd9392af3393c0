"""Content-based similar-logo retrieval and benchmarking."""

from . import bench, codebook, fusion, index, metrics, pipelines, raster, textmask
from .descriptors import DenseDescriptor, DescriptorSet, Keypoint

__version__ = "0.1.0"

__all__ = [
    "bench",
    "codebook",
    "fusion",
    "index",
    "metrics",
    "pipelines",
    "raster",
    "textmask",
    "DenseDescriptor",
    "DescriptorSet",
    "Keypoint",
    "__version__",
]
