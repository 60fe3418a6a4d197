"""Feature descriptor bank, extraction, and caching."""

from .cache import FORMAT_VERSION, cache_path, cache_roundtrip, load_matrix, save_matrix
from .descriptors import (
    REGISTRY,
    WORK_SIZE,
    descriptor_by_name,
    descriptor_dim,
    load_image,
    registered_descriptors,
    to_gray,
)
from .extract import extract, extract_all
from .types import DescriptorId, FeatureMatrix

__all__ = [
    "DescriptorId",
    "FeatureMatrix",
    "FORMAT_VERSION",
    "REGISTRY",
    "WORK_SIZE",
    "cache_path",
    "cache_roundtrip",
    "descriptor_by_name",
    "descriptor_dim",
    "extract",
    "extract_all",
    "load_image",
    "load_matrix",
    "registered_descriptors",
    "save_matrix",
    "to_gray",
]
