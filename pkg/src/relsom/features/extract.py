"""Descriptor extraction over image corpora."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

import numpy as np

from ..errors import ExtractionError
from .descriptors import REGISTRY, load_image, registered_descriptors
from .types import DescriptorId, FeatureMatrix

if TYPE_CHECKING:
    from ..corpus import Corpus


def _resolve(descriptor) -> tuple:
    name = descriptor.name if isinstance(descriptor, DescriptorId) else str(descriptor)
    if name not in REGISTRY:
        raise KeyError(f"unknown descriptor {name!r}")
    return REGISTRY[name]


def _extract_item(item, fns):
    """All requested descriptor vectors for a single item; raises on any failure."""
    try:
        rgb = load_image(item.path)
    except Exception as exc:  # noqa: BLE001 - reported per item
        raise ExtractionError([(item.id, f"unreadable image: {exc}")]) from exc
    vectors = []
    for name, dim, fn in fns:
        vec = np.asarray(fn(rgb), dtype=np.float64)
        if vec.shape != (dim,):
            raise ExtractionError([(item.id, f"{name}: expected dim {dim}, got {vec.shape}")])
        if not np.isfinite(vec).all():
            raise ExtractionError([(item.id, f"{name}: non-finite feature values")])
        vectors.append(vec)
    return vectors


def extract_all(corpus, descriptors=None, workers: int = 1):
    """Feature matrices for each descriptor over an image corpus.

    Items are independent; with workers > 1 they are processed in a thread
    pool and results are placed by item index, so the output is identical to
    a sequential run. Per-item failures are aggregated and reported together.
    """
    if corpus.kind != "images":
        raise ValueError("extraction applies to image corpora; vector corpora carry identity blocks")
    if descriptors is None:
        descriptors = registered_descriptors()
    descriptors = list(descriptors)
    if not descriptors:
        return {}
    fns = []
    for d in descriptors:
        descriptor_id, dim, fn = _resolve(d)
        fns.append((descriptor_id.name, dim, fn))

    items = corpus.items
    results = [None] * len(items)
    failures = []
    if workers <= 1:
        for i, item in enumerate(items):
            try:
                results[i] = _extract_item(item, fns)
            except ExtractionError as exc:
                failures.extend(exc.failures)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_extract_item, item, fns): i for i, item in enumerate(items)}
            for future, i in futures.items():
                try:
                    results[i] = future.result()
                except ExtractionError as exc:
                    failures.extend(exc.failures)
    if failures:
        raise ExtractionError(sorted(failures))

    ids = [item.id for item in items]
    out = {}
    for d_idx, d in enumerate(descriptors):
        descriptor_id, _, _ = _resolve(d)
        data = np.stack([results[i][d_idx] for i in range(len(items))])
        out[descriptor_id] = FeatureMatrix(descriptor_id, ids, data)
    return out


def extract(corpus, descriptor, workers: int = 1) -> FeatureMatrix:
    """Single-descriptor form of extract_all."""
    descriptor_id, _, _ = _resolve(descriptor)
    return extract_all(corpus, [descriptor_id], workers=workers)[descriptor_id]
