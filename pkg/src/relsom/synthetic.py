"""Synthetic corpora with planted class structure.

These generators produce manifests whose class signal lives in a known,
controlled place: one descriptor family for image corpora, or one feature
block for vector corpora. They back the demos and the directional
replication benchmarks, where real datasets would make outcomes untestable.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image
from scipy import ndimage

from .corpus import vector_cell, write_manifest

# chroma directions orthogonal to the ITU-R 601 luma weights: adding any
# combination of these changes color but leaves the grayscale image unchanged
_CHROMA_RB = np.array([0.114, 0.0, -0.299])
_CHROMA_RG = np.array([0.587, -0.299, 0.0])


def _save_png(path: str, rgb: np.ndarray) -> None:
    Image.fromarray(np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8), "RGB").save(path)


def _smooth_field(rng, size: int, sigma: float, amplitude: float) -> np.ndarray:
    field = ndimage.gaussian_filter(rng.standard_normal((size, size)), sigma=sigma)
    peak = np.abs(field).max()
    if peak > 0:
        field = field / peak * amplitude
    return field


def make_color_corpus(out_dir: str, per_class: int = 150, seed: int = 0,
                      chroma: float = 0.35, size: int = 64) -> str:
    """Two classes separated only by an opposing luminance-preserving tint.

    Grayscale content (texture, brightness, layout) is drawn from one shared
    distribution, so only color-distribution descriptors can separate the
    classes. Returns the manifest path; ground truth is warm / cool.
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = []
    for cls, sign in (("warm", 1.0), ("cool", -1.0)):
        for j in range(per_class):
            base = rng.uniform(0.38, 0.62)
            gray = base + _smooth_field(rng, size, sigma=6.0, amplitude=0.12)
            gray += rng.standard_normal((size, size)) * 0.02
            gray = np.clip(gray, 0.22, 0.78)
            amount = sign * chroma * rng.uniform(0.8, 1.2)
            jitter = rng.uniform(-0.08, 0.08)  # class-independent tint variation
            rgb = gray[..., None] + (amount * _CHROMA_RB + jitter * _CHROMA_RG)[None, None, :]
            item_id = f"{cls}-{j:04d}"
            filename = f"{item_id}.png"
            _save_png(os.path.join(out_dir, filename), rgb)
            rows.append((item_id, filename, cls))
    manifest = os.path.join(out_dir, "manifest.csv")
    write_manifest(manifest, sorted(rows))
    return manifest


def make_luminance_corpus(out_dir: str, per_class: int = 40, seed: int = 0,
                          size: int = 64) -> str:
    """Two classes separated only by mean luminance.

    Broad per-pixel noise keeps each image's gray-level histogram a smooth,
    stable bump positioned by the class base level; a random smooth field
    scrambles block means and projections, and every image gets a random
    luminance-preserving tint so color histograms stay noisy. The luminance
    histogram is the crispest lens on the signal. Ground truth bright/dark.
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = []
    for cls, center in (("dark", 0.35), ("bright", 0.65)):
        for j in range(per_class):
            base = center + rng.uniform(-0.02, 0.02)
            field = _smooth_field(rng, size, sigma=8.0, amplitude=0.18 * rng.uniform(0.3, 1.0))
            gray = base + field + rng.standard_normal((size, size)) * 0.12
            gray = np.clip(gray, 0.02, 0.98)
            tilt = rng.uniform(-1.0, 1.0) * _CHROMA_RB + rng.uniform(-1.0, 1.0) * _CHROMA_RG
            tilt = tilt * rng.uniform(0.0, 0.25)
            rgb = np.clip(gray[..., None] + tilt[None, None, :], 0.0, 1.0)
            item_id = f"{cls}-{j:04d}"
            filename = f"{item_id}.png"
            _save_png(os.path.join(out_dir, filename), rgb)
            rows.append((item_id, filename, cls))
    manifest = os.path.join(out_dir, "manifest.csv")
    write_manifest(manifest, sorted(rows))
    return manifest


def make_benchmark_corpus(path: str, per_class: int = 150, seed: int = 0,
                          sparse_shift: float = 1.8, wide_shift: float = 0.55,
                          wide_dims: int = 64) -> str:
    """Five-class vector corpus for the advisor-vs-selection benchmark.

    Classes class-0 and class-1 separate through a few strong dimensions of
    one sparse block (friendly to per-dimension feature selection); classes
    class-2..4 each separate through a weak shift spread across a whole wide
    block (friendly to whole-measure ranking). One block is pure noise.
    """
    rng = np.random.default_rng(seed)
    classes = [f"class-{c}" for c in range(5)]
    blocks = {
        "sparse": 16,
        "wide_a": wide_dims,
        "wide_b": wide_dims,
        "wide_c": wide_dims,
        "noise": 16,
    }
    # fixed random sign patterns for the wide shifts
    signs = {
        name: np.where(rng.random(wide_dims) < 0.5, -1.0, 1.0)
        for name in ("wide_a", "wide_b", "wide_c")
    }
    wide_of = {"class-2": "wide_a", "class-3": "wide_b", "class-4": "wide_c"}
    sparse_dims_of = {"class-0": (0, 1, 2), "class-1": (3, 4, 5)}

    rows = []
    for cls in classes:
        for j in range(per_class):
            parts = {name: rng.standard_normal(dim) for name, dim in blocks.items()}
            if cls in sparse_dims_of:
                for d in sparse_dims_of[cls]:
                    parts["sparse"][d] += sparse_shift
            if cls in wide_of:
                name = wide_of[cls]
                parts[name] = parts[name] + wide_shift * signs[name]
            cell = vector_cell([parts[name] for name in blocks])
            rows.append((f"{cls}-{j:04d}", cell, cls))
    write_manifest(path, sorted(rows))
    return path
