"""Dataset loading and representative first-iteration sampling.

A corpus is described by a manifest CSV with header ``id,path_or_vector``
and an optional third ``ground_truth`` column. The second cell either holds
an image path (resolved relative to the manifest) or inline feature blocks:
``;``-separated floats, multiple blocks separated by ``|``. Vector corpora
expose one identity descriptor per block, so precomputed features from
descriptors this package does not implement can still enter the pipeline.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CorpusLoadError, DuplicateIdError
from .features.types import DescriptorId, FeatureMatrix

SAMPLING_VARIANTS = (
    "minimum-maximum",
    "quantile",
    "normal-bootstrap",
    "stratified-normal-bootstrap",
    "normal-subsample",
    "stratified-subsample",
)


@dataclass(frozen=True)
class DataItem:
    id: str
    path: Optional[str] = None  # images corpora
    row: Optional[int] = None  # vector corpora: row index into the identity blocks
    ground_truth: Optional[str] = None


@dataclass(frozen=True)
class Corpus:
    items: tuple
    kind: str  # "images" | "vectors"

    def __post_init__(self):
        if not self.items:
            raise CorpusLoadError("corpus is empty")

    @property
    def ids(self):
        return tuple(item.id for item in self.items)

    def __len__(self):
        return len(self.items)

    def item(self, item_id: str) -> DataItem:
        return self._by_id[item_id]

    @property
    def _by_id(self):
        cached = getattr(self, "_by_id_cache", None)
        if cached is None:
            cached = {it.id: it for it in self.items}
            object.__setattr__(self, "_by_id_cache", cached)
        return cached

    def ground_truth_map(self) -> dict:
        return {it.id: it.ground_truth for it in self.items if it.ground_truth is not None}


@dataclass(frozen=True)
class SamplingStrategy:
    variant: str = "minimum-maximum"
    sample_size: int = 40
    seed: int = 0

    def __post_init__(self):
        if self.variant not in SAMPLING_VARIANTS:
            raise ValueError(f"unknown sampling variant {self.variant!r}")
        if self.sample_size < 1:
            raise ValueError("sample_size must be positive")


def _parse_vector_cell(cell: str):
    """Parse 'v1;v2|w1;w2;w3' into a list of float arrays, or None if not numeric."""
    blocks = []
    for block in cell.split("|"):
        parts = [p for p in block.split(";") if p.strip() != ""]
        if not parts:
            return None
        try:
            blocks.append(np.array([float(p) for p in parts], dtype=np.float64))
        except ValueError:
            return None
    return blocks


def load_corpus(manifest_path: str):
    """Load a corpus manifest.

    Returns (corpus, identity_features) where identity_features maps one
    DescriptorId per vector block to its FeatureMatrix (empty for images).
    """
    if not os.path.isfile(manifest_path):
        raise CorpusLoadError(f"manifest not found: {manifest_path}")
    base_dir = os.path.dirname(os.path.abspath(manifest_path))

    rows = []
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["id", "path_or_vector"]:
            raise CorpusLoadError(
                f"manifest {manifest_path} must start with header 'id,path_or_vector[,ground_truth]'"
            )
        has_gt = len(header) >= 3 and header[2].strip() == "ground_truth"
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise CorpusLoadError(f"{manifest_path}:{line_no}: expected at least 2 columns")
            gt = row[2].strip() if has_gt and len(row) > 2 and row[2].strip() != "" else None
            rows.append((row[0].strip(), row[1].strip(), gt))

    if not rows:
        raise CorpusLoadError(f"manifest {manifest_path} lists no items")

    seen, dups = set(), set()
    for item_id, _, _ in rows:
        if item_id in seen:
            dups.add(item_id)
        seen.add(item_id)
    if dups:
        raise DuplicateIdError(dups)

    parsed = [(item_id, _parse_vector_cell(cell), cell, gt) for item_id, cell, gt in rows]
    n_vec = sum(1 for _, blocks, _, _ in parsed if blocks is not None)
    if n_vec not in (0, len(parsed)):
        raise CorpusLoadError("manifest mixes image paths and inline vectors")

    rows.sort(key=lambda r: r[0])  # stable item order across filesystems
    if n_vec == 0:
        items = []
        for item_id, cell, gt in rows:
            path = cell if os.path.isabs(cell) else os.path.join(base_dir, cell)
            if not os.path.isfile(path):
                raise CorpusLoadError(f"image not found for item {item_id!r}: {path}")
            items.append(DataItem(id=item_id, path=path, ground_truth=gt))
        return Corpus(items=tuple(items), kind="images"), {}

    parsed.sort(key=lambda r: r[0])
    shapes = [tuple(len(b) for b in blocks) for _, blocks, _, _ in parsed]
    if len(set(shapes)) != 1:
        raise CorpusLoadError(f"inconsistent vector block shapes across rows: {sorted(set(shapes))}")
    items = tuple(
        DataItem(id=item_id, row=i, ground_truth=gt)
        for i, (item_id, _, _, gt) in enumerate(parsed)
    )
    ids = [it.id for it in items]
    identity = {}
    for b in range(len(shapes[0])):
        data = np.stack([blocks[b] for _, blocks, _, _ in parsed])
        descriptor = DescriptorId.make(f"block-{b}", dim=int(data.shape[1]), source="identity")
        identity[descriptor] = FeatureMatrix(descriptor, ids, data)
    return Corpus(items=items, kind="vectors"), identity


def write_manifest(path: str, rows) -> None:
    """Write a manifest CSV. rows: iterable of (id, path_or_vector, ground_truth|None)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "path_or_vector", "ground_truth"])
        for item_id, cell, gt in rows:
            writer.writerow([item_id, cell, "" if gt is None else gt])


def vector_cell(blocks) -> str:
    """Format feature blocks for a manifest cell."""
    return "|".join(";".join(repr(float(v)) for v in block) for block in blocks)


# ---------------------------------------------------------------------------
# representative sampling


def _kmeans_partition(X: np.ndarray, k: int, seed: int, iters: int = 10):
    """Seeded Lloyd k-means, fixed iteration count. Returns cluster index per row."""
    rng = np.random.default_rng(seed)
    n = X.shape[0]
    centroids = X[rng.choice(n, size=min(k, n), replace=False)].copy()
    assign = np.zeros(n, dtype=np.int64)
    for _ in range(iters):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        for c in range(centroids.shape[0]):
            members = X[assign == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
    return assign


def draw_sample(corpus: Corpus, features: FeatureMatrix, strategy: SamplingStrategy):
    """Draw the first-iteration representative sample; returns item ids.

    Deterministic given the strategy seed. Always returns exactly
    ``sample_size`` distinct ids.
    """
    size = strategy.sample_size
    if size > len(corpus):
        raise ValueError(f"sample_size {size} exceeds corpus size {len(corpus)}")
    ids = list(corpus.ids)
    X = np.stack([features.vector(i) for i in ids])
    n, dim = X.shape
    rng = np.random.default_rng(strategy.seed)
    variant = strategy.variant

    if variant == "minimum-maximum":
        # Per dimension in round-robin, alternating r-th smallest / r-th largest.
        order = np.argsort(X, axis=0, kind="stable")
        chosen, chosen_set = [], set()
        rank = 0
        while len(chosen) < size and rank < n:
            for d in range(dim):
                for idx in (order[rank, d], order[n - 1 - rank, d]):
                    if len(chosen) >= size:
                        break
                    if idx not in chosen_set:
                        chosen_set.add(idx)
                        chosen.append(idx)
                if len(chosen) >= size:
                    break
            rank += 1
        return [ids[i] for i in chosen]

    if variant == "quantile":
        # Picks are assigned to dimensions round-robin; within a dimension the
        # cut points are evenly spaced interior quantiles.
        per_dim = [size // dim + (1 if d < size % dim else 0) for d in range(dim)]
        chosen, chosen_set = [], set()
        for d, count in enumerate(per_dim):
            col = X[:, d]
            for j in range(count):
                level = (j + 1) / (count + 1)
                cut = float(np.quantile(col, level))
                by_closeness = np.argsort(np.abs(col - cut), kind="stable")
                for idx in by_closeness:
                    if idx not in chosen_set:
                        chosen_set.add(idx)
                        chosen.append(idx)
                        break
        return [ids[i] for i in chosen]

    if variant == "normal-subsample":
        picks = rng.choice(n, size=size, replace=False)
        return [ids[i] for i in picks]

    if variant == "normal-bootstrap":
        chosen, chosen_set = [], set()
        while len(chosen) < size:
            idx = int(rng.integers(0, n))
            if idx not in chosen_set:
                chosen_set.add(idx)
                chosen.append(idx)
        return [ids[i] for i in chosen]

    # stratified variants: strata from a seeded k-means partition, k = sample_size
    assign = _kmeans_partition(X, size, strategy.seed)
    chosen, chosen_set = [], set()
    for c in range(size):
        members = np.nonzero(assign == c)[0]
        if len(members) == 0:
            continue
        idx = int(members[rng.integers(0, len(members))])
        if idx not in chosen_set:
            chosen_set.add(idx)
            chosen.append(idx)
    remaining = [i for i in range(n) if i not in chosen_set]
    while len(chosen) < size:
        if variant == "stratified-subsample":
            pos = int(rng.integers(0, len(remaining)))
            idx = remaining.pop(pos)
        else:  # stratified-normal-bootstrap: redraw with replacement until new
            idx = int(rng.integers(0, n))
            if idx in chosen_set:
                continue
        chosen_set.add(idx)
        chosen.append(idx)
    return [ids[i] for i in chosen]
