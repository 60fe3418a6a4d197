"""Core feature containers: descriptor identities and per-corpus feature matrices."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, order=True)
class DescriptorId:
    """Identity of one feature descriptor, including its fixed parameterization."""

    name: str
    params: tuple = field(default=())  # sorted (key, value) pairs, hashable

    @staticmethod
    def make(name: str, **params) -> "DescriptorId":
        return DescriptorId(name, tuple(sorted(params.items())))

    @property
    def params_dict(self) -> dict:
        return dict(self.params)

    def params_hash(self) -> str:
        blob = json.dumps(self.params, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def __str__(self) -> str:
        return self.name


class FeatureMatrix:
    """Feature vectors for every item of a corpus under one descriptor.

    Rows follow the corpus item order (lexicographic by id). All entries are
    finite float64; dimensionality is fixed by the descriptor.
    """

    def __init__(self, descriptor: DescriptorId, ids, data):
        data = np.ascontiguousarray(data, dtype=np.float64)
        ids = tuple(ids)
        if data.ndim != 2:
            raise ValueError("feature data must be 2-D (items x dimensions)")
        if len(ids) != data.shape[0]:
            raise ValueError(f"{len(ids)} ids but {data.shape[0]} rows")
        if data.size and not np.isfinite(data).all():
            bad = [ids[i] for i in np.unique(np.nonzero(~np.isfinite(data))[0])]
            raise ValueError(f"non-finite feature values for items: {bad}")
        self.descriptor = descriptor
        self.ids = ids
        self.data = data
        self._index = {item_id: i for i, item_id in enumerate(ids)}

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return len(self.ids)

    def vector(self, item_id: str) -> np.ndarray:
        return self.data[self._index[item_id]]

    def row_index(self, item_id: str) -> int:
        return self._index[item_id]

    def rows(self, ids) -> np.ndarray:
        return self.data[[self._index[i] for i in ids]]

    def subset(self, ids) -> "FeatureMatrix":
        """Matrix restricted to the given ids, in the given order."""
        rows = [self._index[i] for i in ids]
        return FeatureMatrix(self.descriptor, ids, self.data[rows])

    def equals(self, other: "FeatureMatrix") -> bool:
        return (
            self.descriptor == other.descriptor
            and self.ids == other.ids
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )
