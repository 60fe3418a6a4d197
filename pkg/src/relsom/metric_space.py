"""Comparable normalized metric spaces from (descriptor, Lp norm) pairs.

Each feature space is centered so every dimension's range midpoint sits at
the origin, then uniformly scaled by the maximum vector norm so all vectors
land in the unit ball of the chosen norm. Translation preserves distances
and the scaling is uniform, so relative distances survive; this is what
makes centroid separations comparable across descriptors and norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .features.types import DescriptorId, FeatureMatrix

NORM_PS = (1.0, 1.25, 1.5, 1.75, 2.0)


def validate_p(p: float) -> float:
    p = float(p)
    if p not in NORM_PS:
        raise ValueError(f"p must be one of {NORM_PS}, got {p}")
    return p


@dataclass(frozen=True, order=True)
class SimilarityMeasure:
    """One descriptor paired with one Lp norm."""

    descriptor: DescriptorId
    p: float

    @property
    def key(self):
        return (self.descriptor.name, self.p)

    def __str__(self):
        return f"{self.descriptor.name}:L{self.p:g}"


def lp_norm(v: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(np.asarray(v, dtype=np.float64)) ** p) ** (1.0 / p))


def lp_distance(x, y, p: float) -> float:
    """Minkowski metric induced by the Lp norm."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return lp_norm(x - y, validate_p(p))


def pairwise_distances(X: np.ndarray, Y: np.ndarray, p: float) -> np.ndarray:
    """Full Lp distance matrix between row sets."""
    p = validate_p(p)
    if X.size == 0 or Y.size == 0:
        return np.zeros((X.shape[0], Y.shape[0]))
    return cdist(X, Y, "minkowski", p=p)


class NormalizedSpace:
    """Feature vectors of one measure after centering and unit-ball scaling."""

    def __init__(self, measure, ids, data, t, s, degenerate):
        self.measure = measure
        self.ids = tuple(ids)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.t = np.asarray(t, dtype=np.float64)
        self.s = float(s)
        self.degenerate = bool(degenerate)
        self._index = {item_id: i for i, item_id in enumerate(self.ids)}

    @property
    def p(self) -> float:
        return self.measure.p

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self):
        return len(self.ids)

    def vector(self, item_id: str) -> np.ndarray:
        return self.data[self._index[item_id]]

    def rows(self, ids) -> np.ndarray:
        return self.data[[self._index[i] for i in ids]]

    def distance(self, id_a: str, id_b: str) -> float:
        return lp_distance(self.vector(id_a), self.vector(id_b), self.p)


def build_normalized_space(matrix: FeatureMatrix, p: float) -> NormalizedSpace:
    """Center the feature space on its per-dimension range midpoints and scale
    into the closed unit ball of the Lp norm.

    A constant feature matrix yields a degenerate space (s recorded as 0,
    all rows at the origin) rather than an error.
    """
    p = validate_p(p)
    X = matrix.data
    if X.shape[0] == 0:
        raise ValueError("cannot normalize an empty feature matrix")
    t = 0.5 * (X.max(axis=0) + X.min(axis=0))
    shifted = X - t
    norms = np.sum(np.abs(shifted) ** p, axis=1) ** (1.0 / p)
    s = float(norms.max())
    measure = SimilarityMeasure(matrix.descriptor, p)
    if s == 0.0:
        return NormalizedSpace(measure, matrix.ids, np.zeros_like(X), t, 0.0, True)
    return NormalizedSpace(measure, matrix.ids, shifted / s, t, s, False)


def build_spaces(features, ps=NORM_PS):
    """All measures' normalized spaces for a descriptor -> FeatureMatrix map.

    Ordered by (descriptor name, p) so downstream ranking tie-breaks are
    reproducible.
    """
    spaces = []
    for descriptor in sorted(features, key=lambda d: d.name):
        for p in ps:
            spaces.append(build_normalized_space(features[descriptor], p))
    return spaces
