"""2-D distance-preserving embeddings for the scatter-plot views.

Classical MDS (double-centered squared distances, top-2 spectral directions
found by seeded power iteration) provides the start configuration; 50 SMACOF
majorization steps then refine it against the space's own Lp distances. The
embedding plane itself is always Euclidean, so for p != 2 the reported
stress quantifies the unavoidable distortion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .labels import NEUTRAL, LabelStore
from .metric_space import NormalizedSpace, pairwise_distances

SMACOF_STEPS = 50
POWER_ITERATIONS = 200
MAX_POINTS = 2000


@dataclass(frozen=True)
class Embedding:
    ids: tuple
    coords: dict  # id -> (x, y)
    stress: float
    stress_history: tuple  # normalized stress-1 after each SMACOF step
    measure_key: tuple
    degenerate: bool = False


def _normalized_stress(coords: np.ndarray, target: np.ndarray) -> float:
    d = cdist(coords, coords)
    iu = np.triu_indices(len(coords), k=1)
    denom = float((target[iu] ** 2).sum())
    if denom == 0.0:
        return 0.0
    return float(np.sqrt(((d[iu] - target[iu]) ** 2).sum() / denom))


def _classical_mds(D: np.ndarray, seed: int) -> np.ndarray:
    """Torgerson start configuration via seeded orthogonal power iteration."""
    n = D.shape[0]
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * J @ (D ** 2) @ J
    # shift so the algebraically largest eigenvalues dominate in magnitude
    shift = float(np.abs(B).sum(axis=1).max())
    A = B + shift * np.eye(n)
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((n, 2))
    for _ in range(POWER_ITERATIONS):
        V, _ = np.linalg.qr(A @ V)
    # Rayleigh-Ritz on the converged 2-D subspace
    small = V.T @ B @ V
    evals, evecs = np.linalg.eigh(small)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    directions = V @ evecs
    return directions * np.sqrt(np.maximum(evals, 0.0))[None, :]


def _smacof(coords: np.ndarray, target: np.ndarray, steps: int):
    """Guttman-transform majorization; records stress before and after every step."""
    n = coords.shape[0]
    history = [_normalized_stress(coords, target)]
    for _ in range(steps):
        d = cdist(coords, coords)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d > 0, target / d, 0.0)
        B = -ratio
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        coords = (B @ coords) / n
        history.append(_normalized_stress(coords, target))
    return coords, history


def mds_embed(space: NormalizedSpace, ids, seed: int, max_points: int = MAX_POINTS) -> Embedding:
    """Embed the given items of a normalized space into 2-D.

    Deterministic given the seed. Large id sets are subsampled (seeded) to
    max_points before the O(n^2) distance matrix is formed.
    """
    ids = sorted(ids)
    if len(ids) < 3:
        raise ValueError("mds_embed needs at least 3 items")
    if len(ids) > max_points:
        rng = np.random.default_rng(seed)
        keep = rng.choice(len(ids), size=max_points, replace=False)
        ids = [ids[i] for i in sorted(keep)]

    key = space.measure.key
    if space.degenerate:
        coords = {i: (0.0, 0.0) for i in ids}
        return Embedding(tuple(ids), coords, 0.0, (), key, degenerate=True)

    X = space.rows(ids)
    D = pairwise_distances(X, X, space.p)
    if float(D.max()) == 0.0:
        coords = {i: (0.0, 0.0) for i in ids}
        return Embedding(tuple(ids), coords, 0.0, (), key, degenerate=True)

    start = _classical_mds(D, seed)
    final, history = _smacof(start, D, SMACOF_STEPS)
    stress = history[-1]
    coords = {item_id: (float(x), float(y)) for item_id, (x, y) in zip(ids, final)}
    return Embedding(tuple(ids), coords, stress, tuple(history), key)


def overlay(embedding: Embedding, labels: LabelStore, classification: dict | None = None) -> dict:
    """Attach label/classification categories to embedded points; coords untouched."""
    points = []
    for item_id in embedding.ids:
        x, y = embedding.coords[item_id]
        point = {
            "id": item_id,
            "x": x,
            "y": y,
            "label": labels.label_of(item_id) if labels is not None else NEUTRAL,
        }
        if classification is not None:
            point["classified"] = classification.get(item_id, "unclassified")
        else:
            point["classified"] = None
        points.append(point)
    return {
        "measure": {"descriptor": embedding.measure_key[0], "p": embedding.measure_key[1]},
        "stress": embedding.stress,
        "degenerate": embedding.degenerate,
        "points": points,
    }
