"""Similarity-measure ranking by labeled-group separation.

Each (descriptor, norm) pair is scored on its normalized space: the distance
between the centroids of the relevant and irrelevant labeled vectors is the
default quality, optionally penalized by the maximum within-group spread.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientLabelsError
from .labels import LabelStore
from .metric_space import NormalizedSpace, lp_distance, pairwise_distances


@dataclass(frozen=True)
class MeasureScore:
    measure: object  # SimilarityMeasure
    q_inter: float
    q_intra_pos: float
    q_intra_neg: float
    q_comb: float
    degenerate: bool


@dataclass(frozen=True)
class AdvisorRanking:
    scores: tuple  # MeasureScore, best first
    active_metric: str
    iteration: int

    @property
    def top(self) -> MeasureScore:
        return self.scores[0]

    def to_json(self) -> dict:
        return {
            "active_metric": self.active_metric,
            "iteration": self.iteration,
            "measures": [
                {
                    "rank": rank,
                    "descriptor": s.measure.descriptor.name,
                    "p": s.measure.p,
                    "score": s.q_comb,
                    "q_inter": s.q_inter,
                    "q_intra_pos": s.q_intra_pos,
                    "q_intra_neg": s.q_intra_neg,
                    "degenerate": s.degenerate,
                }
                for rank, s in enumerate(self.scores)
            ],
        }


def _group_rows(space: NormalizedSpace, ids) -> np.ndarray:
    return space.rows(sorted(ids))


def inter_group_distance(space: NormalizedSpace, labels: LabelStore) -> float:
    """Distance between the centroids of the relevant and irrelevant vectors."""
    pos, neg = labels.relevant, labels.irrelevant
    if not pos:
        raise InsufficientLabelsError("no relevant labels")
    if not neg:
        raise InsufficientLabelsError("no irrelevant labels")
    c_pos = _group_rows(space, pos).mean(axis=0)
    c_neg = _group_rows(space, neg).mean(axis=0)
    return lp_distance(c_pos, c_neg, space.p)


def intra_group_distance(space: NormalizedSpace, group) -> float:
    """Maximum distance between distinct members of one labeled group."""
    ids = sorted(group)
    if len(ids) < 2:
        return 0.0
    rows = space.rows(ids)
    return float(pairwise_distances(rows, rows, space.p).max())


def combined_score(q_inter: float, q_intra_pos: float, q_intra_neg: float, w: float) -> float:
    return q_inter - w * (q_intra_pos + q_intra_neg)


def score_measure(space: NormalizedSpace, labels: LabelStore, w: float = 0.0) -> MeasureScore:
    if space.degenerate:
        return MeasureScore(space.measure, 0.0, 0.0, 0.0, 0.0, True)
    q_inter = inter_group_distance(space, labels)
    q_pos = intra_group_distance(space, labels.relevant)
    q_neg = intra_group_distance(space, labels.irrelevant)
    return MeasureScore(space.measure, q_inter, q_pos, q_neg, combined_score(q_inter, q_pos, q_neg, w), False)


def rank_measures(spaces, labels: LabelStore, w: float = 0.0, iteration: int = 0) -> AdvisorRanking:
    """Score every measure and sort best first.

    Degenerate spaces rank last with score 0; exact ties break by descriptor
    name then p ascending, so the order is strict and reproducible.
    """
    if not labels.relevant or not labels.irrelevant:
        raise InsufficientLabelsError(
            "ranking needs at least one relevant and one irrelevant label; label more items"
        )
    seen = set()
    for space in spaces:
        if space.measure.key in seen:
            raise ValueError(f"measure {space.measure} supplied twice")
        seen.add(space.measure.key)
    scores = [score_measure(space, labels, w) for space in spaces]
    scores.sort(key=lambda s: (s.degenerate, -s.q_comb, s.measure.descriptor.name, s.measure.p))
    metric = "inter-only" if w == 0.0 else f"combined(w={w:g})"
    return AdvisorRanking(tuple(scores), metric, iteration)
