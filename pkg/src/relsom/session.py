"""Iterative labeling sessions: label, rank measures, train, query.

A session owns the corpus, the label store, and the per-iteration history
of advisor rankings and selected measures. `advance` runs one full cycle:
rank all measures on the current labels, pick the top (or an override),
train the hierarchical SOM on the measure's normalized space, generate the
next active-learning query, and project the space for the two scatter-plot
overlays.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace

from .advisor import rank_measures
from .corpus import Corpus, SamplingStrategy, draw_sample, load_corpus
from .errors import (
    InsufficientLabelsError,
    SessionFormatError,
    StaleCacheError,
    UnknownItemsError,
)
from .features import cache_path, extract_all, load_matrix, registered_descriptors, save_matrix
from .labels import IRRELEVANT, RELEVANT, LabelStore
from .metric_space import NormalizedSpace, SimilarityMeasure, build_spaces
from .projection import mds_embed, overlay
from .seeding import derive_seed
from .som import SomHyperparams, SomTree, build_tree, classify_all, query_candidates

SESSION_FORMAT_VERSION = 1

PHASE_AWAITING = "awaiting-labels"
PHASE_ADVISING = "advising"
PHASE_TRAINING = "training"
PHASE_READY = "ready"


@dataclass(frozen=True)
class SessionConfig:
    master_seed: int = 0
    sample_size: int = 40
    sampling_variant: str = "minimum-maximum"
    sampling_descriptor: str | None = None  # default: first descriptor by name
    query_budget: int = 20
    w: float = 0.0
    som: SomHyperparams = field(default_factory=SomHyperparams)
    projection_points: int = 2000
    thumbnail_points: int = 300
    state_path: str | None = None

    def to_json(self) -> dict:
        payload = {
            "master_seed": self.master_seed,
            "sample_size": self.sample_size,
            "sampling_variant": self.sampling_variant,
            "sampling_descriptor": self.sampling_descriptor,
            "query_budget": self.query_budget,
            "w": self.w,
            "som": self.som.to_json(),
            "projection_points": self.projection_points,
            "thumbnail_points": self.thumbnail_points,
            "state_path": self.state_path,
        }
        return payload

    @classmethod
    def from_json(cls, payload: dict) -> "SessionConfig":
        payload = dict(payload)
        payload["som"] = SomHyperparams.from_json(payload["som"])
        return cls(**payload)


class Session:
    def __init__(self, corpus: Corpus, features, config: SessionConfig, manifest_path=None):
        self.corpus = corpus
        self.features = features
        self.config = config
        self.manifest_path = manifest_path
        self.labels = LabelStore()
        self.iteration = 0
        self.history = []
        self.phase = PHASE_AWAITING
        self.tree: SomTree | None = None
        self.selected_measure: SimilarityMeasure | None = None
        self.current_query: list = []
        self.classification: dict = {}
        self.projections: dict = {}
        self._spaces = None
        self._thumbnails = {}

    # -- derived state ------------------------------------------------------

    @property
    def spaces(self):
        if self._spaces is None:
            self._spaces = build_spaces(self.features)
        return self._spaces

    def space_for(self, measure: SimilarityMeasure) -> NormalizedSpace:
        for space in self.spaces:
            if space.measure.key == measure.key:
                return space
        raise KeyError(f"measure {measure} is not registered for this corpus")

    def measure_by_key(self, descriptor_name: str, p: float) -> SimilarityMeasure:
        for space in self.spaces:
            if space.measure.key == (descriptor_name, float(p)):
                return space.measure
        raise KeyError(f"no registered measure ({descriptor_name!r}, p={p})")

    def status(self) -> dict:
        counts = self.labels.counts(len(self.corpus))
        return {
            "iteration": self.iteration,
            "phase": self.phase,
            "corpus_size": len(self.corpus),
            "corpus_kind": self.corpus.kind,
            "descriptor": self.selected_measure.descriptor.name if self.selected_measure else None,
            "p": self.selected_measure.p if self.selected_measure else None,
            "relevant": counts["relevant"],
            "irrelevant": counts["irrelevant"],
            "neutral": counts["neutral"],
            "query_size": len(self.current_query),
        }


def start_session(corpus: Corpus, features, config: SessionConfig | None = None,
                  manifest_path: str | None = None) -> Session:
    """Open a session and pose the first representative-sample query."""
    config = config or SessionConfig()
    session = Session(corpus, features, config, manifest_path)
    names = sorted(d.name for d in features)
    sampling_name = config.sampling_descriptor or names[0]
    matrix = next(m for d, m in features.items() if d.name == sampling_name)
    strategy = SamplingStrategy(
        variant=config.sampling_variant,
        sample_size=min(config.sample_size, len(corpus)),
        seed=derive_seed(config.master_seed, "sample", 0),
    )
    session.current_query = draw_sample(corpus, matrix, strategy)
    return session


def submit_labels(session: Session, assignments: dict) -> dict:
    """Apply a label batch atomically; unknown ids reject the whole batch."""
    known = set(session.corpus.ids)
    unknown = [i for i in assignments if i not in known]
    if unknown:
        raise UnknownItemsError(unknown)
    for label in assignments.values():
        if label not in (RELEVANT, IRRELEVANT, "neutral"):
            raise ValueError(f"unknown label {label!r}")
    session.labels.assign_many(assignments, iteration=session.iteration)
    return session.status()


@dataclass(frozen=True)
class AdvanceResult:
    ranking: object
    tree: SomTree
    query: list
    projections: dict
    measure: SimilarityMeasure
    override: bool


def advance(session: Session, measure_override: SimilarityMeasure | None = None) -> AdvanceResult:
    """Run one full iteration: rank, select, train, query, project."""
    if not session.labels.relevant or not session.labels.irrelevant:
        raise InsufficientLabelsError(
            "cannot advance: need at least one relevant and one irrelevant label"
        )
    iteration = session.iteration + 1
    session.phase = PHASE_ADVISING
    ranking = rank_measures(session.spaces, session.labels, w=session.config.w, iteration=iteration)
    if measure_override is not None:
        measure = session.measure_by_key(measure_override.descriptor.name, measure_override.p)
        override = True
    else:
        measure = ranking.top.measure
        override = False
    space = session.space_for(measure)

    session.phase = PHASE_TRAINING
    params = replace(session.config.som, seed=derive_seed(session.config.master_seed, "tree", iteration))
    tree = build_tree(session.corpus.ids, space, session.labels, params)
    query = query_candidates(tree, space, session.labels, budget=session.config.query_budget)
    classification = classify_all(tree, space, session.labels)

    embedding = mds_embed(
        space, session.corpus.ids,
        seed=derive_seed(session.config.master_seed, "mds", iteration),
        max_points=session.config.projection_points,
    )
    projections = {
        "labels": overlay(embedding, session.labels),
        "classification": overlay(embedding, session.labels, classification),
    }

    session.iteration = iteration
    session.tree = tree
    session.selected_measure = measure
    session.current_query = query
    session.classification = classification
    session.projections = projections
    session.history.append({
        "iteration": iteration,
        "selected": {"descriptor": measure.descriptor.name, "p": measure.p},
        "override": override,
        "ranking": ranking.to_json(),
        "query": list(query),
    })
    session.phase = PHASE_READY
    if session.config.state_path:
        save_session(session, session.config.state_path)
    return AdvanceResult(ranking, tree, query, projections, measure, override)


# ---------------------------------------------------------------------------
# persistence


def save_session(session: Session, path: str) -> None:
    payload = {
        "format_version": SESSION_FORMAT_VERSION,
        "manifest": session.manifest_path,
        "config": session.config.to_json(),
        "labels": session.labels.to_json(),
        "iteration": session.iteration,
        "phase": session.phase,
        "history": session.history,
        "current_query": list(session.current_query),
        "selected": (
            {"descriptor": session.selected_measure.descriptor.name, "p": session.selected_measure.p}
            if session.selected_measure else None
        ),
        "tree": session.tree.to_json() if session.tree else None,
        "classification": dict(sorted(session.classification.items())),
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def load_features(corpus: Corpus, identity_features, cache_dir: str | None = None,
                  workers: int = 1):
    """Feature matrices for a corpus: identity blocks, cache hits, or extraction."""
    if corpus.kind == "vectors":
        return identity_features
    features = {}
    missing = []
    for descriptor in registered_descriptors():
        if cache_dir:
            path = cache_path(cache_dir, descriptor)
            if os.path.isfile(path):
                try:
                    matrix = load_matrix(path, expected=descriptor)
                except StaleCacheError:
                    matrix = None  # refreshed below
                if matrix is not None and matrix.ids == corpus.ids:
                    features[descriptor] = matrix
                    continue
        missing.append(descriptor)
    if missing:
        extracted = extract_all(corpus, missing, workers=workers)
        features.update(extracted)
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)
            for descriptor, matrix in extracted.items():
                save_matrix(matrix, cache_path(cache_dir, descriptor))
    return features


def load_session(path: str, corpus: Corpus | None = None, features=None,
                 cache_dir: str | None = None, workers: int = 1) -> Session:
    """Rebuild a session from its state file.

    The corpus and features are reloaded from the recorded manifest unless
    supplied; spaces are rebuilt deterministically, so the restored tree
    classifies exactly as before saving.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SessionFormatError(f"cannot read session file {path}: {exc}") from exc
    version = payload.get("format_version")
    if version != SESSION_FORMAT_VERSION:
        raise SessionFormatError(
            f"session format version {version!r} not supported (expected {SESSION_FORMAT_VERSION})"
        )
    config = SessionConfig.from_json(payload["config"])
    if corpus is None:
        manifest = payload.get("manifest")
        if not manifest:
            raise SessionFormatError("session file records no manifest path; pass corpus explicitly")
        corpus, identity = load_corpus(manifest)
        features = load_features(corpus, identity, cache_dir=cache_dir, workers=workers)
    elif features is None:
        raise ValueError("pass features together with corpus")

    session = Session(corpus, features, config, payload.get("manifest"))
    session.labels = LabelStore.from_json(payload["labels"])
    session.iteration = int(payload["iteration"])
    session.phase = payload.get("phase", PHASE_AWAITING)
    session.history = payload.get("history", [])
    session.current_query = list(payload.get("current_query", []))
    session.classification = dict(payload.get("classification", {}))
    if payload.get("selected"):
        session.selected_measure = session.measure_by_key(
            payload["selected"]["descriptor"], payload["selected"]["p"]
        )
    if payload.get("tree"):
        session.tree = SomTree.from_json(payload["tree"])
        space = session.space_for(session.selected_measure)
        embedding = mds_embed(
            space, session.corpus.ids,
            seed=derive_seed(config.master_seed, "mds", session.iteration),
            max_points=config.projection_points,
        )
        session.projections = {
            "labels": overlay(embedding, session.labels),
            "classification": overlay(embedding, session.labels, session.classification),
        }
    return session


# ---------------------------------------------------------------------------
# headless simulation loop


def simulate(corpus: Corpus, features, oracle, iterations: int,
             config: SessionConfig | None = None, target: str | None = None):
    """Drive the labeling loop with a ground-truth oracle.

    `oracle` maps item id -> bool (relevant). Returns (session, trace) where
    trace holds one record per completed iteration.
    """
    session = start_session(corpus, features, config)
    trace = []
    all_ids = list(corpus.ids)

    def label_batch(ids):
        if not ids:
            return
        submit_labels(session, {
            i: (RELEVANT if oracle[i] else IRRELEVANT) for i in ids
        })

    for _ in range(iterations):
        label_batch(session.current_query)
        # bootstrap guard: the first sample may be one-sided
        for side, wanted in ((session.labels.relevant, True), (session.labels.irrelevant, False)):
            if not side:
                extra = next(
                    (i for i in all_ids if oracle[i] is wanted and session.labels.label_of(i) == "neutral"),
                    None,
                )
                if extra is not None:
                    label_batch([extra])
        result = advance(session)
        trace.append({
            "iteration": session.iteration,
            "descriptor": result.measure.descriptor.name,
            "p": result.measure.p,
            "override": result.override,
            "query": list(result.query),
            "relevant": len(session.labels.relevant),
            "irrelevant": len(session.labels.irrelevant),
        })
    return session, trace
