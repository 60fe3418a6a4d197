"""Relevance label bookkeeping with append-only history."""

from __future__ import annotations

RELEVANT = "relevant"
IRRELEVANT = "irrelevant"
NEUTRAL = "neutral"
LABELS = (RELEVANT, IRRELEVANT, NEUTRAL)


class LabelStore:
    """Current label per item plus an append-only (iteration, id, label) log.

    Unlisted items are neutral. Re-assignment overwrites the current label
    but every assignment stays in the history.
    """

    def __init__(self):
        self._current = {}
        self.history = []

    def assign(self, item_id: str, label: str, iteration: int = 0) -> None:
        if label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        self.history.append((int(iteration), item_id, label))
        if label == NEUTRAL:
            self._current.pop(item_id, None)
        else:
            self._current[item_id] = label

    def assign_many(self, assignments, iteration: int = 0) -> None:
        for item_id in sorted(assignments):
            self.assign(item_id, assignments[item_id], iteration)

    def label_of(self, item_id: str) -> str:
        return self._current.get(item_id, NEUTRAL)

    @property
    def relevant(self):
        return frozenset(i for i, l in self._current.items() if l == RELEVANT)

    @property
    def irrelevant(self):
        return frozenset(i for i, l in self._current.items() if l == IRRELEVANT)

    def labeled(self):
        return frozenset(self._current)

    def counts(self, corpus_size: int):
        n_rel = len(self.relevant)
        n_irr = len(self.irrelevant)
        return {"relevant": n_rel, "irrelevant": n_irr, "neutral": corpus_size - n_rel - n_irr}

    def copy(self) -> "LabelStore":
        dup = LabelStore()
        dup._current = dict(self._current)
        dup.history = list(self.history)
        return dup

    def to_json(self) -> dict:
        return {
            "current": dict(sorted(self._current.items())),
            "history": [[it, i, l] for it, i, l in self.history],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "LabelStore":
        store = cls()
        store._current = dict(payload.get("current", {}))
        store.history = [(int(it), i, l) for it, i, l in payload.get("history", [])]
        return store
