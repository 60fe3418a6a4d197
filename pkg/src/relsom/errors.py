"""Exception types shared across the package."""


class RelsomError(Exception):
    """Base class for all package errors."""


class CorpusLoadError(RelsomError):
    """Manifest missing, unreadable, or structurally invalid."""


class DuplicateIdError(CorpusLoadError):
    """Manifest contains repeated item ids."""

    def __init__(self, duplicates):
        self.duplicates = sorted(duplicates)
        super().__init__(f"duplicate item ids in manifest: {', '.join(self.duplicates)}")


class ExtractionError(RelsomError):
    """One or more items could not be turned into feature vectors."""

    def __init__(self, failures):
        # failures: list of (item_id, reason)
        self.failures = list(failures)
        ids = ", ".join(item_id for item_id, _ in self.failures)
        super().__init__(f"feature extraction failed for: {ids}")


class StaleCacheError(RelsomError):
    """Feature cache file does not match the requested descriptor/params/version."""


class InsufficientLabelsError(RelsomError):
    """An operation needs at least one relevant and one irrelevant label."""


class UnclassifiableError(RelsomError):
    """No labeled cell reachable anywhere along the classification path."""


class UnknownItemsError(RelsomError):
    """Label submission referenced ids outside the corpus; nothing was applied."""

    def __init__(self, unknown_ids):
        self.unknown_ids = sorted(unknown_ids)
        super().__init__(f"unknown item ids: {', '.join(self.unknown_ids)}")


class SessionFormatError(RelsomError):
    """Session or cache file has an incompatible version or is corrupt."""
