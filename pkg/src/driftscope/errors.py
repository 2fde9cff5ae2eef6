"""Exception types shared across the pipeline."""


class DriftscopeError(Exception):
    """Base class for all driftscope errors."""


class EmptySlice(DriftscopeError):
    """A time slice received no documents."""


class EmptyStream(DriftscopeError):
    """A training stream contained no sentences."""


class DegenerateVocabulary(DriftscopeError):
    """Vocabulary too small to train on (negative sampling needs at least 2 words)."""


class TargetMissing(DriftscopeError):
    """A target word has no representation in one of the periods."""

    def __init__(self, word, detail=""):
        self.word = word
        super().__init__(f"target {word!r} cannot be scored" + (f": {detail}" if detail else ""))


class DimensionMismatch(DriftscopeError):
    """Two vectors or matrices disagree on dimensionality."""


class EmptyIntersection(DriftscopeError):
    """Two vocabularies share no words."""


class UnknownMetric(DriftscopeError):
    """Metric name not in the registry."""


class ModelMetricMismatch(DriftscopeError):
    """Metric cannot be applied to this model kind (e.g. APD on a static model)."""


class EmptyGold(DriftscopeError):
    """Evaluation requested against empty gold lists."""


class PerplexityTooHigh(DriftscopeError):
    """Requested perplexity exceeds what the point count supports."""


class CorruptArtifact(DriftscopeError):
    """A stored artifact failed to parse or validate."""

    def __init__(self, path, detail=""):
        self.path = str(path)
        super().__init__(f"corrupt artifact at {path}" + (f": {detail}" if detail else ""))


class VersionMismatch(DriftscopeError):
    """A stored artifact declares an unsupported format version."""
