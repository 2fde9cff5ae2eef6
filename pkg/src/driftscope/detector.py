"""End-to-end change detection: score targets, rank, binarize, evaluate.

A word counts as changed when its score strictly exceeds the threshold;
the default threshold policy is the mean score of the evaluated word set,
which adapts to the wildly different ranges the metrics produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .align import AlignedPair
from .errors import EmptyGold, ModelMetricMismatch, TargetMissing
from .metrics import contextual_distance, is_static, static_distance
from .occurrences import OccurrenceStore
from .sgns import EmbeddingModel


@dataclass(frozen=True)
class WiArtifact:
    """A word-injected model plus its word -> (tagged earlier, tagged later) map."""

    model: EmbeddingModel
    tags: Mapping[str, tuple[str, str]]


@dataclass(frozen=True)
class ContextualArtifact:
    """One embedder's view of an occurrence store."""

    store: OccurrenceStore
    embedder: str


@dataclass(frozen=True)
class TargetLists:
    changed: frozenset[str]
    stable: frozenset[str]

    def __post_init__(self):
        overlap = self.changed & self.stable
        if overlap:
            raise ValueError(f"gold lists overlap: {sorted(overlap)}")

    def label_of(self, word: str) -> str | None:
        if word in self.changed:
            return "changed"
        if word in self.stable:
            return "stable"
        return None

    @classmethod
    def from_files(cls, changed_path: str | Path, stable_path: str | Path) -> "TargetLists":
        return cls(
            changed=frozenset(_read_words(changed_path)),
            stable=frozenset(_read_words(stable_path)),
        )

    def all_words(self) -> list[str]:
        return sorted(self.changed | self.stable)


def _read_words(path: str | Path) -> list[str]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    return words


@dataclass(frozen=True)
class ThresholdPolicy:
    """Binarization rule: 'mean' (default), 'absolute', or 'quantile'."""

    kind: str = "mean"
    value: float | None = None

    def threshold(self, scores: Sequence[float]) -> float:
        if len(scores) == 0:
            raise ValueError("cannot derive a threshold from zero scores")
        if self.kind == "mean":
            return float(np.mean(scores))
        if self.kind == "absolute":
            if self.value is None:
                raise ValueError("absolute policy needs a value")
            return float(self.value)
        if self.kind == "quantile":
            if self.value is None or not (0.0 <= self.value <= 1.0):
                raise ValueError("quantile policy needs a value in [0, 1]")
            return float(np.quantile(scores, self.value))
        raise ValueError(f"unknown threshold policy {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}

    @classmethod
    def from_dict(cls, data) -> "ThresholdPolicy":
        return cls(kind=data.get("kind", "mean"), value=data.get("value"))


@dataclass
class ChangeRanking:
    """Per-metric descending ranking with binarized verdicts."""

    model_id: str
    metric_id: str
    entries: list[tuple[str, float]]  # descending score, ties lexicographic
    threshold: float
    policy: ThresholdPolicy
    verdicts: dict[str, bool]
    unscored: dict[str, str] = field(default_factory=dict)

    def rank_of(self, word: str) -> int:
        """1-based position in the descending ranking."""
        for i, (w, _) in enumerate(self.entries, start=1):
            if w == word:
                return i
        raise KeyError(word)

    def words(self) -> list[str]:
        return [w for w, _ in self.entries]


@dataclass
class EvaluationReport:
    """Confusion counts and accuracy for one (model, metric) pair."""

    model_id: str
    metric_id: str
    tp: int
    tn: int
    fp: int
    fn: int
    stable_ranks: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def score(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def score_display(self) -> float:
        """Accuracy rounded half-up to 2 decimals, as shown in result tables."""
        return round_half_up(self.score, 2)


def round_half_up(x: float, digits: int) -> float:
    scale = 10**digits
    return math.floor(x * scale + 0.5) / scale


def score_targets(
    artifact: AlignedPair | WiArtifact | ContextualArtifact,
    metric_id: str,
    targets: Sequence[str],
) -> tuple[list[tuple[str, float]], dict[str, str]]:
    """One finite score per scoreable target; the rest come back with reasons."""
    static = is_static(metric_id)
    scores: list[tuple[str, float]] = []
    unscored: dict[str, str] = {}

    for word in dict.fromkeys(targets):  # preserve order, drop duplicates
        try:
            if isinstance(artifact, AlignedPair):
                if not static:
                    raise ModelMetricMismatch(
                        f"{metric_id!r} needs occurrence sets, not an aligned static pair"
                    )
                if word not in artifact:
                    raise TargetMissing(word, "outside the shared vocabulary")
                a, b = artifact.vectors_for(word)
                value = static_distance(metric_id, a, b)
            elif isinstance(artifact, WiArtifact):
                if not static:
                    raise ModelMetricMismatch(
                        f"{metric_id!r} needs occurrence sets, not a word-injected model"
                    )
                if word not in artifact.tags:
                    raise TargetMissing(word, "no period-tagged vectors")
                tag_a, tag_b = artifact.tags[word]
                if tag_a not in artifact.model or tag_b not in artifact.model:
                    raise TargetMissing(word, "tagged token missing from the trained vocabulary")
                value = static_distance(
                    metric_id, artifact.model.vector(tag_a), artifact.model.vector(tag_b)
                )
            elif isinstance(artifact, ContextualArtifact):
                if static:
                    raise ModelMetricMismatch(
                        f"{metric_id!r} is a static-vector distance; this is an occurrence model"
                    )
                earlier, later = artifact.store.pair(word, artifact.embedder)
                value = contextual_distance(metric_id, earlier, later)
            else:
                raise TypeError(f"cannot score artifact of type {type(artifact).__name__}")
        except TargetMissing as exc:
            unscored[word] = str(exc)
            continue
        if not math.isfinite(value):
            unscored[word] = f"non-finite score {value!r}"
            continue
        scores.append((word, float(value)))
    return scores, unscored


def rank(
    scores: Sequence[tuple[str, float]],
    model_id: str,
    metric_id: str,
    policy: ThresholdPolicy | None = None,
    unscored: Mapping[str, str] | None = None,
) -> ChangeRanking:
    """Order scores descending (ties lexicographic) and binarize against the policy."""
    if not scores:
        raise ValueError("nothing to rank: no scoreable targets")
    policy = policy or ThresholdPolicy()
    entries = sorted(scores, key=lambda item: (-item[1], item[0]))
    threshold = policy.threshold([s for _, s in entries])
    verdicts = {w: s > threshold for w, s in entries}
    return ChangeRanking(
        model_id=model_id,
        metric_id=metric_id,
        entries=entries,
        threshold=threshold,
        policy=policy,
        verdicts=verdicts,
        unscored=dict(unscored or {}),
    )


def binarize(
    scores: Sequence[tuple[str, float]], policy: ThresholdPolicy | None = None
) -> dict[str, bool]:
    """Verdict per word: score strictly above the policy threshold."""
    policy = policy or ThresholdPolicy()
    threshold = policy.threshold([s for _, s in scores])
    return {w: s > threshold for w, s in scores}


def evaluate(ranking: ChangeRanking, gold: TargetLists) -> EvaluationReport:
    """Confusion counts over the labeled, scored words.

    Words unscoreable in one period never enter the confusion matrix; they
    stay listed on the ranking's ``unscored`` side.
    """
    if not gold.changed and not gold.stable:
        raise EmptyGold("both gold lists are empty")
    tp = tn = fp = fn = 0
    for word, _ in ranking.entries:
        label = gold.label_of(word)
        if label is None:
            continue
        flagged = ranking.verdicts[word]
        if label == "changed":
            tp, fn = (tp + 1, fn) if flagged else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if flagged else (fp, tn + 1)
    if tp + tn + fp + fn == 0:
        raise EmptyGold("no labeled word was scored")
    return EvaluationReport(
        model_id=ranking.model_id,
        metric_id=ranking.metric_id,
        tp=tp,
        tn=tn,
        fp=fp,
        fn=fn,
        stable_ranks=stable_rank_eval(ranking, gold.stable),
    )


def stable_rank_eval(ranking: ChangeRanking, stable: frozenset[str] | set[str]) -> dict[str, int]:
    """1-based rank of each stable word; low positions indicate model failure."""
    positions = {}
    for i, (word, _) in enumerate(ranking.entries, start=1):
        if word in stable:
            positions[word] = i
    return positions
