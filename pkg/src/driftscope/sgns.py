"""Skip-gram negative-sampling training over token streams.

The hot loop lives in the compiled ``_sgns_kernel`` extension; a numpy
fallback (``_sgns_numpy``) is selected at import when the extension is not
built. ``driftscope.sgns.BACKEND`` names the active default.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _sgns_numpy
from .corpus import (
    InjectionResult,
    TimeSlicedCorpus,
    VocabEntry,
    Vocabulary,
    inject_words,
)
from .errors import DegenerateVocabulary, EmptyStream

log = logging.getLogger(__name__)

try:
    from . import _sgns_kernel

    BACKEND = "cython"
except ImportError:  # extension not built on this install
    _sgns_kernel = None
    BACKEND = "numpy"


@dataclass(frozen=True)
class SgnsConfig:
    """Training hyperparameters; defaults follow the reference setup."""

    min_count: int = 1
    vector_size: int = 100
    window: int = 5
    alpha: float = 0.025
    negative: int = 5
    ns_exponent: float = 1.0
    epochs: int = 5
    seed: int = 1
    min_alpha: float = 1e-4
    threads: int = 1

    def __post_init__(self):
        if self.vector_size < 1:
            raise ValueError("vector_size must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.negative < 1:
            raise ValueError("negative must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def to_dict(self) -> dict:
        return {
            "min_count": self.min_count,
            "vector_size": self.vector_size,
            "window": self.window,
            "alpha": self.alpha,
            "negative": self.negative,
            "ns_exponent": self.ns_exponent,
            "epochs": self.epochs,
            "seed": self.seed,
            "min_alpha": self.min_alpha,
            "threads": self.threads,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SgnsConfig":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


@dataclass
class EmbeddingModel:
    """Vocabulary-indexed matrix of input (center) word vectors."""

    vocabulary: Vocabulary
    vectors: np.ndarray  # (|V|, dim) float32, row i belongs to vocabulary id i
    config: SgnsConfig
    provenance: str = ""
    backend: str = BACKEND
    epoch_losses: list[float] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __contains__(self, word: str) -> bool:
        return word in self.vocabulary

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.vocabulary.id_of(word)]

    def matrix_for(self, words: Sequence[str]) -> np.ndarray:
        return self.vectors[[self.vocabulary.id_of(w) for w in words]]


def _stream_vocabulary(sentences: Sequence[Sequence[str]], min_count: int) -> Vocabulary:
    # Single-stream vocabularies carry all mass in the first frequency slot.
    counts: dict[str, int] = {}
    for sent in sentences:
        for tok in sent:
            counts[tok] = counts.get(tok, 0) + 1
    kept = [(t, c) for t, c in counts.items() if c >= min_count]
    kept.sort(key=lambda item: (-item[1], item[0]))
    return Vocabulary({t: VocabEntry(id=i, freq=(c, 0)) for i, (t, c) in enumerate(kept)})


def noise_distribution(vocab: Vocabulary, ns_exponent: float) -> np.ndarray:
    """Cumulative noise distribution over vocabulary ids (last entry 1.0)."""
    counts = np.array([vocab.total(t) for t in vocab], dtype=np.float64)
    weights = counts**ns_exponent
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    return cdf


def sample_noise(vocab: Vocabulary, ns_exponent: float, n: int, seed: int = 0) -> np.ndarray:
    """Draw ``n`` vocabulary ids from the negative-sampling distribution."""
    cdf = noise_distribution(vocab, ns_exponent)
    rng = np.random.default_rng(seed)
    return np.searchsorted(cdf, rng.random(n), side="right")


def _encode(sentences: Sequence[Sequence[str]], vocab: Vocabulary):
    ids, offsets = [], [0]
    for sent in sentences:
        kept = [vocab.id_of(t) for t in sent if t in vocab]
        if kept:
            ids.extend(kept)
            offsets.append(len(ids))
    tokens = np.array(ids, dtype=np.int32)
    return tokens, np.array(offsets, dtype=np.int64)


def _kernel_for(backend: str):
    if backend == "cython":
        if _sgns_kernel is None:
            raise ValueError("compiled backend requested but the extension is not built")
        return _sgns_kernel
    if backend == "numpy":
        return _sgns_numpy
    raise ValueError(f"unknown backend {backend!r}; expected 'cython' or 'numpy'")


def _epoch_seed(seed: int, epoch: int, shard: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(epoch, shard)).generate_state(1, np.uint64)[0])


def train(
    stream: Iterable[Sequence[str]],
    config: SgnsConfig,
    provenance: str = "",
    backend: str | None = None,
) -> EmbeddingModel:
    """Train an embedding model on a sentence stream.

    Learning rate decays linearly from ``alpha`` to ``min_alpha`` over the
    total position count; the per-pair window radius is drawn uniformly from
    1..window. ``threads > 1`` shards sentences across lock-free workers
    (compiled backend only); single-threaded runs are bitwise reproducible
    for a fixed seed.
    """
    backend = backend or BACKEND
    kernel = _kernel_for(backend)
    sentences = [list(s) for s in stream]
    if not any(sentences):
        raise EmptyStream("cannot train on an empty stream")
    vocab = _stream_vocabulary(sentences, config.min_count)
    if len(vocab) < 2:
        raise DegenerateVocabulary(
            f"vocabulary has {len(vocab)} word(s); negative sampling needs at least 2"
        )
    tokens, offsets = _encode(sentences, vocab)
    if tokens.shape[0] == 0:
        raise EmptyStream("no in-vocabulary tokens to train on")

    d = config.vector_size
    rng = np.random.default_rng(config.seed)
    syn0 = ((rng.random((len(vocab), d)) - 0.5) / d).astype(np.float32)
    syn1 = np.zeros((len(vocab), d), dtype=np.float32)
    cdf = noise_distribution(vocab, config.ns_exponent)

    n_threads = config.threads if backend == "cython" else 1
    if config.threads > 1 and backend != "cython":
        log.warning("numpy backend trains single-threaded; ignoring threads=%d", config.threads)
    shards = _shard_offsets(offsets, n_threads)
    total_positions = tokens.shape[0] * config.epochs

    losses = []
    for epoch in range(config.epochs):
        results = [None] * len(shards)

        def run(i, shard_offsets, shard_done):
            results[i] = kernel.train_epoch(
                syn0,
                syn1,
                tokens,
                shard_offsets,
                cdf,
                config.window,
                config.negative,
                config.alpha,
                config.min_alpha,
                epoch * tokens.shape[0] + shard_done,
                total_positions,
                _epoch_seed(config.seed, epoch, i),
            )

        if len(shards) == 1:
            run(0, shards[0][0], shards[0][1])
        else:
            workers = [
                threading.Thread(target=run, args=(i, off, done))
                for i, (off, done) in enumerate(shards)
            ]
            for w in workers:
                w.start()
            for w in workers:
                w.join()
        loss = sum(r[0] for r in results)
        pairs = sum(r[1] for r in results)
        losses.append(loss / max(pairs, 1))

    if not np.all(np.isfinite(syn0)):
        raise RuntimeError("training produced non-finite vectors")
    return EmbeddingModel(
        vocabulary=vocab,
        vectors=syn0,
        config=config,
        provenance=provenance,
        backend=backend,
        epoch_losses=losses,
    )


def _shard_offsets(offsets: np.ndarray, n: int):
    """Split the sentence offset table into ~equal contiguous shards.

    Each shard keeps absolute positions into the shared token array; the
    second tuple element is the token count preceding the shard (for the
    learning-rate schedule).
    """
    n_sent = offsets.shape[0] - 1
    n = max(1, min(n, n_sent))
    bounds = np.linspace(0, n_sent, n + 1).astype(np.int64)
    shards = []
    for i in range(n):
        lo, hi = bounds[i], bounds[i + 1]
        if hi > lo:
            shards.append((offsets[lo : hi + 1].copy(), int(offsets[lo])))
    return shards or [(offsets, 0)]


def train_op_pair(
    corpus: TimeSlicedCorpus, config: SgnsConfig, backend: str | None = None
) -> tuple[EmbeddingModel, EmbeddingModel]:
    """Train two independent models, one per slice, same config and seed."""
    models = []
    for label in corpus.labels:
        stream = [s.tokens for s in corpus.slices[label]]
        models.append(train(stream, config, provenance=label, backend=backend))
    return models[0], models[1]


def train_wi(
    corpus: TimeSlicedCorpus,
    targets: Iterable[str],
    config: SgnsConfig,
    backend: str | None = None,
) -> tuple[EmbeddingModel, InjectionResult]:
    """Train one joint model over the tagged concatenation of both slices."""
    injection = inject_words(corpus, targets)
    model = train(injection.sentences, config, provenance="word-injected", backend=backend)
    return model, injection
