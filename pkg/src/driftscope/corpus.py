"""Corpus handling: tokenization, time slicing, vocabulary, word injection.

A corpus is always split into exactly two ordered periods. Tokenization is
deliberately conservative (lowercase + edge punctuation strip): archaic
spellings, diacritics, and foreign-script fragments are study objects and
must survive preprocessing untouched.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmptySlice

log = logging.getLogger(__name__)

DEFAULT_TAG_SEPARATOR = "⊕"  # ⊕, reserved: never produced by the tokenizer


@dataclass(frozen=True)
class TokenizerConfig:
    """Rules for :func:`tokenize`."""

    terminators: str = ".!?…"
    lowercase: bool = True


@dataclass(frozen=True)
class Document:
    id: str
    date: int | None
    text: str
    region: str | None = None

    def __post_init__(self):
        if self.date is not None and not (1000 <= self.date <= 9999):
            raise ValueError(f"document {self.id!r}: date {self.date!r} is not a 4-digit year")


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    tokens: tuple[str, ...]
    period: str


@dataclass(frozen=True)
class VocabEntry:
    id: int
    freq: tuple[int, int]  # per-period counts, in label order

    @property
    def total(self) -> int:
        return self.freq[0] + self.freq[1]


class Vocabulary:
    """Token table with dense ids, ordered by descending total frequency.

    Ties are broken lexicographically so re-extraction from the same corpus
    always assigns the same ids.
    """

    def __init__(self, entries: Mapping[str, VocabEntry]):
        self.entries = dict(entries)
        self._by_id = sorted(self.entries, key=lambda t: self.entries[t].id)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._by_id)

    def id_of(self, token: str) -> int:
        return self.entries[token].id

    def token_of(self, idx: int) -> str:
        return self._by_id[idx]

    def freq(self, token: str) -> tuple[int, int]:
        return self.entries[token].freq

    def total(self, token: str) -> int:
        return self.entries[token].total

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.entries == other.entries


def build_vocabulary(
    slices: Mapping[str, Sequence[Sentence]], labels: Sequence[str], min_count: int = 1
) -> Vocabulary:
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: dict[str, list[int]] = {}
    for side, label in enumerate(labels):
        for sent in slices[label]:
            for tok in sent.tokens:
                counts.setdefault(tok, [0, 0])[side] += 1
    kept = [(t, c) for t, c in counts.items() if c[0] + c[1] >= min_count]
    kept.sort(key=lambda item: (-(item[1][0] + item[1][1]), item[0]))
    return Vocabulary(
        {t: VocabEntry(id=i, freq=(c[0], c[1])) for i, (t, c) in enumerate(kept)}
    )


def extract_vocabulary(corpus: "TimeSlicedCorpus", min_count: int = 1) -> Vocabulary:
    """Vocabulary of tokens whose total count across both slices >= min_count."""
    return build_vocabulary(corpus.slices, corpus.labels, min_count=min_count)


@dataclass(frozen=True)
class TimeSlicedCorpus:
    """Tokenized sentences partitioned into two ordered period slices."""

    labels: tuple[str, str]
    slices: Mapping[str, tuple[Sentence, ...]]
    vocabulary: Vocabulary
    dropped_documents: int = 0
    intervals: tuple[tuple[int, int], tuple[int, int]] | None = None

    def sentences(self) -> Iterator[Sentence]:
        for label in self.labels:
            yield from self.slices[label]

    def token_count(self, label: str | None = None) -> int:
        labels = self.labels if label is None else (label,)
        return sum(len(s.tokens) for lb in labels for s in self.slices[lb])

    def fingerprint(self) -> str:
        """Content hash over labels and token streams, stable across reloads."""
        h = hashlib.sha256()
        for label in self.labels:
            h.update(label.encode("utf-8"))
            h.update(b"\x00")
            for sent in self.slices[label]:
                h.update(" ".join(sent.tokens).encode("utf-8"))
                h.update(b"\x01")
        return h.hexdigest()


def tokenize(raw: str, rules: TokenizerConfig | None = None) -> list[list[str]]:
    """Split raw text into sentences of normalized tokens.

    Sentences end at terminal punctuation; tokens are lowercased and have
    punctuation stripped from their edges only. No stemming, no stop-word
    removal, no diacritic folding. Empty input yields an empty list.
    """
    rules = rules or TokenizerConfig()
    if not raw:
        return []
    parts = re.split("[" + re.escape(rules.terminators) + "]+", raw)
    sentences = []
    for part in parts:
        tokens = []
        for chunk in part.split():
            tok = _strip_edges(chunk)
            if tok:
                tokens.append(tok.lower() if rules.lowercase else tok)
        if tokens:
            sentences.append(tokens)
    return sentences


def _strip_edges(chunk: str) -> str:
    start, end = 0, len(chunk)
    while start < end and not chunk[start].isalnum():
        start += 1
    while end > start and not chunk[end - 1].isalnum():
        end -= 1
    return chunk[start:end]


def merge_slices(
    docs: Sequence[Document],
    intervals: tuple[tuple[int, int], tuple[int, int]],
    labels: tuple[str, str] | None = None,
    rules: TokenizerConfig | None = None,
    min_count: int = 1,
) -> TimeSlicedCorpus:
    """Merge dated documents into a two-slice corpus by interval adherence.

    Documents whose date falls outside both intervals (or is missing) are
    dropped and counted. Sentences are ordered by (doc_id, index) within each
    slice, so the result does not depend on input document order.
    """
    (a0, a1), (b0, b1) = intervals
    if a0 > a1 or b0 > b1:
        raise ValueError(f"malformed intervals {intervals}")
    if a1 >= b0:
        raise ValueError(f"intervals must be disjoint and ordered: {intervals}")
    if labels is None:
        labels = (f"{a0}-{a1}", f"{b0}-{b1}")

    seen_ids = set()
    per_label: dict[str, list[Sentence]] = {labels[0]: [], labels[1]: []}
    dropped = 0
    for doc in docs:
        if doc.id in seen_ids:
            raise ValueError(f"duplicate document id {doc.id!r}")
        seen_ids.add(doc.id)
        if doc.date is not None and a0 <= doc.date <= a1:
            label = labels[0]
        elif doc.date is not None and b0 <= doc.date <= b1:
            label = labels[1]
        else:
            dropped += 1
            continue
        for idx, tokens in enumerate(tokenize(doc.text, rules)):
            per_label[label].append(
                Sentence(doc_id=doc.id, index=idx, tokens=tuple(tokens), period=label)
            )
    if dropped:
        log.warning("dropped %d document(s) outside both intervals", dropped)
    for label in labels:
        if not per_label[label]:
            raise EmptySlice(f"slice {label!r} received no documents")
        per_label[label].sort(key=lambda s: (s.doc_id, s.index))

    slices = {label: tuple(per_label[label]) for label in labels}
    vocab = build_vocabulary(slices, labels, min_count=min_count)
    return TimeSlicedCorpus(
        labels=labels,
        slices=slices,
        vocabulary=vocab,
        dropped_documents=dropped,
        intervals=intervals,
    )


def corpus_from_token_streams(
    streams: Mapping[str, Sequence[Sequence[str]]],
    labels: tuple[str, str] | None = None,
    min_count: int = 1,
) -> TimeSlicedCorpus:
    """Build a corpus directly from pre-tokenized sentence streams.

    Used for already-tokenized inputs (one sentence per line layouts) where
    no document dates exist; each stream becomes one slice.
    """
    if labels is None:
        keys = list(streams)
        if len(keys) != 2:
            raise ValueError("exactly two streams required")
        labels = (keys[0], keys[1])
    slices = {}
    for label in labels:
        sents = [
            Sentence(doc_id=label, index=i, tokens=tuple(toks), period=label)
            for i, toks in enumerate(streams[label])
            if len(toks) > 0
        ]
        if not sents:
            raise EmptySlice(f"slice {label!r} is empty")
        slices[label] = tuple(sents)
    vocab = build_vocabulary(slices, labels, min_count=min_count)
    return TimeSlicedCorpus(labels=labels, slices=slices, vocabulary=vocab)


@dataclass(frozen=True)
class InjectionResult:
    """Merged tagged stream plus the tag bookkeeping for scoring."""

    sentences: tuple[tuple[str, ...], ...]
    tags: Mapping[str, tuple[str, str]]  # word -> (tagged earlier, tagged later)
    missing: Mapping[str, str]  # word -> reason it cannot be scored


def inject_words(
    corpus: TimeSlicedCorpus,
    targets: Iterable[str],
    separator: str = DEFAULT_TAG_SEPARATOR,
) -> InjectionResult:
    """Concatenate both slices, rewriting target words as period-tagged tokens.

    A target occurring as ``w`` in slice ``L`` becomes ``w<sep>L`` so one
    joint training run yields two period-specific vectors per target. Targets
    absent from either slice are reported in ``missing`` and left untagged.
    """
    if len(separator) != 1 or separator.isalnum():
        raise ValueError("separator must be a single non-alphanumeric character")
    for token in corpus.vocabulary:
        if separator in token:
            raise ValueError(f"separator {separator!r} occurs inside token {token!r}")

    tags: dict[str, tuple[str, str]] = {}
    missing: dict[str, str] = {}
    active: set[str] = set()
    for word in sorted(set(targets)):
        if word not in corpus.vocabulary:
            missing[word] = "absent from vocabulary"
            continue
        fa, fb = corpus.vocabulary.freq(word)
        if fa == 0 or fb == 0:
            absent = corpus.labels[0] if fa == 0 else corpus.labels[1]
            missing[word] = f"absent from slice {absent!r}"
            continue
        tags[word] = (
            f"{word}{separator}{corpus.labels[0]}",
            f"{word}{separator}{corpus.labels[1]}",
        )
        active.add(word)
    for word, reason in missing.items():
        log.warning("target %r excluded from injection: %s", word, reason)

    out = []
    for label in corpus.labels:
        for sent in corpus.slices[label]:
            out.append(
                tuple(
                    f"{tok}{separator}{label}" if tok in active else tok
                    for tok in sent.tokens
                )
            )
    return InjectionResult(sentences=tuple(out), tags=tags, missing=missing)


def strip_tags(
    sentences: Iterable[Sequence[str]], separator: str = DEFAULT_TAG_SEPARATOR
) -> list[list[str]]:
    """Invert :func:`inject_words` on a token stream."""
    return [[tok.split(separator, 1)[0] for tok in sent] for sent in sentences]


def load_manifest_corpus(
    manifest_path: str | Path,
    intervals: tuple[tuple[int, int], tuple[int, int]],
    labels: tuple[str, str] | None = None,
    rules: TokenizerConfig | None = None,
    min_count: int = 1,
) -> TimeSlicedCorpus:
    """Load documents listed in a JSON manifest of ``{path, id, year, region}``.

    Paths are resolved relative to the manifest file. Entries with missing or
    unparseable years are skipped with a logged count rather than guessed.
    """
    manifest_path = Path(manifest_path)
    entries = json.loads(manifest_path.read_text(encoding="utf-8"))
    docs = []
    unparseable = 0
    for entry in entries:
        try:
            year = int(entry["year"])
        except (KeyError, TypeError, ValueError):
            unparseable += 1
            continue
        text = (manifest_path.parent / entry["path"]).read_text(encoding="utf-8")
        docs.append(
            Document(id=str(entry["id"]), date=year, text=text, region=entry.get("region"))
        )
    if unparseable:
        log.warning("skipped %d manifest entr(ies) with unusable dates", unparseable)
    return merge_slices(docs, intervals, labels=labels, rules=rules, min_count=min_count)


def load_semeval_corpus(root: str | Path, min_count: int = 1) -> TimeSlicedCorpus:
    """Load the two-folder layout ``corpus1/`` and ``corpus2/``.

    Each file holds one pre-tokenized sentence per line; tokens are taken
    verbatim (no re-tokenization).
    """
    root = Path(root)
    streams: dict[str, list[list[str]]] = {}
    for label in ("corpus1", "corpus2"):
        folder = root / label
        if not folder.is_dir():
            raise FileNotFoundError(f"missing corpus folder {folder}")
        stream = []
        for path in sorted(folder.glob("**/*")):
            if not path.is_file():
                continue
            for line in path.read_text(encoding="utf-8").splitlines():
                toks = line.split()
                if toks:
                    stream.append(toks)
        streams[label] = stream
    return corpus_from_token_streams(streams, labels=("corpus1", "corpus2"), min_count=min_count)
