"""driftscope: lexical semantic change detection over two-period corpora."""

__version__ = "0.1.0"

from . import errors
from .corpus import (
    Document,
    Sentence,
    TimeSlicedCorpus,
    TokenizerConfig,
    Vocabulary,
    corpus_from_token_streams,
    extract_vocabulary,
    inject_words,
    merge_slices,
    tokenize,
)
from .sgns import BACKEND, EmbeddingModel, SgnsConfig, train, train_op_pair, train_wi

__all__ = [
    "BACKEND",
    "Document",
    "EmbeddingModel",
    "Sentence",
    "SgnsConfig",
    "TimeSlicedCorpus",
    "TokenizerConfig",
    "Vocabulary",
    "corpus_from_token_streams",
    "errors",
    "extract_vocabulary",
    "inject_words",
    "merge_slices",
    "tokenize",
    "train",
    "train_op_pair",
    "train_wi",
    "__version__",
]
