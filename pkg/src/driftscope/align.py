"""Orthogonal Procrustes alignment of two embedding spaces.

The earlier slice is rotated onto the later slice over their shared
vocabulary. The closed-form solution rotates by omega = U V^T where
U S V^T is the SVD of B^T A; omega minimizes the Frobenius mismatch
among all orthogonal maps and therefore never changes intra-slice
geometry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyIntersection
from .sgns import EmbeddingModel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlignOptions:
    """Preprocessing applied to both matrices before solving.

    Defaults leave vectors untouched; the diachronic-embedding lineage often
    length-normalizes rows and mean-centers columns, so both are available.
    """

    normalize: bool = False
    center: bool = False

    def to_dict(self) -> dict:
        return {"normalize": self.normalize, "center": self.center}

    @classmethod
    def from_dict(cls, data) -> "AlignOptions":
        return cls(normalize=bool(data.get("normalize", False)), center=bool(data.get("center", False)))


@dataclass
class AlignedPair:
    """Two matrices over the shared vocabulary, expressed in one coordinate system."""

    shared_vocab: list[str]
    a_aligned: np.ndarray  # |S| x d, earlier slice after rotation
    b: np.ndarray  # |S| x d, later slice (reference frame)
    omega: np.ndarray  # d x d orthogonal
    residual: float
    options: AlignOptions = field(default_factory=AlignOptions)
    model_ids: tuple[str, str] = ("", "")

    def __post_init__(self):
        self._index = {w: i for i, w in enumerate(self.shared_vocab)}

    @property
    def dim(self) -> int:
        return int(self.b.shape[1])

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def vectors_for(self, word: str) -> tuple[np.ndarray, np.ndarray]:
        i = self._index[word]
        return self.a_aligned[i], self.b[i]


def orthogonality_check(omega: np.ndarray) -> float:
    """Frobenius defect ||omega^T omega - I||_F of a square matrix."""
    omega = np.asarray(omega, dtype=np.float64)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {omega.shape}")
    d = omega.shape[0]
    return float(np.linalg.norm(omega.T @ omega - np.eye(d)))


def _preprocess(mat: np.ndarray, opts: AlignOptions) -> np.ndarray:
    out = mat.astype(np.float64, copy=True)
    if opts.normalize:
        norms = np.linalg.norm(out, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        out /= norms
    if opts.center:
        out -= out.mean(axis=0, keepdims=True)
    return out


def procrustes_matrices(
    a: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Solve the rotation for two row-aligned matrices; returns (a_rot, omega, residual)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    u, _, vt = np.linalg.svd(b.T @ a)
    omega = u @ vt
    a_rot = a @ omega.T
    residual = float(np.linalg.norm(a_rot - b))
    return a_rot, omega, residual


def shared_vocabulary(a: EmbeddingModel, b: EmbeddingModel) -> list[str]:
    """Intersection of the two vocabularies, by descending joint frequency."""
    common = set(a.vocabulary.entries) & set(b.vocabulary.entries)
    return sorted(common, key=lambda w: (-(a.vocabulary.total(w) + b.vocabulary.total(w)), w))


def procrustes(
    a: EmbeddingModel,
    b: EmbeddingModel,
    opts: AlignOptions | None = None,
    model_ids: tuple[str, str] = ("", ""),
) -> AlignedPair:
    """Align model ``a`` (earlier) onto model ``b`` (later).

    Words outside the shared vocabulary are excluded rather than padded; a
    shared vocabulary smaller than the dimensionality leaves the rotation
    under-determined and is warned about.
    """
    opts = opts or AlignOptions()
    if a.dim != b.dim:
        raise DimensionMismatch(f"model dimensions differ: {a.dim} vs {b.dim}")
    shared = shared_vocabulary(a, b)
    if not shared:
        raise EmptyIntersection("models share no vocabulary")
    if len(shared) < a.dim:
        log.warning(
            "shared vocabulary (%d) is smaller than the dimension (%d); rotation under-determined",
            len(shared),
            a.dim,
        )
    a_mat = _preprocess(a.matrix_for(shared), opts)
    b_mat = _preprocess(b.matrix_for(shared), opts)
    a_rot, omega, residual = procrustes_matrices(a_mat, b_mat)
    return AlignedPair(
        shared_vocab=shared,
        a_aligned=a_rot,
        b=b_mat,
        omega=omega,
        residual=residual,
        options=opts,
        model_ids=model_ids,
    )
