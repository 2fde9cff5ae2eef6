"""Static vector distances and the average-pairwise-distance family.

All functions take two same-dimension vectors (or matrices for the set
distances) and return a non-negative float. Degenerate terms follow the
usual conventions: 0/0 component terms contribute nothing.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, UnknownMetric


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionMismatch("expected 1-D vectors")
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("vectors must be finite")
    return a, b


def euclidean(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.sqrt(np.sum((a - b) ** 2)))


def manhattan(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.sum(np.abs(a - b)))


def canberra(a, b) -> float:
    a, b = _pair(a, b)
    num = np.abs(a - b)
    den = np.abs(a) + np.abs(b)
    return float(np.sum(np.divide(num, den, out=np.zeros_like(num), where=den > 0)))


def cosine_dist(a, b) -> float:
    a, b = _pair(a, b)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("cosine distance undefined for an all-zero vector")
    return float(1.0 - np.dot(a, b) / (na * nb))


def bray_curtis(a, b, conventional: bool = False) -> float:
    """Bray-Curtis dissimilarity.

    Default is the term-wise quotient sum sum(|a_i-b_i| / |a_i+b_i|); the
    textbook ratio-of-sums form sum|a_i-b_i| / sum|a_i+b_i| is available via
    ``conventional=True``. Zero-denominator terms contribute 0.
    """
    a, b = _pair(a, b)
    num = np.abs(a - b)
    if conventional:
        den = np.sum(np.abs(a + b))
        return float(np.sum(num) / den) if den > 0 else 0.0
    den = np.abs(a + b)
    return float(np.sum(np.divide(num, den, out=np.zeros_like(num), where=den > 0)))


def correlation_dist(a, b) -> float:
    a, b = _pair(a, b)
    ac = a - a.mean()
    bc = b - b.mean()
    na, nb = np.linalg.norm(ac), np.linalg.norm(bc)
    if na == 0 or nb == 0:
        raise ValueError("correlation distance undefined for a constant vector")
    return float(1.0 - np.dot(ac, bc) / (na * nb))


def _pairwise(a: np.ndarray, b: np.ndarray, base: str) -> np.ndarray:
    if base == "euclidean":
        sq = np.sum(a**2, axis=1)[:, None] + np.sum(b**2, axis=1)[None, :] - 2.0 * (a @ b.T)
        return np.sqrt(np.clip(sq, 0.0, None))
    if base == "manhattan":
        return np.sum(np.abs(a[:, None, :] - b[None, :, :]), axis=-1)
    if base == "canberra":
        num = np.abs(a[:, None, :] - b[None, :, :])
        den = np.abs(a)[:, None, :] + np.abs(b)[None, :, :]
        return np.sum(np.divide(num, den, out=np.zeros_like(num), where=den > 0), axis=-1)
    if base == "cosine":
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        if np.any(na == 0) or np.any(nb == 0):
            raise ValueError("cosine distance undefined for an all-zero vector")
        return 1.0 - (a @ b.T) / np.outer(na, nb)
    raise UnknownMetric(f"unknown APD base distance {base!r}")


APD_BASES = ("euclidean", "manhattan", "canberra", "cosine")


def apd(a: np.ndarray, b: np.ndarray, base: str = "cosine") -> float:
    """Mean absolute base-distance over the full Cartesian product of rows."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatch("expected 2-D occurrence matrices")
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("APD needs non-empty occurrence sets")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"occurrence dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    return float(np.mean(np.abs(_pairwise(a, b, base))))
