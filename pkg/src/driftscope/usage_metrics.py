"""Change scores over occurrence sets: divergence of usage distributions
and cluster-count drift, both built on affinity propagation."""

from __future__ import annotations

import logging

import numpy as np

from .affinity import affinity_propagation
from .occurrences import OccurrenceSet

log = logging.getLogger(__name__)

_EPS = 1e-10


def jensen_shannon(p, q, eps: float = _EPS) -> float:
    """Base-2 Jensen-Shannon divergence of two discrete distributions, in [0, 1]."""
    p = np.asarray(p, dtype=np.float64) + eps
    q = np.asarray(q, dtype=np.float64) + eps
    p = p / p.sum()
    q = q / q.sum()
    m = 0.5 * (p + q)
    kl_pm = np.sum(p * np.log2(p / m))
    kl_qm = np.sum(q * np.log2(q / m))
    return float(0.5 * kl_pm + 0.5 * kl_qm)


def _cluster_histograms(a: OccurrenceSet, b: OccurrenceSet, **ap_kwargs):
    pooled = np.vstack([a.vectors, b.vectors])
    if pooled.shape[0] < 2:
        raise ValueError("need at least 2 pooled occurrences")
    assignment = affinity_propagation(pooled, **ap_kwargs)
    exemplars = assignment.exemplar_indices
    index = {e: i for i, e in enumerate(exemplars)}
    hist_a = np.zeros(len(exemplars))
    hist_b = np.zeros(len(exemplars))
    for point, label in enumerate(assignment.labels):
        if point < len(a):
            hist_a[index[int(label)]] += 1
        else:
            hist_b[index[int(label)]] += 1
    return hist_a, hist_b, assignment


def jsd_change(a: OccurrenceSet, b: OccurrenceSet, **ap_kwargs) -> float:
    """Divergence between the two periods' usage distributions.

    Pools both occurrence sets, clusters them once, and compares each
    period's relative frequencies over the resulting clusters.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("occurrence sets must be non-empty")
    hist_a, hist_b, assignment = _cluster_histograms(a, b, **ap_kwargs)
    if not assignment.converged:
        log.warning("usage clustering for %r did not converge; score may be unstable", a.word)
    return jensen_shannon(hist_a, hist_b)


def cluster_count(vectors: np.ndarray, **ap_kwargs) -> int:
    """Number of usage clusters in one occurrence matrix (1 for a single point)."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.shape[0] < 2:
        return vectors.shape[0]
    return affinity_propagation(vectors, **ap_kwargs).n_clusters


def cluster_count_change(a: OccurrenceSet, b: OccurrenceSet, **ap_kwargs) -> float:
    """Normalized difference in usage-cluster counts between the two periods."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("occurrence sets must be non-empty")
    k_a = cluster_count(a.vectors, **ap_kwargs)
    k_b = cluster_count(b.vectors, **ap_kwargs)
    return abs(k_a - k_b) / max(k_a, k_b)
