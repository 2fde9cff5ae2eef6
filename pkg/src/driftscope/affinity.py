"""Affinity propagation clustering via damped message passing.

Exemplars emerge from alternating responsibility/availability updates over
a similarity matrix s(i,k) = -||x_i - x_k||^2 with the preference on the
diagonal. No tie-breaking noise is injected, so results are deterministic
for a fixed input order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


@dataclass
class ClusterAssignment:
    exemplar_indices: list[int]
    labels: np.ndarray  # per point, the index of its exemplar point
    iterations_run: int
    converged: bool

    @property
    def n_clusters(self) -> int:
        return len(self.exemplar_indices)


def similarity_matrix(points: np.ndarray, preference) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    s = -np.sum(diff * diff, axis=-1)
    if preference == "median":
        n = s.shape[0]
        off = s[~np.eye(n, dtype=bool)]
        pref = float(np.median(off)) if off.size else 0.0
    else:
        pref = float(preference)
    np.fill_diagonal(s, pref)
    return s


def affinity_propagation(
    points,
    preference="median",
    damping: float = 0.9,
    max_iter: int = 200,
    convergence_window: int = 15,
) -> ClusterAssignment:
    """Cluster points; the cluster count emerges from the preference.

    Damping below ~0.7 lets the messages oscillate on well-separated
    clusters, hence the high default. Returns a flagged
    (``converged=False``) but still usable assignment when the exemplar set
    fails to stabilize within ``max_iter`` iterations.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("affinity propagation needs at least 2 points")
    if not (0.5 <= damping < 1.0):
        raise ValueError("damping must lie in [0.5, 1)")
    n = points.shape[0]
    s = similarity_matrix(points, preference)
    r = np.zeros((n, n))
    a = np.zeros((n, n))
    idx = np.arange(n)

    stable = 0
    prev_exemplars: np.ndarray | None = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        # responsibilities: r(i,k) = s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        as_ = a + s
        first = np.argmax(as_, axis=1)
        max1 = as_[idx, first]
        as_[idx, first] = -np.inf
        max2 = np.max(as_, axis=1)
        r_new = s - max1[:, None]
        r_new[idx, first] = s[idx, first] - max2
        r = damping * r + (1.0 - damping) * r_new

        # availabilities: a(i,k) = min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        rp = np.maximum(r, 0.0)
        np.fill_diagonal(rp, r.diagonal())
        a_new = rp.sum(axis=0)[None, :] - rp
        diag = a_new.diagonal().copy()
        a_new = np.minimum(a_new, 0.0)
        np.fill_diagonal(a_new, diag)
        a = damping * a + (1.0 - damping) * a_new

        exemplars = np.flatnonzero(r.diagonal() + a.diagonal() > 0)
        if prev_exemplars is not None and np.array_equal(exemplars, prev_exemplars):
            stable += 1
            if stable >= convergence_window and exemplars.size > 0:
                converged = True
                break
        else:
            stable = 0
        prev_exemplars = exemplars

    exemplars = np.flatnonzero(r.diagonal() + a.diagonal() > 0)
    if exemplars.size == 0:
        # degenerate run (e.g. all-identical points): elect the best candidate
        exemplars = np.array([int(np.argmax(r.diagonal() + a.diagonal()))])
        converged = False
    if not converged:
        log.warning("affinity propagation did not converge in %d iterations", it)

    labels = exemplars[np.argmax(s[:, exemplars], axis=1)]
    labels[exemplars] = exemplars
    return ClusterAssignment(
        exemplar_indices=[int(e) for e in exemplars],
        labels=labels,
        iterations_run=it,
        converged=converged,
    )
