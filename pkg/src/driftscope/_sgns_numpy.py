"""Pure-numpy fallback for the skip-gram training loop.

Same epoch contract as the compiled kernel, but pairs are processed in
mini-batches with gather/scatter updates instead of strictly sequential
SGD. Within a batch, updates do not see each other; this is the usual
vectorized approximation and converges to equivalent embeddings. Selected
automatically when the compiled extension is unavailable.
"""

from __future__ import annotations

import numpy as np

_CLIP = 50.0
_BATCH = 512


def _pair_arrays(tokens, offsets, radii):
    """Vectorized (center, context) pair construction in positional order."""
    n = tokens.shape[0]
    counts = np.diff(offsets)
    starts = np.repeat(offsets[:-1], counts)
    ends = np.repeat(offsets[1:], counts)
    pos = np.arange(n, dtype=np.int64)
    lo = np.maximum(pos - radii, starts)
    hi = np.minimum(pos + radii, ends - 1)
    span = hi - lo  # excludes the center itself
    total = int(span.sum())
    if total == 0:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )
    centers_pos = np.repeat(pos, span)
    within = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(span) - span, span)
    ctx_pos = np.repeat(lo, span) + within
    ctx_pos += ctx_pos >= centers_pos  # skip the center slot
    return centers_pos, tokens[centers_pos].astype(np.int64), tokens[ctx_pos].astype(np.int64)


_HIT_CAP = 32.0


def _hit_scale(indices):
    """Per-element damping factor for rows that recur within one batch.

    A row hit k times gets k * min(k, cap)/k = min(k, cap) average-sized
    gradient steps: plain summation below the cap, bounded movement above it
    (summed stale-value updates diverge when the vocabulary is small).
    """
    rows, inverse, counts = np.unique(indices, return_inverse=True, return_counts=True)
    k = counts[inverse].astype(np.float32)
    return np.minimum(k, _HIT_CAP) / k


def train_epoch(
    syn0,
    syn1,
    tokens,
    offsets,
    noise_cdf,
    window,
    negative,
    alpha0,
    min_alpha,
    processed0,
    total_positions,
    seed,
):
    rng = np.random.default_rng(seed)
    tokens = np.asarray(tokens, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    radii = rng.integers(1, window + 1, size=tokens.shape[0])
    centers_pos, centers, contexts = _pair_arrays(tokens, offsets, radii)
    n_pairs = centers.shape[0]
    denom = max(total_positions, 1)
    loss = 0.0

    for lo in range(0, n_pairs, _BATCH):
        hi = min(lo + _BATCH, n_pairs)
        c = centers[lo:hi]
        ctx = contexts[lo:hi]
        p = hi - lo
        neg = np.searchsorted(noise_cdf, rng.random((p, negative)), side="right")
        targets = np.concatenate([ctx[:, None], neg], axis=1)
        live = np.ones((p, negative + 1), dtype=bool)
        live[:, 1:] = neg != ctx[:, None]  # redrawn positives are skipped

        v = syn0[c]
        u = syn1[targets]
        dots = np.clip(np.einsum("pd,pkd->pk", v, u, dtype=np.float64), -_CLIP, _CLIP)
        prob = 1.0 / (1.0 + np.exp(-dots))
        labels = np.zeros((1, negative + 1))
        labels[0, 0] = 1.0

        # one learning rate per batch, from the first center position's progress
        progress = (processed0 + centers_pos[lo]) / denom
        alpha = max(alpha0 - (alpha0 - min_alpha) * progress, min_alpha)

        g = (labels - prob) * alpha
        g[~live] = 0.0
        gf = g.astype(np.float32)

        dv = np.einsum("pk,pkd->pd", gf, u)
        dv *= _hit_scale(c)[:, None]
        np.add.at(syn0, c, dv)
        flat_targets = targets.reshape(-1)
        du = (gf[:, :, None] * v[:, None, :]).reshape(-1, syn0.shape[1])
        du *= _hit_scale(flat_targets)[:, None]
        np.add.at(syn1, flat_targets, du)

        pclip = np.clip(prob, 1e-10, 1.0 - 1e-10)
        loss -= float(np.log(pclip[:, 0]).sum())
        neg_live = live[:, 1:]
        loss -= float(np.log(1.0 - pclip[:, 1:][neg_live]).sum())

    return loss, int(n_pairs)
