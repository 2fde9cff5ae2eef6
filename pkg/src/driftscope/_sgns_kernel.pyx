# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop for skip-gram negative-sampling training.

One pass over an encoded sentence stream with sequential per-pair SGD
updates, matching the classic word2vec update order. The pure-Python
backend in ``_sgns_numpy`` is the fallback when this module is not built.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()

cdef double _CLIP = 50.0


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline unsigned long long _next(unsigned long long *state) nogil:
    state[0] = state[0] + 0x9E3779B97F4A7C15ULL
    return _mix(state[0])


cdef inline double _uniform(unsigned long long *state) nogil:
    return (_next(state) >> 11) * (1.0 / 9007199254740992.0)


cdef inline long _draw_noise(double[::1] cdf, double u) nogil:
    # first index with cdf[i] > u
    cdef long lo = 0, hi = cdf.shape[0] - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


def train_epoch(
    float[:, ::1] syn0,
    float[:, ::1] syn1,
    int[::1] tokens,
    long long[::1] offsets,
    double[::1] noise_cdf,
    int window,
    int negative,
    double alpha0,
    double min_alpha,
    long long processed0,
    long long total_positions,
    unsigned long long seed,
):
    """Run one epoch over ``tokens`` (sentence s spans offsets[s]:offsets[s+1]).

    Updates ``syn0``/``syn1`` in place and returns ``(loss_sum, pair_count)``
    where ``loss_sum`` is the summed log-sigmoid loss over positive pairs and
    their negative samples.
    """
    cdef long n_sent = offsets.shape[0] - 1
    cdef int d = syn0.shape[1]
    cdef long s, i, j, k, lo, hi
    cdef long center, ctx, target
    cdef int t, b
    cdef double alpha, dot, p, g, u, loss = 0.0
    cdef double label
    cdef long long processed = processed0
    cdef long long pairs = 0
    cdef unsigned long long state = _mix(seed ^ 0xD1B54A32D192ED03ULL)
    cdef float[::1] work = np.zeros(d, dtype=np.float32)
    cdef double denom = total_positions if total_positions > 0 else 1

    with nogil:
        for s in range(n_sent):
            for i in range(offsets[s], offsets[s + 1]):
                center = tokens[i]
                alpha = alpha0 - (alpha0 - min_alpha) * (processed / denom)
                if alpha < min_alpha:
                    alpha = min_alpha
                b = 1 + <int>(_next(&state) % window)
                lo = i - b
                if lo < offsets[s]:
                    lo = offsets[s]
                hi = i + b
                if hi > offsets[s + 1] - 1:
                    hi = offsets[s + 1] - 1
                for j in range(lo, hi + 1):
                    if j == i:
                        continue
                    ctx = tokens[j]
                    pairs += 1
                    for k in range(d):
                        work[k] = 0.0
                    for t in range(negative + 1):
                        if t == 0:
                            target = ctx
                            label = 1.0
                        else:
                            target = _draw_noise(noise_cdf, _uniform(&state))
                            if target == ctx:
                                continue
                            label = 0.0
                        dot = 0.0
                        for k in range(d):
                            dot += syn0[center, k] * syn1[target, k]
                        if dot > _CLIP:
                            dot = _CLIP
                        elif dot < -_CLIP:
                            dot = -_CLIP
                        p = 1.0 / (1.0 + exp(-dot))
                        if label > 0.5:
                            loss -= log(p if p > 1e-10 else 1e-10)
                        else:
                            loss -= log((1.0 - p) if p < 1.0 - 1e-10 else 1e-10)
                        g = (label - p) * alpha
                        for k in range(d):
                            work[k] += <float>(g) * syn1[target, k]
                        for k in range(d):
                            syn1[target, k] += <float>(g) * syn0[center, k]
                    for k in range(d):
                        syn0[center, k] += work[k]
                processed += 1

    return loss, pairs
