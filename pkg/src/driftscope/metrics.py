"""Metric registry: names, kinds, and dispatch for all change scores."""

from __future__ import annotations

import numpy as np

from . import distances, usage_metrics
from .errors import UnknownMetric
from .occurrences import OccurrenceSet

STATIC_METRICS = (
    "euclidean",
    "manhattan",
    "canberra",
    "cosine",
    "bray-curtis",
    "correlation",
)

CONTEXTUAL_METRICS = (
    "apd-euclidean",
    "apd-manhattan",
    "apd-canberra",
    "apd-cosine",
    "jsd",
    "cluster-count",
)

ALL_METRICS = STATIC_METRICS + CONTEXTUAL_METRICS

_STATIC_FNS = {
    "euclidean": distances.euclidean,
    "manhattan": distances.manhattan,
    "canberra": distances.canberra,
    "cosine": distances.cosine_dist,
    "bray-curtis": distances.bray_curtis,
    "correlation": distances.correlation_dist,
}


def is_static(metric_id: str) -> bool:
    if metric_id not in ALL_METRICS:
        raise UnknownMetric(f"unknown metric {metric_id!r}; valid: {', '.join(ALL_METRICS)}")
    return metric_id in STATIC_METRICS


def static_distance(metric_id: str, a: np.ndarray, b: np.ndarray) -> float:
    try:
        fn = _STATIC_FNS[metric_id]
    except KeyError:
        raise UnknownMetric(
            f"unknown static metric {metric_id!r}; valid: {', '.join(STATIC_METRICS)}"
        ) from None
    return fn(a, b)


def contextual_distance(metric_id: str, a: OccurrenceSet, b: OccurrenceSet) -> float:
    if metric_id.startswith("apd-"):
        base = metric_id[len("apd-") :]
        if base not in distances.APD_BASES:
            raise UnknownMetric(
                f"unknown metric {metric_id!r}; valid: {', '.join(CONTEXTUAL_METRICS)}"
            )
        return distances.apd(a.vectors, b.vectors, base=base)
    if metric_id == "jsd":
        return usage_metrics.jsd_change(a, b)
    if metric_id == "cluster-count":
        return usage_metrics.cluster_count_change(a, b)
    raise UnknownMetric(f"unknown metric {metric_id!r}; valid: {', '.join(CONTEXTUAL_METRICS)}")
