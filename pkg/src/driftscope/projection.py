"""Exact t-SNE projection to 3-D, pairing same-word points across periods.

Stage one turns pairwise input distances into a joint affinity
distribution, binary-searching each point's kernel bandwidth to a target
perplexity. Stage two runs momentum gradient descent on Student-t output
affinities, minimizing the KL divergence between the two distributions.
Point counts here are small (target words x 2), so the O(n^2) exact
gradient is the right tool.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .align import AlignedPair
from .errors import PerplexityTooHigh

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TsneParams:
    perplexity: float | None = None  # None -> min(30, (n-1)/3) at run time
    iterations: int = 1000
    learning_rate: float = 200.0
    early_exaggeration: float = 12.0
    exaggeration_iters: int = 250
    momentum_start: float = 0.5
    momentum_final: float = 0.8
    momentum_switch_iter: int = 250
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 250:
            raise ValueError("iterations must be >= 250")
        if self.perplexity is not None and self.perplexity <= 0:
            raise ValueError("perplexity must be positive")

    def resolve_perplexity(self, n: int) -> float:
        limit = (n - 1) / 3.0
        if self.perplexity is None:
            return min(30.0, limit)
        if self.perplexity > limit:
            raise PerplexityTooHigh(
                f"perplexity {self.perplexity} needs more points: max {limit:.2f} for n={n}"
            )
        return float(self.perplexity)

    def to_dict(self) -> dict:
        return {
            "perplexity": self.perplexity,
            "iterations": self.iterations,
            "learning_rate": self.learning_rate,
            "early_exaggeration": self.early_exaggeration,
            "exaggeration_iters": self.exaggeration_iters,
            "momentum_start": self.momentum_start,
            "momentum_final": self.momentum_final,
            "momentum_switch_iter": self.momentum_switch_iter,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TsneParams":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


@dataclass
class ProjectionResult:
    points: list[tuple[str, str, tuple[float, float, float]]]  # (word, period, xyz)
    links: list[tuple[int, int]]  # indices into points; same word, different period
    kl_trace: list[float]
    params: TsneParams
    warnings: list[str] = field(default_factory=list)


def _input_affinities(x: np.ndarray, perplexity: float, tol: float = 1e-5) -> np.ndarray:
    """Symmetrized Gaussian affinities with per-point bandwidth search."""
    n = x.shape[0]
    sq = np.sum(x**2, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
    target_entropy = np.log(perplexity)
    p_cond = np.zeros((n, n))

    if np.allclose(d2, 0.0):
        # all points coincide: fall back to uniform affinities
        log.warning("all input vectors identical; using uniform affinities")
        p_cond[:] = 1.0 / (n - 1)
        np.fill_diagonal(p_cond, 0.0)
    else:
        for i in range(n):
            di = np.delete(d2[i], i)
            beta, lo, hi = 1.0, 0.0, np.inf
            for _ in range(64):
                w = np.exp(-di * beta)
                sw = w.sum()
                if sw <= 0:
                    entropy = 0.0
                    p = np.zeros_like(w)
                else:
                    p = w / sw
                    nz = p > 0
                    entropy = -np.sum(p[nz] * np.log(p[nz]))
                if abs(entropy - target_entropy) < tol:
                    break
                if entropy > target_entropy:
                    lo = beta
                    beta = beta * 2.0 if hi == np.inf else (beta + hi) / 2.0
                else:
                    hi = beta
                    beta = (beta + lo) / 2.0
            row = np.insert(p, i, 0.0)
            p_cond[i] = row

    p = (p_cond + p_cond.T) / (2.0 * n)
    return np.maximum(p, 1e-12)


def tsne3d(vectors: np.ndarray, params: TsneParams | None = None):
    """Project an (n, d) matrix to (n, 3); returns (coords, kl_trace).

    The KL trace is computed against the unexaggerated affinities each
    iteration; coordinates are re-centered at every step so the final
    embedding has zero mean.
    """
    params = params or TsneParams()
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    n, d = x.shape
    if n < 5:
        raise ValueError(f"need at least 5 points, got {n}")
    if d < 3:
        raise ValueError(f"need at least 3 input dimensions, got {d}")
    perplexity = params.resolve_perplexity(n)

    p = _input_affinities(x, perplexity)
    rng = np.random.default_rng(params.seed)
    y = rng.normal(0.0, 1e-4, size=(n, 3))
    velocity = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_trace = []

    for it in range(params.iterations):
        exaggerating = it < params.exaggeration_iters
        p_eff = p * params.early_exaggeration if exaggerating else p
        momentum = (
            params.momentum_start if it < params.momentum_switch_iter else params.momentum_final
        )

        sq = np.sum(y**2, axis=1)
        num = 1.0 / (1.0 + np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0))
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), 1e-12)

        kl_trace.append(float(np.sum(p * np.log(p / q))))

        mult = (p_eff - q) * num
        grad = 4.0 * ((np.diag(mult.sum(axis=1)) - mult) @ y)

        # adaptive per-coordinate gains, as in the reference implementation
        same_sign = np.sign(grad) == np.sign(velocity)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        gains = np.maximum(gains, 0.01)

        velocity = momentum * velocity - params.learning_rate * gains * grad
        y = y + velocity
        y = y - y.mean(axis=0, keepdims=True)

    return y, kl_trace


def project_pair(
    artifact,
    words: Sequence[str],
    params: TsneParams | None = None,
) -> ProjectionResult:
    """Joint 3-D projection of both periods' vectors for the requested words.

    Accepts an aligned pair or a word-injected artifact (anything exposing
    period vectors per word). Words present in only one period contribute a
    single unlinked point and a warning.
    """
    params = params or TsneParams()
    labels = _period_labels(artifact)
    rows: list[tuple[str, str, np.ndarray]] = []
    warnings: list[str] = []
    for word in dict.fromkeys(words):
        pair = _period_vectors(artifact, word)
        found = 0
        for label, vec in zip(labels, pair):
            if vec is not None:
                rows.append((word, label, vec))
                found += 1
        if found == 0:
            warnings.append(f"word {word!r} has no vectors in either period")
        elif found == 1:
            warnings.append(f"word {word!r} present in one period only; no link drawn")
    for message in warnings:
        log.warning("%s", message)
    if not rows:
        raise ValueError("none of the requested words have vectors")

    matrix = np.vstack([vec for _, _, vec in rows])
    coords, kl_trace = tsne3d(matrix, params)

    points = [
        (word, period, (float(c[0]), float(c[1]), float(c[2])))
        for (word, period, _), c in zip(rows, coords)
    ]
    by_word: dict[str, list[int]] = {}
    for i, (word, _, _) in enumerate(rows):
        by_word.setdefault(word, []).append(i)
    links = [(ix[0], ix[1]) for ix in by_word.values() if len(ix) == 2]
    return ProjectionResult(
        points=points, links=links, kl_trace=kl_trace, params=params, warnings=warnings
    )


def _period_labels(artifact) -> tuple[str, str]:
    if isinstance(artifact, AlignedPair):
        a_id, b_id = artifact.model_ids
        return (a_id or "earlier", b_id or "later")
    if hasattr(artifact, "model") and hasattr(artifact, "tags"):  # word-injected
        return ("earlier", "later")
    raise TypeError(f"cannot project artifact of type {type(artifact).__name__}")


def _period_vectors(artifact, word: str):
    if isinstance(artifact, AlignedPair):
        if word in artifact:
            return artifact.vectors_for(word)
        return (None, None)
    tags = artifact.tags.get(word)
    if tags is None:
        return (None, None)
    model = artifact.model
    return tuple(model.vector(t) if t in model else None for t in tags)
