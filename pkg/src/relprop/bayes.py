"""Bernoulli naive Bayes over boolean query features.

For a feature subset P the discriminant of class j is

    g_j(x) = sum_i x_i * ln(p_ij / (1 - p_ij)) + sum_i ln(1 - p_ij) + ln p(c_j)

with p_ij = (count(x_i = 1, c = j) + alpha) / (n_j + 2 * alpha) and unsmoothed
priors n_j / n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import FitError
from .propmat import FeatureMatrix

DEFAULT_SMOOTHING = 1.0
# discriminants closer than this count as tied; float summation order must not
# decide between mathematically equal classes
TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class NBModel:
    subset: tuple[int, ...]
    priors: np.ndarray  # (Q,)
    cond: np.ndarray  # (|P|, Q)
    smoothing: float = DEFAULT_SMOOTHING
    log_priors: np.ndarray = field(init=False, repr=False)
    log_odds: np.ndarray = field(init=False, repr=False)
    offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float)
        cond = np.asarray(self.cond, dtype=float).reshape(len(self.subset), priors.shape[0])
        if np.any(cond <= 0) or np.any(cond >= 1):
            raise FitError("conditional probabilities must lie strictly inside (0, 1)")
        log_odds, log_neg = _log_terms(cond)
        object.__setattr__(self, "subset", tuple(int(i) for i in self.subset))
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "log_priors", np.log(priors))
        object.__setattr__(self, "log_odds", log_odds)
        object.__setattr__(self, "offsets", log_neg.sum(axis=0))

    @property
    def num_classes(self) -> int:
        return self.priors.shape[0]

    def restrict(self, rows: np.ndarray) -> np.ndarray:
        """Select this model's coordinates from full-width feature rows."""
        return np.asarray(rows)[..., list(self.subset)]


def _log_terms(cond: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.log(cond) - np.log1p(-cond), np.log1p(-cond)


def _class_counts(matrix: FeatureMatrix) -> np.ndarray:
    labels = matrix.labels
    q = matrix.num_classes
    if labels.size and (labels.min() < 1 or labels.max() > q):
        raise FitError("training rows must carry labels in 1..Q")
    eta = np.bincount(labels - 1, minlength=q) if labels.size else np.zeros(q, dtype=int)
    missing = [j + 1 for j in range(q) if eta[j] == 0]
    if missing:
        raise FitError(f"no training rows for class(es) {missing}")
    return eta


def _estimate(bits: np.ndarray, labels: np.ndarray, eta: np.ndarray, smoothing: float):
    onehot = np.zeros((labels.shape[0], eta.shape[0]), dtype=np.int64)
    onehot[np.arange(labels.shape[0]), labels - 1] = 1
    counts = bits.astype(np.int64).T @ onehot  # (d, Q)
    return (counts + smoothing) / (eta + 2.0 * smoothing)


def fit(matrix: FeatureMatrix, subset: Iterable[int] = (), smoothing: float = DEFAULT_SMOOTHING) -> NBModel:
    if smoothing < 0:
        raise FitError(f"smoothing must be non-negative, got {smoothing}")
    subset = tuple(int(i) for i in subset)
    if any(i < 0 or i >= matrix.cols for i in subset):
        raise FitError(f"feature index out of range for {matrix.cols} columns")
    eta = _class_counts(matrix)
    cond = _estimate(matrix.bits[:, list(subset)], matrix.labels, eta, smoothing)
    degenerate = (cond <= 0) | (cond >= 1)
    if degenerate.any():
        i, j = np.argwhere(degenerate)[0]
        raise FitError(f"feature {subset[i]} has p={cond[i, j]:g} for class {j + 1}; "
                       "use smoothing > 0")
    return NBModel(subset, eta / eta.sum(), cond, smoothing)


def discriminant(model: NBModel, x) -> np.ndarray:
    """g_j for one row (shape ``(|P|,)``) or a batch (shape ``(n, |P|)``)."""
    x = np.asarray(x, dtype=float)
    return x @ model.log_odds + model.offsets + model.log_priors


def posterior(model: NBModel, x) -> np.ndarray:
    return softmax(discriminant(model, x))


def softmax(g: np.ndarray) -> np.ndarray:
    z = g - g.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def decide(scores, tol: float = TIE_TOL) -> np.ndarray | int:
    """1-based index of the best score; ties (within ``tol``) go to the lowest index."""
    scores = np.asarray(scores, dtype=float)
    top = scores.max(axis=-1, keepdims=True)
    out = np.argmax(scores >= top - tol, axis=-1) + 1
    return int(out) if out.ndim == 0 else out


def predict(model: NBModel, x) -> np.ndarray | int:
    """MAP class of one row or a batch."""
    return decide(discriminant(model, x))


def err(matrix: FeatureMatrix, subset: Iterable[int] = (), smoothing: float = DEFAULT_SMOOTHING) -> int:
    """Number of training rows misclassified by the model fitted on ``subset``."""
    model = fit(matrix, subset, smoothing)
    pred = predict(model, model.restrict(matrix.bits))
    return int(np.count_nonzero(pred != matrix.labels))


class SubsetScorer:
    """Memoised ``err`` for many subsets of one matrix.

    Each feature's parameters depend only on its own column, so they are
    estimated once for all columns and sliced per subset.
    """

    def __init__(self, matrix: FeatureMatrix, smoothing: float = DEFAULT_SMOOTHING):
        if smoothing < 0:
            raise FitError(f"smoothing must be non-negative, got {smoothing}")
        self.matrix = matrix
        self.smoothing = smoothing
        eta = _class_counts(matrix)
        self.cond = _estimate(matrix.bits, matrix.labels, eta, smoothing)
        self.degenerate = ((self.cond <= 0) | (self.cond >= 1)).any(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.log_odds, self.log_neg = _log_terms(self.cond)
        self.log_priors = np.log(eta / eta.sum())
        self.x = matrix.bits.astype(float)
        self.cache: dict[tuple[int, ...], int] = {}
        self.evaluations = 0

    def __call__(self, subset: Iterable[int]) -> int:
        key = tuple(sorted(subset))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        idx = list(key)
        if self.degenerate[idx].any():
            bad = [i for i in idx if self.degenerate[i]]
            raise FitError(f"features {bad} are degenerate; use smoothing > 0")
        g = self.x[:, idx] @ self.log_odds[idx] + self.log_neg[idx].sum(axis=0) + self.log_priors
        score = int(np.count_nonzero(decide(g) != self.matrix.labels))
        self.cache[key] = score
        self.evaluations += 1
        return score
