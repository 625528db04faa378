"""Ranking metrics for binary tasks."""

from __future__ import annotations

import numpy as np

# recorded in reports so readers know which PR area they are looking at
PR_CONVENTION = "step-wise: sum over distinct thresholds of (recall increment) * precision"


class UndefinedMetric(ValueError):
    pass


def _check(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-d and of equal length")
    npos = int(labels.sum())
    if npos == 0 or npos == labels.size:
        raise UndefinedMetric("AUC needs at least one positive and one negative")
    return scores, labels, npos, labels.size - npos


def auc_roc(scores, labels) -> float:
    """P(score+ > score-) + 0.5 * P(tie), via tie-averaged ranks."""
    scores, labels, npos, nneg = _check(scores, labels)
    order = np.argsort(scores, kind="mergesort")
    s = scores[order]
    ranks = np.empty(s.size)
    i = 0
    while i < s.size:
        j = i
        while j + 1 < s.size and s[j + 1] == s[i]:
            j += 1
        ranks[i:j + 1] = (i + j) / 2.0 + 1.0
        i = j + 1
    rank_sum = ranks[labels[order]].sum()
    # rank_sum is a multiple of 0.5, so the numerator is exact
    u = rank_sum - npos * (npos + 1) / 2.0
    return float(u / (npos * nneg))


def auc_pr(scores, labels) -> float:
    """Area under the non-interpolated precision-recall step curve."""
    scores, labels, npos, _ = _check(scores, labels)
    order = np.argsort(-scores, kind="mergesort")
    s = scores[order]
    y = labels[order]
    tp = np.cumsum(y)
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp_at = tp[last]
    precision = tp_at / (last + 1)
    recall = tp_at / npos
    steps = np.diff(np.r_[0.0, recall])
    return float(np.sum(steps * precision))
