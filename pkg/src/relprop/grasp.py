"""GRASP feature-subset search minimising the naive Bayes training error.

Each iteration draws a greediness level ``alpha`` in [0, 1), builds a subset
by randomised greedy additions from a restricted candidate list, improves it
by best-improvement local search over add/replace moves, and archives it if
it beats every solution archived so far. The archive, not just its best
element, is the output: it feeds the subspace ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .bayes import DEFAULT_SMOOTHING, SubsetScorer
from .errors import ConfigError, ParseError
from .propmat import FeatureMatrix

DEFAULT_MAXITER = 100


@dataclass(frozen=True)
class Solution:
    subset: frozenset[int]
    score: int
    iteration: int = -1

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.subset))


@dataclass(frozen=True)
class GraspConfig:
    maxiter: int = DEFAULT_MAXITER
    seed: int = 0
    smoothing: float = DEFAULT_SMOOTHING
    max_subset_size: int | None = None

    def __post_init__(self):
        if int(self.maxiter) != self.maxiter or self.maxiter < 1:
            raise ConfigError(f"maxiter must be a positive integer, got {self.maxiter}")
        if self.smoothing < 0:
            raise ConfigError(f"smoothing must be non-negative, got {self.smoothing}")
        if self.max_subset_size is not None and self.max_subset_size < 1:
            raise ConfigError("max_subset_size must be positive when given")


def _as_scorer(target: FeatureMatrix | SubsetScorer, smoothing: float) -> SubsetScorer:
    if isinstance(target, SubsetScorer):
        return target
    return SubsetScorer(target, smoothing)


def _cap(scorer: SubsetScorer, max_size: int | None) -> int:
    d = scorer.matrix.cols
    return d if max_size is None else min(d, max_size)


def construct(target, alpha: float, rng: np.random.Generator,
              max_size: int | None = None, smoothing: float = DEFAULT_SMOOTHING) -> Solution:
    """Randomised greedy construction from the empty subset.

    The candidate drawn from the restricted list is kept only if it strictly
    lowers the error; otherwise construction stops, even if another list
    member would have improved.
    """
    scorer = _as_scorer(target, smoothing)
    d = scorer.matrix.cols
    cap = _cap(scorer, max_size)
    current: set[int] = set()
    score = scorer(current)
    while len(current) < cap:
        candidates = [i for i in range(d) if i not in current]
        scores = [scorer(current | {i}) for i in candidates]
        lo, hi = min(scores), max(scores)
        threshold = lo + alpha * (hi - lo)
        rcl = [k for k, s in enumerate(scores) if s <= threshold]
        pick = rcl[int(rng.integers(len(rcl)))]
        if scores[pick] >= score:
            break
        current.add(candidates[pick])
        score = scores[pick]
    return Solution(frozenset(current), score)


def neighbours(subset: frozenset[int], d: int, max_size: int | None = None):
    """Subsets one add or one replace away, in a fixed order."""
    inside = sorted(subset)
    outside = [k for k in range(d) if k not in subset]
    if max_size is None or len(inside) < max_size:
        for k in outside:
            yield subset | {k}
    for i in inside:
        rest = subset - {i}
        for k in outside:
            yield rest | {k}


def local_search(target, solution: Solution, max_size: int | None = None,
                 smoothing: float = DEFAULT_SMOOTHING) -> Solution:
    """Best-improvement descent; ties go to the lexicographically smallest subset."""
    scorer = _as_scorer(target, smoothing)
    d = scorer.matrix.cols
    current = solution
    while True:
        best = None
        for nb in neighbours(current.subset, d, max_size):
            s = scorer(nb)
            if s >= current.score:
                continue
            key = (s, tuple(sorted(nb)))
            if best is None or key < best:
                best = key
        if best is None:
            return current
        current = Solution(frozenset(best[1]), best[0], current.iteration)


def grasp_fs(matrix: FeatureMatrix, cfg: GraspConfig = GraspConfig(),
             scorer: SubsetScorer | None = None) -> list[Solution]:
    """Run ``cfg.maxiter`` iterations and return the improving archive.

    Archive scores strictly decrease; the last element is the best found.
    """
    scorer = scorer or SubsetScorer(matrix, cfg.smoothing)
    rng = np.random.default_rng(cfg.seed)
    archive: list[Solution] = []
    for it in range(cfg.maxiter):
        alpha = float(rng.random())
        s = construct(scorer, alpha, rng, cfg.max_subset_size)
        s = local_search(scorer, s, cfg.max_subset_size)
        if not archive or s.score < archive[-1].score:
            archive.append(replace(s, iteration=it))
    return archive


def format_archive(archive: Sequence[Solution]) -> str:
    lines = []
    for s in archive:
        lines.append("\t".join([str(s.iteration), str(s.score), *map(str, s.indices)]))
    return "".join(line + "\n" for line in lines)


def parse_archive(text: str) -> list[Solution]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        try:
            it, score, *idx = (int(f) for f in fields)
        except ValueError:
            raise ParseError("expected integer fields 'iteration<TAB>score<TAB>indices...'",
                             lineno, 1) from None
        out.append(Solution(frozenset(idx), score, it))
    return out
