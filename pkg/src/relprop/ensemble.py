"""Random-subspace ensemble whose subspaces are the GRASP archive."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import bayes
from .bayes import NBModel
from .errors import ConfigError
from .grasp import GraspConfig, Solution, grasp_fs
from .propmat import FeatureMatrix

log = logging.getLogger(__name__)

COMBINATIONS = ("mean", "vote")


@dataclass(frozen=True, eq=False)
class Ensemble:
    members: tuple[NBModel, ...]
    requested_size: int
    combination: str = "mean"
    archive: tuple[Solution, ...] = ()

    @property
    def shortfall(self) -> bool:
        return len(self.members) < self.requested_size

    @property
    def num_classes(self) -> int:
        return self.members[0].num_classes


def select_members(archive, ensemble_size: int) -> list[Solution]:
    """The last ``ensemble_size`` archived solutions (the best ones)."""
    return list(archive[-ensemble_size:])


def rsm_fit(matrix: FeatureMatrix, cfg: GraspConfig = GraspConfig(), ensemble_size: int = 1,
            combination: str = "mean") -> Ensemble:
    if ensemble_size < 1:
        raise ConfigError(f"ensemble_size must be at least 1, got {ensemble_size}")
    if combination not in COMBINATIONS:
        raise ConfigError(f"combination must be one of {COMBINATIONS}")
    archive = grasp_fs(matrix, cfg)
    chosen = select_members(archive, ensemble_size)
    if len(chosen) < ensemble_size:
        log.info("GRASP archive holds %d solutions; ensemble has %d of %d requested members",
                 len(archive), len(chosen), ensemble_size)
    members = tuple(bayes.fit(matrix, s.indices, cfg.smoothing) for s in chosen)
    return Ensemble(members, ensemble_size, combination, tuple(archive))


def member_posteriors(ens: Ensemble, rows) -> np.ndarray:
    """Shape ``(members, ..., Q)``; each member reads its own coordinates."""
    rows = np.asarray(rows)
    return np.stack([bayes.posterior(m, m.restrict(rows)) for m in ens.members])


def combine(ens: Ensemble, rows) -> np.ndarray:
    post = member_posteriors(ens, rows)
    if ens.combination == "vote":
        q = post.shape[-1]
        votes = np.eye(q)[bayes.decide(post) - 1]
        return votes.mean(axis=0)
    return post.mean(axis=0)


def rsm_predict(ens: Ensemble, row) -> tuple[int, np.ndarray]:
    """Class and combined posterior for one full-width feature row."""
    combined = combine(ens, row)
    return bayes.decide(combined), combined


def rsm_predict_batch(ens: Ensemble, rows) -> tuple[np.ndarray, np.ndarray]:
    combined = combine(ens, np.atleast_2d(rows))
    return np.atleast_1d(bayes.decide(combined)), combined
