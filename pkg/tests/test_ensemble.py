import logging

import numpy as np
import pytest

from oracles import bayes_rule_posterior
from relprop import bayes
from relprop.ensemble import Ensemble, rsm_fit, rsm_predict, rsm_predict_batch
from relprop.errors import ConfigError
from relprop.grasp import GraspConfig, grasp_fs


def two_member_ensemble(combination="mean"):
    a = bayes.NBModel((0,), [0.5, 0.5], [[0.9, 0.1]])
    b = bayes.NBModel((1,), [0.5, 0.5], [[0.5, 0.5]])
    return Ensemble((a, b), 2, combination)


def test_mean_of_posteriors():
    cls, post = rsm_predict(two_member_ensemble(), [1, 1])
    assert post == pytest.approx([0.7, 0.3], abs=1e-15)
    assert cls == 1


def test_identical_members_pass_through():
    m = bayes.NBModel((0,), [0.3, 0.7], [[0.8, 0.4]])
    ens = Ensemble((m, m, m), 3)
    _, post = rsm_predict(ens, [1])
    assert post == pytest.approx(bayes.posterior(m, [1]), abs=1e-15)


def test_vote_switch():
    a = bayes.NBModel((0,), [0.5, 0.5], [[0.9, 0.1]])
    b = bayes.NBModel((0,), [0.5, 0.5], [[0.4, 0.6]])
    c = bayes.NBModel((0,), [0.5, 0.5], [[0.45, 0.55]])
    cls, post = rsm_predict(Ensemble((a, b, c), 3, "vote"), [1])
    assert cls == 2 and post == pytest.approx([1 / 3, 2 / 3])
    cls, _ = rsm_predict(Ensemble((a, b, c), 3, "mean"), [1])
    assert cls == 1


def test_bad_arguments(t1_matrix):
    with pytest.raises(ConfigError):
        rsm_fit(t1_matrix, GraspConfig(maxiter=2), 0)
    with pytest.raises(ConfigError):
        rsm_fit(t1_matrix, GraspConfig(maxiter=2), 1, "median")


def test_members_are_archive_tail(t1_matrix):
    cfg = GraspConfig(maxiter=100, seed=12)
    archive = grasp_fs(t1_matrix, cfg)
    for size in (1, 2, 40):
        ens = rsm_fit(t1_matrix, cfg, size)
        tail = archive[-size:]
        assert [m.subset for m in ens.members] == [s.indices for s in tail]
        assert list(ens.archive) == archive


def test_shortfall_reported(t1_matrix, caplog):
    with caplog.at_level(logging.INFO, logger="relprop.ensemble"):
        ens = rsm_fit(t1_matrix, GraspConfig(maxiter=10, seed=0), 40)
    assert ens.shortfall and len(ens.members) == len(ens.archive) < 40
    assert "requested" in caplog.text


def test_size_one_equals_best_model(t1_matrix):
    cfg = GraspConfig(maxiter=50, seed=8)
    ens = rsm_fit(t1_matrix, cfg, 1)
    best = bayes.fit(t1_matrix, grasp_fs(t1_matrix, cfg)[-1].indices)
    cls, _ = rsm_predict_batch(ens, t1_matrix.bits)
    assert (cls == bayes.predict(best, best.restrict(t1_matrix.bits))).all()


def test_combined_posterior_matches_oracle(t1_matrix):
    subsets = [(0,), (4, 7), (1, 3, 9), ()]
    members = tuple(bayes.fit(t1_matrix, s) for s in subsets)
    ens = Ensemble(members, len(members))
    for row in t1_matrix.bits:
        want = np.mean([bayes_rule_posterior(list(m.priors), m.cond.tolist(),
                                             [bool(row[i]) for i in m.subset])
                        for m in members], axis=0)
        _, got = rsm_predict(ens, row)
        assert got == pytest.approx(want, abs=1e-12)
        assert abs(got.sum() - 1) <= 1e-12


def test_ensemble_no_worse_than_worst_member_on_fixture(t1_matrix):
    cfg = GraspConfig(maxiter=100, seed=12)
    ens = rsm_fit(t1_matrix, cfg, 40)
    assert len(ens.members) >= 2
    cls, _ = rsm_predict_batch(ens, t1_matrix.bits)
    ens_err = int((cls != t1_matrix.labels).sum())
    worst = max(bayes.err(t1_matrix, m.subset) for m in ens.members)
    assert ens_err <= worst
