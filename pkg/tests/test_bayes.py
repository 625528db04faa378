import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bayes_rule_posterior, exact_nb_errors, product_form_scores
from relprop.bayes import NBModel, SubsetScorer, decide, discriminant, err, fit, posterior, predict
from relprop.errors import FitError
from relprop.propmat import FeatureMatrix


def matrix(rows, labels, q=None):
    bits = np.array(rows, dtype=bool).reshape(len(labels), -1)
    labels = np.array(labels)
    return FeatureMatrix(bits, labels, q or int(labels.max()))


SEPARATING = matrix([[1], [1], [0], [0]], [1, 1, 2, 2])


def test_counting_formula():
    m = fit(SEPARATING, [0], smoothing=1)
    assert m.cond[0, 0] == 0.75 and m.cond[0, 1] == 0.25
    assert list(m.priors) == [0.5, 0.5]


def test_all_zero_column():
    m = fit(matrix([[0]] * 8, [1, 1, 1, 1, 2, 2, 2, 2]), [0], smoothing=1)
    assert m.cond[0, 0] == pytest.approx(1 / 6, abs=0)


def test_raw_frequencies_need_nondegenerate_data():
    with pytest.raises(FitError, match="smoothing"):
        fit(SEPARATING, [0], smoothing=0)


def test_missing_class():
    with pytest.raises(FitError, match="class"):
        fit(matrix([[1], [0]], [1, 1], q=2), [0])


def test_priors_sum_to_one():
    m = fit(matrix([[1], [0], [1]], [1, 2, 3]), [0])
    assert abs(np.exp(m.log_priors).sum() - 1) <= 1e-12


def test_empty_subset_is_prior_model():
    m = fit(matrix([[0]] * 4, [1, 2, 2, 2]), [])
    g = discriminant(m, [])
    assert g == pytest.approx(np.log([0.25, 0.75]), abs=0)
    assert predict(m, []) == 2
    assert posterior(m, []) == pytest.approx([0.25, 0.75], abs=1e-15)


def test_discriminant_by_hand():
    m = fit(SEPARATING, [0], smoothing=1)
    g = discriminant(m, [1])
    assert g[0] == pytest.approx(math.log(0.75 / 0.25) + math.log(0.25) + math.log(0.5), abs=1e-15)
    assert g[1] == pytest.approx(math.log(0.25 / 0.75) + math.log(0.75) + math.log(0.5), abs=1e-15)
    assert predict(m, [1]) == 1
    assert posterior(m, [1]) == pytest.approx(
        bayes_rule_posterior([0.5, 0.5], [[0.75, 0.25]], [1]), abs=1e-9)


def test_equal_discriminants_split_evenly_and_tie_to_lowest():
    m = NBModel((0,), [0.5, 0.5], [[0.5, 0.5]])
    assert list(posterior(m, [1])) == [0.5, 0.5]
    assert predict(m, [1]) == 1
    assert decide([1.0, 1.0 + 1e-12, 0.0]) == 1
    assert decide([1.0, 1.0 + 1e-6, 0.0]) == 2


def test_err_examples():
    assert err(SEPARATING, [0], smoothing=0.5) == 0
    assert err(matrix([[0]] * 4, [1, 1, 1, 2]), []) == 1


def test_err_matches_exact_oracle(t1_matrix):
    bits = t1_matrix.bits.tolist()
    labels = t1_matrix.labels.tolist()
    rng = np.random.default_rng(5)
    for _ in range(60):
        subset = sorted(rng.choice(t1_matrix.cols, size=rng.integers(0, 6), replace=False).tolist())
        assert err(t1_matrix, subset) == exact_nb_errors(bits, labels, 2, subset)
        assert err(t1_matrix, subset, 0.5) == exact_nb_errors(bits, labels, 2, subset, Fraction(1, 2))


def test_scorer_matches_fresh_fit(t1_matrix):
    scorer = SubsetScorer(t1_matrix)
    rng = np.random.default_rng(1)
    for _ in range(200):
        subset = rng.choice(t1_matrix.cols, size=rng.integers(0, t1_matrix.cols), replace=False)
        assert scorer(subset) == err(t1_matrix, subset)
        assert scorer(list(reversed(subset))) == scorer(subset)


def test_scorer_rejects_degenerate_features():
    scorer = SubsetScorer(SEPARATING, smoothing=0)
    assert scorer([]) == 2
    with pytest.raises(FitError):
        scorer([0])


@st.composite
def models(draw, max_d=6):
    q = draw(st.integers(2, 4))
    d = draw(st.integers(0, max_d))
    probs = st.floats(0.01, 0.99)
    cond = [[draw(probs) for _ in range(q)] for _ in range(d)]
    w = [draw(st.floats(0.05, 1.0)) for _ in range(q)]
    priors = [x / sum(w) for x in w]
    row = [draw(st.booleans()) for _ in range(d)]
    return NBModel(tuple(range(d)), priors, cond), priors, cond, row


@given(models(), st.floats(-50, 50))
@settings(max_examples=300)
def test_model_invariants(case, shift):
    model, priors, cond, row = case
    g = discriminant(model, row)
    assert np.isfinite(g).all()
    assert g == pytest.approx(product_form_scores(priors, cond, row), abs=1e-9)
    p = posterior(model, row)
    assert abs(p.sum() - 1) <= 1e-12
    assert p == pytest.approx(bayes_rule_posterior(priors, cond, row), abs=1e-9)
    assert decide(p) == predict(model, row)
    assert decide(g + shift) == decide(g)


@given(st.lists(st.lists(st.booleans(), min_size=3, max_size=3), min_size=4, max_size=12),
       st.floats(0.1, 3.0))
@settings(max_examples=100)
def test_smoothed_fit_is_always_finite(rows, alpha):
    labels = [1 + (k % 2) for k in range(len(rows))]
    m = fit(matrix(rows, labels), [0, 1, 2], smoothing=alpha)
    assert ((m.cond > 0) & (m.cond < 1)).all()
    for x in ([0, 0, 0], [1, 1, 1], [1, 0, 1]):
        assert np.isfinite(discriminant(m, x)).all()
