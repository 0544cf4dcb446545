import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import f_oneway

from eurohoops.classifiers import ModelSpec
from eurohoops.feature_selection import (anova_f, chi2, enumerate_subsets, incremental_filter_eval,
                                         mutual_information, pca_fit, pca_sweep, pca_transform,
                                         rank_features, wrapper_refine, wrapper_search)
from eurohoops.model_selection import CVPlan, cross_validate


def data(n=80, d=4, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    y = np.where(X[:, 0] - X[:, -1] + 0.4 * rng.normal(size=n) > 0, 1, 2)
    return X, y


def test_anova_hand_example():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1, 1, 2, 2])
    assert anova_f(X, y)[0] == pytest.approx(8.0)


def test_anova_sentinels():
    y = np.array([1, 1, 2, 2])
    X = np.column_stack([y.astype(float), np.ones(4), [1.0, 2.0, 1.0, 2.0]])
    f = anova_f(X, y)
    assert f[0] == math.inf and f[1] == 0.0 and f[2] == pytest.approx(0.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10_000))
def test_anova_matches_scipy(n, seed):
    rng = np.random.default_rng(seed)
    y = np.array([1, 2] + list(rng.integers(1, 3, n - 2)))
    X = rng.normal(size=(n, 2))
    ref = f_oneway(X[y == 1], X[y == 2]).statistic
    np.testing.assert_allclose(anova_f(X, y), ref, rtol=1e-9)


def brute_mi(b, y):
    n = len(y)
    total = 0.0
    for u in set(b):
        for v in set(y):
            pj = sum(1 for i in range(n) if b[i] == u and y[i] == v) / n
            if pj:
                pu = sum(1 for x in b if x == u) / n
                pv = sum(1 for x in y if x == v) / n
                total += pj * math.log(pj / (pu * pv))
    return total


def test_mi_identity_and_constant():
    y = np.array([1, 2, 1, 2, 2, 1, 1, 2])
    X = np.column_stack([(y == 2).astype(float), np.full(8, 0.3)])
    mi = mutual_information(X, y)
    assert mi[0] == pytest.approx(math.log(2), abs=1e-12)
    assert mi[1] == 0.0


def test_mi_label_entropy():
    y = np.array([1, 1, 1, 2, 2, 1, 1, 2])
    p = 3 / 8
    assert mutual_information((y == 2).astype(float)[:, None], y)[0] == pytest.approx(
        -(p * math.log(p) + (1 - p) * math.log(1 - p)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10_000))
def test_mi_matches_brute_force_with_distinct_values(n, seed):
    rng = np.random.default_rng(seed)
    y = rng.integers(1, 3, n)
    x = rng.permutation(n).astype(float) / n
    # with n <= 8 distinct values each value lands in its own bin
    assert mutual_information(x[:, None], y)[0] == pytest.approx(brute_mi(list(x), list(y)), abs=1e-12)


def test_chi2_hand_table():
    X = np.array([[1.0], [0.0], [1.0], [1.0]])
    y = np.array([1, 1, 2, 2])
    # observed (1, 2), expected (1.5, 1.5): 0.25/1.5 * 2
    assert chi2(X, y)[0] == pytest.approx(1 / 3)


def test_chi2_matches_sklearn_and_edge_cases():
    from sklearn.feature_selection import chi2 as sk_chi2
    X, y = data(8, 3, seed=2)
    np.testing.assert_allclose(chi2(X, y), sk_chi2(X, y)[0], rtol=1e-12)
    same = np.array([[0.5], [0.5], [0.5], [0.5]])
    assert chi2(same, [1, 1, 2, 2])[0] == 0.0
    cand = np.array([[1.0, 0.5], [1.0, 0.5], [0.0, 0.5], [0.0, 0.5]])
    s = chi2(cand, [1, 1, 2, 2])
    assert s[0] > s[1]
    with pytest.raises(ValueError):
        chi2(-cand, [1, 1, 2, 2])


@pytest.mark.parametrize("method", ["ANOVA", "MI", "CHI2"])
def test_ranks_are_permutation(method):
    X, y = data(seed=3)
    r = rank_features(method, X, y)
    assert sorted(r.ranks.values()) == list(range(1, 5))
    scores = [r.scores[n] for n in r.ordered()]
    assert all(a >= b for a, b in zip(scores, scores[1:]))


def test_rank_ties_by_column_order():
    y = np.array([1, 1, 2, 2])
    X = np.column_stack([np.ones(4), y.astype(float), np.ones(4), y.astype(float)])
    r = rank_features("ANOVA", X, y)
    assert r.ordered() == ["x1", "x3", "x0", "x2"]


def test_incremental_filter_eval():
    X, y = data(seed=4)
    r = rank_features("ANOVA", X, y)
    out = incremental_filter_eval(r, ModelSpec("LR"), X, y)
    assert len(out) == 4
    assert out[-1][1] == cross_validate(ModelSpec("LR"), X, y)


def test_pca_properties():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(50, 5)) @ rng.normal(size=(5, 5))
    full = pca_fit(X, 5)
    np.testing.assert_allclose(full.components @ full.components.T, np.eye(5), atol=1e-9)
    np.testing.assert_allclose(full.inverse_transform(pca_transform(full, X)), X, atol=1e-9)
    Z = pca_transform(full, X)
    dX = np.linalg.norm(X[:, None] - X[None], axis=2)
    dZ = np.linalg.norm(Z[:, None] - Z[None], axis=2)
    np.testing.assert_allclose(dX, dZ, atol=1e-9)
    captured = [pca_fit(X, c).explained_variance.sum() for c in range(1, 6)]
    assert all(a <= b + 1e-12 for a, b in zip(captured, captured[1:]))
    for row in full.components:
        assert row[np.argmax(np.abs(row))] > 0
    with pytest.raises(ValueError):
        pca_fit(X, 6)


def test_pca_sweep_length():
    X, y = data(60, 3, seed=6)
    out = pca_sweep(ModelSpec("KNN"), {"k": [1, 3]}, X, y)
    assert [c for c, _ in out] == [1, 2, 3]


def test_wrapper_two_features():
    X, y = data(60, 2, seed=7)
    res = wrapper_search(ModelSpec("LR"), X, y)
    assert len(res) == 3


def test_wrapper_matches_nested_loops():
    X, y = data(seed=8)
    spec = ModelSpec("ADA2", {"n_estimators": 20, "learning_rate": 0.7})
    res = wrapper_search(spec, X, y, k=5, seed=1)
    plan = CVPlan(X, y, 5, 1)
    oracle = []
    for size in range(1, 5):
        for cols in itertools.combinations(range(4), size):
            oracle.append((tuple(f"x{c}" for c in cols), plan.evaluate(spec, list(cols))))
    # literal stable sort on (accuracy desc, weighted desc)
    ranked = []
    for item in oracle:
        pos = len(ranked)
        while pos > 0 and item[1].key() > ranked[pos - 1][1].key():
            pos -= 1
        ranked.insert(pos, item)
    assert [(r.feature_subset, r.cv_metrics) for r in res] == ranked
    full = next(r for r in res if len(r.feature_subset) == 4)
    assert res[0].cv_metrics.accuracy >= full.cv_metrics.accuracy
    assert wrapper_search(spec, X, y, k=5, seed=1, jobs=2) == res


def test_wrapper_guard():
    X = np.zeros((10, 21))
    with pytest.raises(ValueError, match="reduce"):
        wrapper_search(ModelSpec("LR"), X, np.array([1, 2] * 5))


def test_enumeration_count():
    assert len(enumerate_subsets(12)) == 4095


def test_refinement_never_lowers_accuracy():
    X, y = data(seed=9)
    spec = ModelSpec("ADA2", {"n_estimators": 20, "learning_rate": 0.5})
    top = wrapper_search(spec, X, y)[:3]
    grid = {"n_estimators": [10, 20], "learning_rate": [0.5, 1.0]}
    refined = wrapper_refine(top, spec, grid, X, y, refine=False)
    for a, b in zip(top, refined):
        assert b.cv_metrics.accuracy >= a.cv_metrics.accuracy
