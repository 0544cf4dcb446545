"""Metrics, stratified folds, cross-validation and grid search."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .classifiers import AdaBoost, ModelSpec, train
from .classifiers.base import sigmoid
from .classifiers.boosting import presort
from .config import default_grid, refine_rule
from .features import FeatureMatrix, fit_scaler
from .parallel import ordered_map, worker_state


@dataclass(frozen=True)
class MetricPair:
    accuracy: float
    weighted_accuracy: float

    def key(self):
        return (self.accuracy, self.weighted_accuracy)


def accuracy(y_true, y_pred) -> float:
    y_true, y_pred = np.asarray(y_true), np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise ValueError("empty label vectors")
    return float(np.mean(y_true == y_pred))


def weighted_accuracy(y_true, y_pred) -> float:
    """Mean of the per-class recalls (balanced accuracy) for labels {1, 2}."""
    y_true, y_pred = np.asarray(y_true), np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    classes = np.unique(y_true)
    if len(classes) < 2:
        raise ValueError("weighted accuracy needs both classes in y_true")
    recalls = [np.mean(y_pred[y_true == c] == c) for c in classes]
    return float(np.mean(recalls))


def metrics(y_true, y_pred) -> MetricPair:
    return MetricPair(accuracy(y_true, y_pred), weighted_accuracy(y_true, y_pred))


def stratified_kfold(y, k: int, seed: int = 0) -> list[np.ndarray]:
    """k disjoint index folds; each class is shuffled then dealt round-robin."""
    y = np.asarray(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    offset = 0
    for c in np.unique(y):
        idx = np.flatnonzero(y == c)
        if len(idx) < k:
            raise ValueError(f"class {c} has {len(idx)} rows, fewer than k={k}")
        idx = rng.permutation(idx)
        for pos, i in enumerate(idx):
            folds[(offset + pos) % k].append(i)
        offset = (offset + len(idx)) % k
    return [np.sort(np.array(f, dtype=np.intp)) for f in folds]


def _xy(X, y=None):
    if isinstance(X, FeatureMatrix):
        return X.X, X.y if y is None else np.asarray(y)
    return np.asarray(X, dtype=float), np.asarray(y)


class CVPlan:
    """Fold splits with per-fold scaled matrices and presorted columns.

    Scaling is column-wise and order-preserving on training rows, so one plan
    serves every feature subset: subset columns are sliced, never refit.
    """

    def __init__(self, X, y=None, k: int = 5, seed: int = 0):
        X, y = _xy(X, y)
        self.X, self.y, self.k, self.seed = X, y, k, seed
        self.folds = stratified_kfold(y, k, seed)
        self.parts = []
        n = len(y)
        for test in self.folds:
            train_mask = np.ones(n, dtype=bool)
            train_mask[test] = False
            scaler = fit_scaler(X[train_mask])
            Xtr = np.ascontiguousarray(scaler.transform(X[train_mask]))
            Xte = np.ascontiguousarray(scaler.transform(X[test]))
            self.parts.append((Xtr, y[train_mask], Xte, y[test], presort(Xtr)))

    def _fold_data(self, f, columns):
        Xtr, ytr, Xte, yte, order = self.parts[f]
        if columns is None:
            return Xtr, ytr, Xte, yte, order
        cols = np.asarray(columns, dtype=np.intp)
        return (np.ascontiguousarray(Xtr[:, cols]), ytr, np.ascontiguousarray(Xte[:, cols]),
                yte, np.ascontiguousarray(order[cols]))

    def evaluate(self, spec: ModelSpec, columns=None) -> MetricPair:
        scores = []
        for f in range(self.k):
            Xtr, ytr, Xte, yte, order = self._fold_data(f, columns)
            m = train(spec, Xtr, ytr, presorted=order)
            scores.append(metrics(yte, m.predict_label(Xte)))
        return _mean(scores)

    def evaluate_staged(self, spec: ModelSpec, n_values, columns=None) -> list[MetricPair]:
        """AdaBoost only: metrics for every n_estimators in ``n_values`` from one fit.

        A k-stage ensemble is the first k stages of a longer one, so this equals
        evaluating each value separately.
        """
        n_values = list(n_values)
        top = max(n_values)
        per_fold = []
        for f in range(self.k):
            Xtr, ytr, Xte, yte, order = self._fold_data(f, columns)
            m = train(spec.with_params(n_estimators=top), Xtr, ytr, presorted=order)
            est: AdaBoost = m.estimator
            staged = est.staged_decision(Xte)
            row = []
            for nv in n_values:
                s = min(nv, len(staged))
                dec = staged[s - 1] if s > 0 else np.zeros(len(yte))
                row.append(metrics(yte, np.where(sigmoid(dec) >= 0.5, 1, 2)))
            per_fold.append(row)
        return [_mean([per_fold[f][i] for f in range(self.k)]) for i in range(len(n_values))]


def _mean(scores) -> MetricPair:
    return MetricPair(float(np.mean([s.accuracy for s in scores])),
                      float(np.mean([s.weighted_accuracy for s in scores])))


def cross_validate(spec: ModelSpec, X, y=None, k: int = 5, seed: int = 0) -> MetricPair:
    """Mean accuracy / weighted accuracy over stratified folds.

    The min-max scaler is fit on the training folds of each split only.
    """
    return CVPlan(X, y, k, seed).evaluate(spec)


@dataclass
class GridResult:
    best_params: dict
    best_metric: MetricPair
    all_points: list = field(default_factory=list)  # [(params, MetricPair)]


def grid_points(grid: dict) -> list[dict]:
    if not grid:
        return [{}]
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


def _best(points):
    best_i = 0
    for i, (_, mp) in enumerate(points):
        if mp.key() > points[best_i][1].key():
            best_i = i
    return best_i


def _eval_point(task):
    spec, params, columns = task
    plan = worker_state("plan")
    return plan.evaluate(spec.with_params(**params), columns)


def _eval_staged(task):
    spec, params, n_values, columns = task
    plan = worker_state("plan")
    return plan.evaluate_staged(spec.with_params(**params), n_values, columns)


def _evaluate_points(plan, spec, points, columns, jobs):
    """Metrics for each grid point, batching AdaBoost n_estimators sweeps."""
    if spec.algorithm in ("ADA", "ADA2") and points and all("n_estimators" in p for p in points):
        groups: dict[tuple, list[int]] = {}
        for i, p in enumerate(points):
            rest = tuple(sorted((k, v) for k, v in p.items() if k != "n_estimators"))
            groups.setdefault(rest, []).append(i)
        tasks = [(spec, dict(rest), [points[i]["n_estimators"] for i in idxs], columns)
                 for rest, idxs in groups.items()]
        results = ordered_map(_eval_staged, tasks, jobs, shared=("plan", plan))
        out = [None] * len(points)
        for idxs, res in zip(groups.values(), results):
            for i, mp in zip(idxs, res):
                out[i] = mp
        return out
    tasks = [(spec, p, columns) for p in points]
    return ordered_map(_eval_point, tasks, jobs, shared=("plan", plan))


def grid_search(spec: ModelSpec, grid: dict | None, X, y=None, k: int = 5, seed: int = 0,
                jobs: int = 1, refine: bool = False, plan: CVPlan | None = None,
                columns=None) -> GridResult:
    """Exhaustive search over the Cartesian product of ``grid``.

    Best = highest mean accuracy, then weighted accuracy, then grid order.
    With ``refine`` the algorithm's refinement rule (if any) adds a step-1
    sweep around the coarse optimum of one parameter.
    """
    if grid is None:
        grid = default_grid(spec.algorithm)
    if plan is None:
        plan = CVPlan(X, y, k, seed)
    points = grid_points(grid)
    scored = list(zip(points, _evaluate_points(plan, spec, points, columns, jobs)))
    if refine:
        rule = refine_rule(spec.algorithm)
        if rule and rule["param"] in grid:
            p = rule["param"]
            best_params = scored[_best(scored)][0]
            centre = best_params[p]
            lo = max(rule["low"], centre - rule["radius"])
            hi = min(rule["high"], centre + rule["radius"])
            seen = {tuple(sorted(q.items())) for q, _ in scored}
            fine = []
            for v in range(lo, hi + 1, rule["step"]):
                q = {**best_params, p: v}
                if tuple(sorted(q.items())) not in seen:
                    fine.append(q)
            if fine:
                scored += list(zip(fine, _evaluate_points(plan, spec, fine, columns, jobs)))
    i = _best(scored)
    return GridResult(dict(scored[i][0]), scored[i][1], scored)
