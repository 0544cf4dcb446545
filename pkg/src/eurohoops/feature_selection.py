"""Filter scores, PCA sweep and exhaustive wrapper search over feature subsets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .classifiers import ModelSpec
from .classifiers.boosting import presort
from .features import FeatureMatrix
from .model_selection import CVPlan, GridResult, MetricPair, grid_search
from .parallel import ordered_map, worker_state

MI_BINS = 8
WRAPPER_MAX_FEATURES = 20


def _as_arrays(X, y):
    if isinstance(X, FeatureMatrix):
        return X.X, X.y if y is None else np.asarray(y), list(X.column_names)
    X = np.asarray(X, dtype=float)
    return X, np.asarray(y), [f"x{i}" for i in range(X.shape[1])]


def anova_f(X, y=None) -> np.ndarray:
    """One-way ANOVA F per column; zero within-class variance gives +inf."""
    X, y, _ = _as_arrays(X, y)
    classes = np.unique(y)
    if len(classes) < 2:
        raise ValueError("ANOVA needs at least two classes")
    n, K = len(y), len(classes)
    grand = X.mean(axis=0)
    ssb = np.zeros(X.shape[1])
    ssw = np.zeros(X.shape[1])
    for c in classes:
        Xc = X[y == c]
        mu = Xc.mean(axis=0)
        ssb += len(Xc) * (mu - grand) ** 2
        ssw += ((Xc - mu) ** 2).sum(axis=0)
    msb = ssb / (K - 1)
    msw = ssw / (n - K)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = msb / msw
    f = np.where(msw > 0, f, np.where(msb > 0, np.inf, 0.0))
    return f


def quantile_bins(col, bins: int = MI_BINS) -> np.ndarray:
    inner = np.unique(np.quantile(col, np.arange(1, bins) / bins))
    return np.searchsorted(inner, col, side="right")


def mutual_information(X, y=None, bins: int = MI_BINS) -> np.ndarray:
    """Plug-in MI (nats) between each quantile-binned column and the label."""
    X, y, _ = _as_arrays(X, y)
    n = len(y)
    _, yc = np.unique(y, return_inverse=True)
    out = np.zeros(X.shape[1])
    for j in range(X.shape[1]):
        b = quantile_bins(X[:, j], bins)
        joint = np.zeros((b.max() + 1, yc.max() + 1))
        np.add.at(joint, (b, yc), 1.0)
        joint /= n
        pb = joint.sum(axis=1, keepdims=True)
        pc = joint.sum(axis=0, keepdims=True)
        nz = joint > 0
        out[j] = float((joint[nz] * np.log(joint[nz] / (pb @ pc)[nz])).sum())
    return np.maximum(out, 0.0)


def chi2(X, y=None) -> np.ndarray:
    """Chi-square of per-class feature sums against class-frequency expectations."""
    X, y, _ = _as_arrays(X, y)
    if (X < 0).any():
        raise ValueError("chi2 needs non-negative features")
    classes = np.unique(y)
    observed = np.array([X[y == c].sum(axis=0) for c in classes])
    freq = np.array([np.mean(y == c) for c in classes])
    expected = freq[:, None] * X.sum(axis=0)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (observed - expected) ** 2 / expected, 0.0)
    return terms.sum(axis=0)


FILTERS = {"ANOVA": anova_f, "MI": mutual_information, "CHI2": chi2}


@dataclass
class FeatureRanking:
    method: str
    ranks: dict[str, int]
    scores: dict[str, float]

    def ordered(self) -> list[str]:
        return sorted(self.ranks, key=self.ranks.get)


def rank_features(method: str, X, y=None, columns=None) -> FeatureRanking:
    """Rank 1 = most informative; +inf first, ties by column order."""
    Xa, ya, names = _as_arrays(X, y)
    if columns is not None:
        names = list(columns)
    scores = FILTERS[method](Xa, ya)
    key = [(-math.inf if np.isnan(s) else -s, i) for i, s in enumerate(scores)]
    order = sorted(range(len(names)), key=lambda i: key[i])
    ranks = {names[i]: r + 1 for r, i in enumerate(order)}
    return FeatureRanking(method, ranks, {n: float(s) for n, s in zip(names, scores)})


def incremental_filter_eval(ranking: FeatureRanking, spec: ModelSpec, X, y=None, k=5, seed=0,
                            plan: CVPlan | None = None):
    """CV metrics using the top-j ranked features, j = 1..d."""
    Xa, ya, names = _as_arrays(X, y)
    plan = plan or CVPlan(Xa, ya, k, seed)
    pos = {n: i for i, n in enumerate(names)}
    ordered = ranking.ordered()
    out = []
    for j in range(1, len(ordered) + 1):
        top = ordered[:j]
        cols = sorted(pos[n] for n in top)
        out.append((top, plan.evaluate(spec, cols)))
    return out


@dataclass(frozen=True)
class PCAProjection:
    mean: np.ndarray
    components: np.ndarray      # (c, d), orthonormal rows
    explained_variance: np.ndarray

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z) @ self.components + self.mean


def pca_fit(X, c: int) -> PCAProjection:
    X = np.asarray(X.X if isinstance(X, FeatureMatrix) else X, dtype=float)
    d = X.shape[1]
    if not 1 <= c <= d:
        raise ValueError(f"component count {c} outside 1..{d}")
    mean = X.mean(axis=0)
    _, s, vt = np.linalg.svd(X - mean, full_matrices=True)
    comps = vt[:c].copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    var = np.zeros(c)
    m = min(c, len(s))
    var[:m] = s[:m] ** 2 / max(X.shape[0] - 1, 1)
    return PCAProjection(mean, comps, var)


def pca_transform(p: PCAProjection, X) -> np.ndarray:
    return p.transform(X)


class _PCAPlan(CVPlan):
    """Fold plan whose matrices are PCA projections fit on each training fold."""

    def __init__(self, base: CVPlan, c: int):
        self.X, self.y, self.k, self.seed, self.folds = base.X, base.y, base.k, base.seed, base.folds
        self.parts = []
        for Xtr, ytr, Xte, yte, _ in base.parts:
            proj = pca_fit(Xtr, c)
            Ztr = np.ascontiguousarray(proj.transform(Xtr))
            Zte = np.ascontiguousarray(proj.transform(Xte))
            self.parts.append((Ztr, ytr, Zte, yte, presort(Ztr)))


def pca_sweep(spec: ModelSpec, grid: dict | None, X, y=None, k=5, seed=0, jobs=1,
              refine=True) -> list[tuple[int, GridResult]]:
    """For c = 1..d: project (inside each fold), re-tune, record the best."""
    Xa, ya, _ = _as_arrays(X, y)
    base = CVPlan(Xa, ya, k, seed)
    out = []
    for c in range(1, Xa.shape[1] + 1):
        plan = _PCAPlan(base, c)
        out.append((c, grid_search(spec, grid, None, None, jobs=jobs, refine=refine, plan=plan)))
    return out


@dataclass
class SubsetResult:
    feature_subset: tuple[str, ...]
    cv_metrics: MetricPair
    params: dict = field(default_factory=dict)


def enumerate_subsets(d: int) -> list[tuple[int, ...]]:
    """All non-empty column subsets: by size, then lexicographic."""
    return [c for r in range(1, d + 1) for c in itertools.combinations(range(d), r)]


def _eval_subset(task):
    spec, cols = task
    return worker_state("plan").evaluate(spec, list(cols))


def sort_results(results: list[SubsetResult]) -> list[SubsetResult]:
    # stable: equal scores keep enumeration order
    return sorted(results, key=lambda r: (-r.cv_metrics.accuracy, -r.cv_metrics.weighted_accuracy))


def wrapper_search(spec: ModelSpec, X, y=None, k=5, seed=0, jobs=1,
                   max_features: int = WRAPPER_MAX_FEATURES, plan: CVPlan | None = None,
                   progress=None) -> list[SubsetResult]:
    """Cross-validate every non-empty feature subset with fixed hyper-parameters."""
    Xa, ya, names = _as_arrays(X, y)
    d = Xa.shape[1]
    if d > max_features:
        raise ValueError(f"{d} features means {2 ** d - 1} subsets; reduce the feature set "
                         f"(e.g. with a filter ranking) to at most {max_features} first")
    plan = plan or CVPlan(Xa, ya, k, seed)
    subsets = enumerate_subsets(d)
    tasks = [(spec, s) for s in subsets]
    scores = ordered_map(_eval_subset, tasks, jobs, shared=("plan", plan),
                         chunksize=max(1, len(tasks) // (8 * max(jobs, 1))))
    if progress is not None:
        progress(len(scores))
    results = [SubsetResult(tuple(names[i] for i in s), mp, dict(spec.hyper_params))
               for s, mp in zip(subsets, scores)]
    return sort_results(results)


def wrapper_refine(top_subsets: list[SubsetResult], spec: ModelSpec, grid: dict | None, X, y=None,
                   k=5, seed=0, jobs=1, refine=True) -> list[SubsetResult]:
    """Re-tune hyper-parameters for each forwarded subset with a full grid search."""
    if not top_subsets:
        raise ValueError("no subsets to refine")
    Xa, ya, names = _as_arrays(X, y)
    plan = CVPlan(Xa, ya, k, seed)
    pos = {n: i for i, n in enumerate(names)}
    out = []
    for sub in top_subsets:
        cols = sorted(pos[n] for n in sub.feature_subset)
        g = grid_search(spec, grid, None, None, jobs=jobs, refine=refine, plan=plan, columns=cols)
        out.append(SubsetResult(sub.feature_subset, g.best_metric, g.best_params))
    return out
