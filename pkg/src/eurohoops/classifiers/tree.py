"""CART trees plus the two tree ensembles (random forest, gradient boosting)."""
from __future__ import annotations

import math

import numpy as np

from .base import rng_for, sigmoid

LEAF = -1


class _Tree:
    """Flat array tree: children index -1 marks a leaf."""

    def __init__(self):
        self.feature, self.threshold, self.left, self.right, self.value = [], [], [], [], []

    def add(self, value):
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(float(value))
        return len(self.value) - 1

    def finalize(self):
        self.feature = np.array(self.feature, dtype=np.intp)
        self.threshold = np.array(self.threshold, dtype=float)
        self.left = np.array(self.left, dtype=np.intp)
        self.right = np.array(self.right, dtype=np.intp)
        self.value = np.array(self.value, dtype=float)
        return self

    def apply(self, X):
        """Leaf value for every row, by routing index sets down the tree."""
        out = np.empty(X.shape[0])
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if self.left[node] == LEAF:
                out[idx] = self.value[node]
                continue
            go_right = X[idx, self.feature[node]] > self.threshold[node]
            stack.append((self.right[node], idx[go_right]))
            stack.append((self.left[node], idx[~go_right]))
        return out

    @property
    def depth(self):
        def walk(node):
            if self.left[node] == LEAF:
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))
        return walk(0)

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_dict(cls, state):
        t = cls()
        for k in ("feature", "threshold", "left", "right", "value"):
            setattr(t, k, list(state[k]))
        return t.finalize()


def _candidate_features(d, max_features, rng):
    if max_features is None or max_features == "all":
        return np.arange(d)
    if max_features == "sqrt":
        m = max(1, int(math.sqrt(d)))
    elif isinstance(max_features, float):
        m = max(1, int(max_features * d))
    else:
        m = min(d, int(max_features))
    if m >= d:
        return np.arange(d)
    return np.sort(rng.choice(d, size=m, replace=False))


def _best_split(X, idx, feats, score_fn, min_leaf):
    """Scan midpoints of sorted unique values; lowest score wins, first on ties."""
    best = (np.inf, -1, 0.0)
    for f in feats:
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xs = xs[order]
        valid = xs[1:] > xs[:-1]
        n = len(xs)
        if min_leaf > 1:
            k = np.arange(1, n)
            valid &= (k >= min_leaf) & (n - k >= min_leaf)
        if not valid.any():
            continue
        scores = score_fn(idx[order])
        scores = np.where(valid, scores, np.inf)
        k = int(np.argmin(scores))
        if scores[k] < best[0]:
            best = (scores[k], int(f), 0.5 * (xs[k] + xs[k + 1]))
    return best


class DecisionTree:
    """CART with Gini impurity; leaves hold the fraction of positive labels."""

    def __init__(self, max_depth=None, min_samples_split=2, min_samples_leaf=1,
                 max_features=None, seed=0):
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.min_samples_leaf = int(min_samples_leaf)
        self.max_features = max_features
        self.seed = seed
        self.tree = None

    def fit(self, X, y, rng=None):
        rng = rng if rng is not None else rng_for(self.seed, 0)
        pos = (y > 0).astype(float)
        d = X.shape[1]
        tree = _Tree()

        def gini_score(sorted_idx):
            # weighted child impurity n_l*G_l + n_r*G_r for split after each position
            p = pos[sorted_idx]
            n = len(p)
            cl = np.cumsum(p)[:-1]
            nl = np.arange(1, n, dtype=float)
            nr = n - nl
            cr = p.sum() - cl
            gl = 2.0 * cl * (nl - cl) / nl
            gr = 2.0 * cr * (nr - cr) / nr
            return gl + gr

        root = tree.add(pos.mean())
        stack = [(root, np.arange(X.shape[0]), 0)]
        while stack:
            node, idx, depth = stack.pop()
            p = pos[idx]
            if (len(idx) < self.min_samples_split or p.min() == p.max()
                    or (self.max_depth is not None and depth >= self.max_depth)):
                continue
            feats = _candidate_features(d, self.max_features, rng)
            score, f, thr = _best_split(X, idx, feats, gini_score, self.min_samples_leaf)
            if f < 0:
                continue
            right_mask = X[idx, f] > thr
            li, ri = idx[~right_mask], idx[right_mask]
            tree.feature[node], tree.threshold[node] = f, thr
            tree.left[node] = tree.add(pos[li].mean())
            tree.right[node] = tree.add(pos[ri].mean())
            stack.append((tree.right[node], ri, depth + 1))
            stack.append((tree.left[node], li, depth + 1))
        self.tree = tree.finalize()
        return self

    def proba(self, X):
        return self.tree.apply(X)

    def to_dict(self):
        return {"tree": self.tree.to_dict()}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.tree = _Tree.from_dict(state["tree"])
        return m


class RandomForest:
    def __init__(self, n_estimators=100, max_depth=None, min_samples_split=2,
                 max_features="sqrt", bootstrap=True, seed=0):
        self.n_estimators = int(n_estimators)
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.max_features = max_features
        self.bootstrap = bool(bootstrap)
        self.seed = seed
        self.trees = []

    def _fit_one(self, X, y, i):
        rng = rng_for(self.seed, i)
        idx = rng.integers(0, X.shape[0], X.shape[0]) if self.bootstrap else np.arange(X.shape[0])
        t = DecisionTree(self.max_depth, self.min_samples_split, 1, self.max_features)
        return t.fit(X[idx], y[idx], rng=rng).tree

    def fit(self, X, y):
        self.trees = [self._fit_one(X, y, i) for i in range(self.n_estimators)]
        return self

    def proba(self, X):
        acc = np.zeros(X.shape[0])
        for t in self.trees:
            acc += t.apply(X)
        return acc / len(self.trees)

    def to_dict(self):
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.trees = [_Tree.from_dict(t) for t in state["trees"]]
        return m


class GradientBoosting:
    """Binomial-deviance boosting of depth-limited regression trees.

    Trees split on squared error of the residual y - p; each leaf takes a
    single Newton step sum(r) / sum(p(1-p)).
    """

    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=3, seed=0):
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.max_depth = int(max_depth)
        self.seed = seed
        self.init = 0.0
        self.trees = []

    def _regression_tree(self, X, r, hess):
        tree = _Tree()

        def sse_score(sorted_idx):
            v = r[sorted_idx]
            n = len(v)
            s = np.cumsum(v)[:-1]
            nl = np.arange(1, n, dtype=float)
            total = v.sum()
            # minimising SSE == maximising s_l^2/n_l + s_r^2/n_r
            return -(s * s / nl + (total - s) ** 2 / (n - nl))

        def leaf_value(idx):
            h = hess[idx].sum()
            return r[idx].sum() / h if h > 1e-12 else 0.0

        root = tree.add(leaf_value(np.arange(len(r))))
        stack = [(root, np.arange(len(r)), 0)]
        while stack:
            node, idx, depth = stack.pop()
            if depth >= self.max_depth or len(idx) < 2:
                continue
            _, f, thr = _best_split(X, idx, range(X.shape[1]), sse_score, 1)
            if f < 0:
                continue
            right_mask = X[idx, f] > thr
            li, ri = idx[~right_mask], idx[right_mask]
            tree.feature[node], tree.threshold[node] = f, thr
            tree.left[node] = tree.add(leaf_value(li))
            tree.right[node] = tree.add(leaf_value(ri))
            stack.append((tree.right[node], ri, depth + 1))
            stack.append((tree.left[node], li, depth + 1))
        return tree.finalize()

    def fit(self, X, y):
        t = (y > 0).astype(float)
        prior = t.mean()
        self.init = float(np.log(prior / (1.0 - prior)))
        F = np.full(len(t), self.init)
        self.trees = []
        for _ in range(self.n_estimators):
            p = sigmoid(F)
            tree = self._regression_tree(X, t - p, p * (1.0 - p))
            F = F + self.learning_rate * tree.apply(X)
            self.trees.append(tree)
        return self

    def decision(self, X):
        F = np.full(X.shape[0], self.init)
        for tree in self.trees:
            F = F + self.learning_rate * tree.apply(X)
        return F

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"init": self.init, "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.init = float(state["init"])
        m.trees = [_Tree.from_dict(t) for t in state["trees"]]
        return m
