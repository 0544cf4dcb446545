"""Discrete AdaBoost over decision stumps.

Stage weight is learning_rate * 0.5 * ln((1 - err) / err); stumps predict
``polarity`` when x > threshold and ``-polarity`` otherwise. The stump
search runs in the compiled kernel when it is available.
"""
from __future__ import annotations

import numpy as np

from .. import _backend
from .base import sigmoid


def presort(X):
    """Per-feature stable sort order, shaped (n_features, n_rows)."""
    return np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T.astype(np.intp))


class AdaBoost:
    def __init__(self, n_estimators=50, learning_rate=1.0):
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.feature = np.empty(0, dtype=np.intp)
        self.threshold = np.empty(0)
        self.polarity = np.empty(0)
        self.stage_weight = np.empty(0)
        self.stage_error = np.empty(0)

    def fit(self, X, y, order=None):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.float64)
        if order is None:
            order = presort(X)
        (self.feature, self.threshold, self.polarity, self.stage_weight,
         self.stage_error) = _backend.kernels.ada_fit(X, order, y, self.n_estimators,
                                                     self.learning_rate)
        return self

    def decision(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _backend.kernels.ada_decision(X, self.feature, self.threshold, self.polarity,
                                             self.stage_weight)

    def staged_decision(self, X):
        """Decision after each boosting stage, shape (n_stages, n_rows)."""
        X = np.asarray(X, dtype=np.float64)
        h = np.where(X[:, self.feature].T > self.threshold[:, None],
                     self.polarity[:, None], -self.polarity[:, None])
        return np.cumsum(self.stage_weight[:, None] * h, axis=0)

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"feature": self.feature.tolist(), "threshold": self.threshold.tolist(),
                "polarity": self.polarity.tolist(), "stage_weight": self.stage_weight.tolist(),
                "stage_error": self.stage_error.tolist()}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.feature = np.array(state["feature"], dtype=np.intp)
        m.threshold = np.array(state["threshold"], dtype=float)
        m.polarity = np.array(state["polarity"], dtype=float)
        m.stage_weight = np.array(state["stage_weight"], dtype=float)
        m.stage_error = np.array(state["stage_error"], dtype=float)
        return m
