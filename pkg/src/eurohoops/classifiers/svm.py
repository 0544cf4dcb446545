"""Soft-margin RBF SVM trained by SMO on the dual.

Working pairs are chosen as the maximal violating pair, so training is
deterministic and the equality constraint sum(alpha * y) = 0 is kept by
construction.
"""
from __future__ import annotations

import numpy as np

from .base import sigmoid

TAU = 1e-12


def rbf_kernel(A, B, gamma):
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


class RBFSVM:
    def __init__(self, C=1.0, gamma="scale", tol=1e-3, max_iter=100000):
        self.C = float(C)
        self.gamma = gamma
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.gamma_ = None
        self.alpha = None
        self.support = None
        self.support_y = None
        self.intercept = 0.0
        self.n_iter = 0
        self.converged = False

    def fit(self, X, y):
        n = X.shape[0]
        if self.gamma == "scale":
            var = X.var()
            self.gamma_ = 1.0 / (X.shape[1] * var) if var > 0 else 1.0
        else:
            self.gamma_ = float(self.gamma)
        C = self.C
        Q = (y[:, None] * y[None, :]) * rbf_kernel(X, X, self.gamma_)
        a = np.zeros(n)
        G = -np.ones(n)
        it = 0
        while it < self.max_iter:
            up = ((y > 0) & (a < C)) | ((y < 0) & (a > 0))
            low = ((y > 0) & (a > 0)) | ((y < 0) & (a < C))
            v = -y * G
            vi = np.where(up, v, -np.inf)
            vj = np.where(low, v, np.inf)
            i, j = int(np.argmax(vi)), int(np.argmin(vj))
            if vi[i] - vj[j] < self.tol:
                self.converged = True
                break
            ai, aj = a[i], a[j]
            if y[i] != y[j]:
                quad = max(Q[i, i] + Q[j, j] + 2.0 * Q[i, j], TAU)
                delta = (-G[i] - G[j]) / quad
                diff = ai - aj
                a[i] += delta
                a[j] += delta
                if diff > 0:
                    if a[j] < 0:
                        a[j], a[i] = 0.0, diff
                elif a[i] < 0:
                    a[i], a[j] = 0.0, -diff
                if diff > 0:
                    if a[i] > C:
                        a[i], a[j] = C, C - diff
                elif a[j] > C:
                    a[j], a[i] = C, C + diff
            else:
                quad = max(Q[i, i] + Q[j, j] - 2.0 * Q[i, j], TAU)
                delta = (G[i] - G[j]) / quad
                total = ai + aj
                a[i] -= delta
                a[j] += delta
                if total > C:
                    if a[i] > C:
                        a[i], a[j] = C, total - C
                elif a[j] < 0:
                    a[j], a[i] = 0.0, total
                if total > C:
                    if a[j] > C:
                        a[j], a[i] = C, total - C
                elif a[i] < 0:
                    a[i], a[j] = 0.0, total
            G += Q[:, i] * (a[i] - ai) + Q[:, j] * (a[j] - aj)
            it += 1
        self.n_iter = it
        free = (a > 0) & (a < C)
        v = -y * G
        if free.any():
            b = v[free].mean()
        else:
            up = ((y > 0) & (a < C)) | ((y < 0) & (a > 0))
            low = ((y > 0) & (a > 0)) | ((y < 0) & (a < C))
            hi = v[up].max() if up.any() else 0.0
            lo = v[low].min() if low.any() else 0.0
            b = 0.5 * (hi + lo)
        self.dual = a.copy()
        self.dual_y = y.copy()
        sv = a > 0
        self.alpha = a[sv]
        self.support = X[sv].copy()
        self.support_y = y[sv].copy()
        self.intercept = float(b)
        return self

    def decision(self, X):
        if self.alpha.size == 0:
            return np.full(X.shape[0], self.intercept)
        K = rbf_kernel(X, self.support, self.gamma_)
        return K @ (self.alpha * self.support_y) + self.intercept

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"gamma_": self.gamma_, "alpha": self.alpha.tolist(),
                "support": self.support.tolist(), "support_y": self.support_y.tolist(),
                "intercept": self.intercept, "n_features": int(self.support.shape[1])}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.gamma_ = float(state["gamma_"])
        m.alpha = np.array(state["alpha"], dtype=float)
        m.support = np.array(state["support"], dtype=float).reshape(len(m.alpha), int(state["n_features"]))
        m.support_y = np.array(state["support_y"], dtype=float)
        m.intercept = float(state["intercept"])
        return m
