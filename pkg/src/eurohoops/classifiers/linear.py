"""Logistic regression, linear SVM and linear discriminant analysis."""
from __future__ import annotations

import numpy as np

from .base import sigmoid


def logistic_objective(theta, X, y, C):
    """L2-regularised mean logistic loss and its gradient.

    theta = [w..., b]; y in {+1, -1}. The penalty ||w||^2 / (2 C n) leaves
    the intercept unpenalised.
    """
    n = X.shape[0]
    w, b = theta[:-1], theta[-1]
    margin = y * (X @ w + b)
    loss = np.mean(np.logaddexp(0.0, -margin)) + (w @ w) / (2.0 * C * n)
    s = -y * sigmoid(-margin)
    grad = np.empty_like(theta)
    grad[:-1] = X.T @ s / n + w / (C * n)
    grad[-1] = s.mean()
    return loss, grad


class LogisticRegression:
    def __init__(self, C=1.0, tol=1e-6, max_iter=20000):
        self.C, self.tol, self.max_iter = float(C), float(tol), int(max_iter)
        self.coef = None
        self.intercept = 0.0
        self.n_iter = 0

    def fit(self, X, y):
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        # Lipschitz constant of the gradient -> fixed, monotone step
        L = 0.25 * np.linalg.norm(Xa, 2) ** 2 / n + 1.0 / (self.C * n)
        step = 1.0 / L
        theta = np.zeros(d + 1)
        for it in range(self.max_iter):
            _, g = logistic_objective(theta, X, y, self.C)
            if np.linalg.norm(g) < self.tol:
                break
            theta -= step * g
        self.n_iter = it + 1 if self.max_iter else 0
        self.coef, self.intercept = theta[:-1].copy(), float(theta[-1])
        return self

    def decision(self, X):
        return X @ self.coef + self.intercept

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"coef": self.coef.tolist(), "intercept": self.intercept}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.coef, m.intercept = np.array(state["coef"], dtype=float), float(state["intercept"])
        return m


class LinearSVM:
    """Hinge loss + L2, full-batch subgradient descent with 1/sqrt(t) steps.

    The best iterate by objective value is kept.
    """

    def __init__(self, C=1.0, epochs=1000):
        self.C, self.epochs = float(C), int(epochs)
        self.coef = None
        self.intercept = 0.0

    def objective(self, w, b, X, y):
        n = X.shape[0]
        return np.maximum(0.0, 1.0 - y * (X @ w + b)).mean() + (w @ w) / (2.0 * self.C * n)

    def fit(self, X, y):
        n, d = X.shape
        w, b = np.zeros(d), 0.0
        eta0 = 100.0 / (1.0 + np.max(np.sum(X * X, axis=1)))
        best = (self.objective(w, b, X, y), w.copy(), b)
        for t in range(1, self.epochs + 1):
            active = y * (X @ w + b) < 1.0
            gw = -(X[active].T @ y[active]) / n + w / (self.C * n)
            gb = -y[active].sum() / n
            eta = eta0 / np.sqrt(t)
            w = w - eta * gw
            b = b - eta * gb
            obj = self.objective(w, b, X, y)
            if obj < best[0]:
                best = (obj, w.copy(), b)
        _, self.coef, self.intercept = best
        self.intercept = float(self.intercept)
        return self

    def decision(self, X):
        return X @ self.coef + self.intercept

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"coef": self.coef.tolist(), "intercept": self.intercept}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.coef, m.intercept = np.array(state["coef"], dtype=float), float(state["intercept"])
        return m


class LinearDiscriminant:
    """Two-class LDA with a pooled covariance (pseudo-inverse when singular)."""

    def __init__(self, reg=0.0):
        self.reg = float(reg)
        self.coef = None
        self.intercept = 0.0

    def fit(self, X, y):
        pos, neg = X[y > 0], X[y <= 0]
        mu_p, mu_n = pos.mean(axis=0), neg.mean(axis=0)
        centred = np.vstack([pos - mu_p, neg - mu_n])
        dof = max(X.shape[0] - 2, 1)
        S = centred.T @ centred / dof + self.reg * np.eye(X.shape[1])
        w = np.linalg.pinv(S, hermitian=True) @ (mu_p - mu_n)
        prior = len(pos) / len(X)
        self.coef = w
        self.intercept = float(-0.5 * (mu_p + mu_n) @ w + np.log(prior / (1.0 - prior)))
        return self

    def decision(self, X):
        return X @ self.coef + self.intercept

    def proba(self, X):
        return sigmoid(self.decision(X))

    def to_dict(self):
        return {"coef": self.coef.tolist(), "intercept": self.intercept}

    @classmethod
    def from_dict(cls, params, state):
        m = cls(**params)
        m.coef, m.intercept = np.array(state["coef"], dtype=float), float(state["intercept"])
        return m
