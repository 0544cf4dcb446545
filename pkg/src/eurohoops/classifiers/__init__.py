"""Ten binary classifiers behind one train / predict contract.

Labels follow the domain encoding: 1 = home (or team) win, 2 = loss.
``predict_proba`` always returns P(label == 1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..config import default_params
from ..domain import Label
from .base import TrainingError, as_pm1
from .boosting import AdaBoost
from .linear import LinearDiscriminant, LinearSVM, LogisticRegression, logistic_objective
from .simple import KNN, GaussianNB
from .svm import RBFSVM
from .tree import DecisionTree, GradientBoosting, RandomForest

ALGORITHMS = ("LR", "SVM_LINEAR", "SVM_RBF", "DT", "RF", "NB", "GB", "KNN", "DA", "ADA", "ADA2")

_ESTIMATORS = {
    "LR": LogisticRegression,
    "SVM_LINEAR": LinearSVM,
    "SVM_RBF": RBFSVM,
    "DT": DecisionTree,
    "RF": RandomForest,
    "NB": GaussianNB,
    "GB": GradientBoosting,
    "KNN": KNN,
    "DA": LinearDiscriminant,
    "ADA": AdaBoost,
    "ADA2": AdaBoost,
}
_SEEDED = {"DT", "RF", "GB"}
MODEL_FORMAT = "eurohoops-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class ModelSpec:
    algorithm: str
    hyper_params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        allowed = set(default_params(self.algorithm))
        unknown = set(self.hyper_params) - allowed
        if unknown:
            raise ValueError(f"{self.algorithm} does not take {sorted(unknown)}; "
                             f"allowed: {sorted(allowed)}")

    def resolved_params(self) -> dict:
        params = default_params(self.algorithm)
        params.update(self.hyper_params)
        if self.algorithm == "ADA":
            params["learning_rate"] = 1.0
        return params

    def with_params(self, **params) -> "ModelSpec":
        return ModelSpec(self.algorithm, {**self.hyper_params, **params}, self.seed)

    def __hash__(self):
        return hash((self.algorithm, tuple(sorted(self.hyper_params.items())), self.seed))


def _build(spec: ModelSpec):
    params = spec.resolved_params()
    if spec.algorithm in _SEEDED:
        params["seed"] = spec.seed
    return _ESTIMATORS[spec.algorithm](**params), params


@dataclass
class TrainedModel:
    spec: ModelSpec
    estimator: Any
    n_features: int

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X2 = X.reshape(1, -1) if single else X
        if X2.ndim != 2 or X2.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got shape {X.shape}")
        return X2, single

    def predict_proba(self, X):
        X2, single = self._check(X)
        p = np.clip(np.asarray(self.estimator.proba(X2), dtype=float), 0.0, 1.0)
        return float(p[0]) if single else p

    def predict_label(self, X):
        p = self.predict_proba(X)
        if np.ndim(p) == 0:
            return Label.HOME_WIN if p >= 0.5 else Label.AWAY_WIN
        return np.where(p >= 0.5, 1, 2)


def _validate_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise TrainingError(f"X shape {X.shape} does not match {y.shape[0]} labels")
    if X.shape[0] < 2:
        raise TrainingError("need at least 2 training rows")
    if not np.isfinite(X).all():
        raise TrainingError("X contains NaN or infinite values")
    if not set(np.unique(y)) <= {1, 2}:
        raise TrainingError("labels must be 1 or 2")
    if len(np.unique(y)) < 2:
        raise TrainingError("training labels contain a single class")
    return X, y


def train(spec: ModelSpec, X, y, presorted=None) -> TrainedModel:
    """Fit ``spec`` on rows X with labels y in {1, 2}.

    ``presorted`` optionally passes a per-feature sort order to the AdaBoost
    kernels (saves the argsort when many subsets share one fold).
    """
    X, y = _validate_xy(X, y)
    est, _ = _build(spec)
    ypm = as_pm1(y)
    if isinstance(est, AdaBoost):
        est.fit(X, ypm, order=presorted)
    else:
        est.fit(X, ypm)
    return TrainedModel(spec, est, X.shape[1])


def predict_proba(m: TrainedModel, x):
    return m.predict_proba(x)


def predict_label(m: TrainedModel, x):
    return m.predict_label(x)


def combine_team_predictions(p_home: float, p_away: float) -> Label:
    for p in (p_home, p_away):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p}")
    return Label.HOME_WIN if p_home >= p_away else Label.AWAY_WIN


def model_to_dict(m: TrainedModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "algorithm": m.spec.algorithm,
        "hyper_params": m.spec.hyper_params,
        "seed": m.spec.seed,
        "n_features": m.n_features,
        "parameters": m.estimator.to_dict(),
    }


def model_from_dict(doc: dict) -> TrainedModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a eurohoops model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    spec = ModelSpec(doc["algorithm"], dict(doc["hyper_params"]), int(doc["seed"]))
    _, params = _build(spec)
    est = _ESTIMATORS[spec.algorithm].from_dict(params, doc["parameters"])
    return TrainedModel(spec, est, int(doc["n_features"]))


def save_model(m: TrainedModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(m), indent=1, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_model(path) -> TrainedModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


__all__ = [
    "ALGORITHMS", "ModelSpec", "TrainedModel", "TrainingError", "train", "predict_proba",
    "predict_label", "combine_team_predictions", "save_model", "load_model",
    "model_to_dict", "model_from_dict", "logistic_objective", "AdaBoost", "DecisionTree",
    "RandomForest", "GradientBoosting", "RBFSVM", "LogisticRegression", "LinearSVM",
    "LinearDiscriminant", "GaussianNB", "KNN",
]
