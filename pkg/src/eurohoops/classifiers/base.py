from __future__ import annotations

import numpy as np


class TrainingError(ValueError):
    pass


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def rng_for(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, index); independent of call order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def as_pm1(y) -> np.ndarray:
    """Labels {1, 2} -> {+1, -1}."""
    y = np.asarray(y)
    return np.where(y == 1, 1.0, -1.0)


def tolist(a):
    return np.asarray(a).tolist()
