"""Pure-numpy AdaBoost stump kernels (fallback for the compiled module).

Every reduction is sequential (cumsum / explicit loops) so results match
the compiled kernels bit for bit.
"""
import math

import numpy as np


def ada_fit(X, order, y, n_estimators, learning_rate, eps_floor=1e-10):
    X = np.ascontiguousarray(X, dtype=np.float64)
    order = np.ascontiguousarray(order, dtype=np.intp)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, d = X.shape
    w = np.full(n, 1.0 / n)
    pos = y > 0
    rows = np.arange(d)[:, None]
    xs = X.T[rows, order]                       # (d, n) sorted values
    distinct = xs[:, 1:] > xs[:, :-1]           # valid split after position k
    ys_pos = pos[order]                         # (d, n)
    feat, thr, pol, alphas, errs = [], [], [], [], []
    for _ in range(n_estimators):
        wpos = np.where(pos, w, 0.0)
        wneg = np.where(pos, 0.0, w)
        tp = np.cumsum(wpos)[-1]
        tn = np.cumsum(wneg)[-1]
        ws = w[order]
        cp = np.cumsum(np.where(ys_pos, ws, 0.0), axis=1)[:, :-1]
        cn = np.cumsum(np.where(ys_pos, 0.0, ws), axis=1)[:, :-1]
        e_plus = cp + (tn - cn)
        e_minus = (tp - cp) + cn
        errs_all = np.stack([e_plus, e_minus], axis=-1)
        errs_all[~distinct] = np.inf
        flat = int(np.argmin(errs_all))
        best_err = float(errs_all.reshape(-1)[flat]) if errs_all.size else math.inf
        if not best_err < 0.5:
            break
        j, k, p = np.unravel_index(flat, errs_all.shape)
        best_pol = 1.0 if p == 0 else -1.0
        eps = best_err if best_err > eps_floor else eps_floor
        alpha = learning_rate * (0.5 * math.log((1.0 - eps) / eps))
        threshold = 0.5 * (xs[j, k] + xs[j, k + 1])
        feat.append(int(j))
        thr.append(float(threshold))
        pol.append(best_pol)
        alphas.append(alpha)
        errs.append(best_err)
        if best_err <= 0.0:
            break
        h = np.where(X[:, j] > threshold, best_pol, -best_pol)
        w = w * np.where(h * y > 0, math.exp(-alpha), math.exp(alpha))
        w = w / np.cumsum(w)[-1]
    return (np.array(feat, dtype=np.intp), np.array(thr, dtype=np.float64),
            np.array(pol, dtype=np.float64), np.array(alphas, dtype=np.float64),
            np.array(errs, dtype=np.float64))


def ada_decision(X, feat, thr, pol, alpha):
    X = np.asarray(X, dtype=np.float64)
    acc = np.zeros(X.shape[0])
    for f, t, p, a in zip(feat, thr, pol, alpha):
        acc = acc + np.where(X[:, f] > t, a * p, a * (-p))
    return acc
