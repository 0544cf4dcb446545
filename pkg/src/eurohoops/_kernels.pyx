# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled AdaBoost stump kernels.

Arithmetic order mirrors ``_kernels_py`` exactly so both backends return
bit-identical ensembles. Do not build with -ffast-math.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, INFINITY

cnp.import_array()


def ada_fit(const double[:, ::1] X, const cnp.intp_t[:, ::1] order,
            const double[::1] y, int n_estimators, double learning_rate,
            double eps_floor=1e-10):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t t, j, k, i, inext, best_j, best_k
    cdef int best_pol, stage_count = 0
    cdef double tp, tn, cp, cn, xi, xn, e_plus, e_minus, best_err, eps, alpha, up, down, s
    cdef double[::1] w = np.full(n, 1.0 / n)
    feat = np.empty(n_estimators, dtype=np.intp)
    thr = np.empty(n_estimators, dtype=np.float64)
    pol = np.empty(n_estimators, dtype=np.float64)
    alphas = np.empty(n_estimators, dtype=np.float64)
    errs = np.empty(n_estimators, dtype=np.float64)
    cdef cnp.intp_t[::1] feat_v = feat
    cdef double[::1] thr_v = thr, pol_v = pol, alpha_v = alphas, err_v = errs
    cdef double h

    for t in range(n_estimators):
        tp = 0.0
        tn = 0.0
        for i in range(n):
            if y[i] > 0:
                tp = tp + w[i]
            else:
                tn = tn + w[i]
        best_err = INFINITY
        best_j = -1
        best_k = -1
        best_pol = 1
        for j in range(d):
            cp = 0.0
            cn = 0.0
            for k in range(n - 1):
                i = order[j, k]
                if y[i] > 0:
                    cp = cp + w[i]
                else:
                    cn = cn + w[i]
                inext = order[j, k + 1]
                xi = X[i, j]
                xn = X[inext, j]
                if not (xn > xi):
                    continue
                e_plus = cp + (tn - cn)
                e_minus = (tp - cp) + cn
                if e_plus < best_err:
                    best_err = e_plus
                    best_j = j
                    best_k = k
                    best_pol = 1
                if e_minus < best_err:
                    best_err = e_minus
                    best_j = j
                    best_k = k
                    best_pol = -1
        if best_j < 0 or not (best_err < 0.5):
            break
        eps = best_err if best_err > eps_floor else eps_floor
        alpha = learning_rate * (0.5 * log((1.0 - eps) / eps))
        i = order[best_j, best_k]
        inext = order[best_j, best_k + 1]
        feat_v[stage_count] = best_j
        thr_v[stage_count] = 0.5 * (X[i, best_j] + X[inext, best_j])
        pol_v[stage_count] = best_pol
        alpha_v[stage_count] = alpha
        err_v[stage_count] = best_err
        stage_count += 1
        if best_err <= 0.0:
            break
        up = exp(alpha)
        down = exp(-alpha)
        s = 0.0
        for i in range(n):
            h = best_pol if X[i, best_j] > thr_v[stage_count - 1] else -best_pol
            if h * y[i] > 0:
                w[i] = w[i] * down
            else:
                w[i] = w[i] * up
            s = s + w[i]
        for i in range(n):
            w[i] = w[i] / s
    return (feat[:stage_count].copy(), thr[:stage_count].copy(), pol[:stage_count].copy(),
            alphas[:stage_count].copy(), errs[:stage_count].copy())


def ada_decision(const double[:, ::1] X, const cnp.intp_t[::1] feat,
                 const double[::1] thr, const double[::1] pol, const double[::1] alpha):
    cdef Py_ssize_t n = X.shape[0], m = feat.shape[0], i, t
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc
    for i in range(n):
        acc = 0.0
        for t in range(m):
            if X[i, feat[t]] > thr[t]:
                acc = acc + alpha[t] * pol[t]
            else:
                acc = acc + alpha[t] * (-pol[t])
        o[i] = acc
    return out
