"""Compiled vs pure-numpy AdaBoost kernels: timing and an equality check.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from eurohoops import _kernels_py
from eurohoops._backend import compiled_kernels
from eurohoops.classifiers.boosting import presort
from eurohoops.features import fit_scaler, match_feature_matrix
from eurohoops.synth import generate_league

CASES = [  # (label, rows, stumps)
    ("one CV fold", 376, 150),
    ("full history", 696, 150),
    ("long ensemble", 464, 500),
]


def matrix():
    league = generate_league(seed=0)
    m = match_feature_matrix(league, sorted(league))
    X = fit_scaler(m).transform(m.X)
    return X, np.where(m.y == 1, 1.0, -1.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if compiled_kernels is None:
        raise SystemExit("compiled kernels not built (pip install -e . --no-build-isolation)")
    X_all, y_all = matrix()
    print(f"{'case':<14} {'rows':>5} {'stumps':>6} {'compiled ms':>12} {'python ms':>10} "
          f"{'speed-up':>8}  identical")
    for label, n, stages in CASES:
        X = np.ascontiguousarray(X_all[:n])
        y = np.ascontiguousarray(y_all[:n])
        order = presort(X)
        times = {}
        outs = {}
        for name, mod in (("compiled", compiled_kernels), ("python", _kernels_py)):
            fit = lambda: mod.ada_fit(X, order, y, stages, 0.7)  # noqa: E731
            outs[name] = fit()
            times[name] = min(timeit.repeat(fit, number=1, repeat=args.repeat)) * 1e3
        same = all(np.array_equal(a, b) for a, b in zip(outs["compiled"], outs["python"]))
        dec = [m.ada_decision(X, *outs[k][:4]) for m, k in
               ((compiled_kernels, "compiled"), (_kernels_py, "python"))]
        same = same and np.array_equal(*dec)
        print(f"{label:<14} {n:>5} {stages:>6} {times['compiled']:>12.2f} {times['python']:>10.2f} "
              f"{times['python'] / times['compiled']:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
