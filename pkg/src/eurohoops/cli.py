"""Batch command line: validate, describe, calibrate, select-features, backtest.

Exit codes: 0 success, 1 validation / data failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import copy
import hashlib
import json
import logging
import platform
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__, _backend
from .backtest import (MODEL_RECIPES, ModelRecipe, benchmark_f4, benchmark_home,
                       benchmark_standings, walk_forward)
from .classifiers import ALGORITHMS, ModelSpec
from .config import default_grid
from .crowd import crowd_backtest
from .feature_selection import (FILTERS, incremental_filter_eval, pca_sweep, rank_features,
                                wrapper_refine, wrapper_search)
from .features import fit_scaler, match_feature_matrix, team_feature_matrix
from .ingestion import (IngestError, attach_f4, parse_crowd, parse_f4_metadata, parse_results,
                        validate)
from .model_selection import CVPlan, grid_search
from .reports import (backtest_rows, descriptive_reports, grid_rows, prediction_rows,
                      write_csv)

log = logging.getLogger("eurohoops")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MODELS = ("model1", "model2", "model3", "bench1", "bench2", "bench3", "crowd")
METHODS = ("filter", "pca", "wrapper")

DEFAULT_CONFIG = {
    "data": {"results": None, "f4": None, "crowd": None},
    "seed": 0,
    "cv_folds": 5,
    "train_seasons": None,
    "test_season": None,
    "level": "match",
    "algorithms": list(ALGORITHMS),
    "grids": {},
    "refine": True,
    "selection": {"algorithm": "ADA2", "params": None, "top": 10},
    "backtest": {"exclude_rounds": [], "retune": False, "models": {}},
}


class UsageError(Exception):
    pass


def _merge(base, extra):
    out = copy.deepcopy(base)
    for k, v in (extra or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(args) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        cfg = _merge(cfg, yaml.safe_load(path.read_text(encoding="utf-8")) or {})
    for key in ("results", "f4", "crowd"):
        if getattr(args, key, None):
            cfg["data"][key] = getattr(args, key)
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "exclude_rounds", None) is not None:
        cfg["backtest"]["exclude_rounds"] = args.exclude_rounds
    if getattr(args, "level", None):
        cfg["level"] = args.level
    if cfg["level"] not in ("match", "team"):
        raise UsageError(f"level must be match or team, got {cfg['level']!r}")
    return cfg


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_provenance(out: Path, command: str, cfg: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "resolved_config.yaml").write_text(yaml.safe_dump(cfg, sort_keys=True),
                                              encoding="utf-8")
    inputs = {k: {"path": str(v), "sha256": _sha256(v)}
              for k, v in sorted(cfg["data"].items()) if v and Path(v).exists()}
    manifest = {
        "command": command,
        "seed": cfg["seed"],
        "inputs": inputs,
        "versions": {"eurohoops": __version__, "numpy": np.__version__,
                     "python": platform.python_version(), "kernels": _backend.BACKEND},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")


def load_data(cfg):
    results = cfg["data"]["results"]
    if not results:
        raise UsageError("no results file: pass --results or set data.results in the config")
    datasets = parse_results(results)
    if not datasets:
        raise IngestError("results file holds no games")
    f4 = parse_f4_metadata(cfg["data"]["f4"], datasets) if cfg["data"]["f4"] else None
    return attach_f4(datasets, f4) if f4 is not None else datasets


def _seasons(cfg, datasets):
    test = cfg["test_season"] if cfg["test_season"] is not None else max(datasets)
    train = cfg["train_seasons"] or [s for s in sorted(datasets) if s < test]
    missing = [s for s in [*train, test] if s not in datasets]
    if missing:
        raise IngestError(f"seasons {missing} not in results")
    return list(train), test


def _train_matrix(cfg, datasets):
    train, _ = _seasons(cfg, datasets)
    fn = match_feature_matrix if cfg["level"] == "match" else team_feature_matrix
    return fn(datasets, train)


def cmd_validate(args) -> int:
    cfg = load_config(args)
    datasets = load_data(cfg)
    report = validate(datasets)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_describe(args) -> int:
    cfg = load_config(args)
    out = Path(args.out)
    datasets = load_data(cfg)
    for p in descriptive_reports(datasets, out):
        log.info("wrote %s", p)
    write_provenance(out, "describe", cfg)
    return EXIT_OK


def _grid_for(cfg, algorithm):
    return cfg["grids"].get(algorithm, default_grid(algorithm))


def cmd_calibrate(args) -> int:
    cfg = load_config(args)
    out = Path(args.out)
    datasets = load_data(cfg)
    m = _train_matrix(cfg, datasets)
    plan = CVPlan(m, k=cfg["cv_folds"], seed=cfg["seed"])
    best_rows = []
    for alg in cfg["algorithms"]:
        if alg not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {alg!r}")
        spec = ModelSpec(alg, seed=cfg["seed"])
        res = grid_search(spec, _grid_for(cfg, alg), None, jobs=args.jobs, refine=cfg["refine"],
                          plan=plan)
        header, rows = grid_rows(alg, res)
        write_csv(out / f"calibration_{cfg['level']}_{alg}.csv", header, rows)
        params = ";".join(f"{k}={v}" for k, v in sorted(res.best_params.items()))
        best_rows.append([alg, params, res.best_metric.accuracy, res.best_metric.weighted_accuracy])
        log.info("%s best %s acc=%.4f wacc=%.4f", alg, params, res.best_metric.accuracy,
                 res.best_metric.weighted_accuracy)
    write_csv(out / f"calibration_{cfg['level']}_best.csv",
              ["algorithm", "params", "accuracy", "weighted_accuracy"], best_rows)
    write_provenance(out, "calibrate", cfg)
    return EXIT_OK


def _selection_spec(cfg, m, plan, jobs):
    sel = cfg["selection"]
    spec = ModelSpec(sel["algorithm"], seed=cfg["seed"])
    if sel.get("params"):
        return spec.with_params(**sel["params"])
    res = grid_search(spec, _grid_for(cfg, sel["algorithm"]), None, jobs=jobs,
                      refine=cfg["refine"], plan=plan)
    log.info("selection model tuned on all features: %s", res.best_params)
    return spec.with_params(**res.best_params)


def cmd_select_features(args) -> int:
    cfg = load_config(args)
    if cfg["level"] != "match":
        raise UsageError("feature selection runs on match-level features")
    out = Path(args.out)
    datasets = load_data(cfg)
    m = _train_matrix(cfg, datasets)
    plan = CVPlan(m, k=cfg["cv_folds"], seed=cfg["seed"])
    spec = _selection_spec(cfg, m, plan, args.jobs)
    names = list(m.column_names)
    if args.method == "filter":
        scaled = fit_scaler(m).transform(m.X)
        rankings = [rank_features(meth, scaled, m.y, names) for meth in FILTERS]
        rows = [[n, *(r.ranks[n] for r in rankings), *(r.scores[n] for r in rankings)]
                for n in names]
        header = ["feature", *(f"{r.method}_rank" for r in rankings),
                  *(f"{r.method}_score" for r in rankings)]
        write_csv(out / "filter_ranking.csv", header, rows)
        inc = []
        for r in rankings:
            for top, mp in incremental_filter_eval(r, spec, m, plan=plan):
                inc.append([r.method, len(top), "|".join(top), mp.accuracy, mp.weighted_accuracy])
        write_csv(out / "filter_incremental.csv",
                  ["method", "n_features", "features", "accuracy", "weighted_accuracy"], inc)
    elif args.method == "pca":
        sweep = pca_sweep(spec, _grid_for(cfg, spec.algorithm), m, k=cfg["cv_folds"],
                          seed=cfg["seed"], jobs=args.jobs, refine=cfg["refine"])
        rows = [[c, ";".join(f"{k}={v}" for k, v in sorted(g.best_params.items())),
                 g.best_metric.accuracy, g.best_metric.weighted_accuracy] for c, g in sweep]
        write_csv(out / "pca_sweep.csv", ["components", "params", "accuracy",
                                          "weighted_accuracy"], rows)
    else:
        results = wrapper_search(spec, m, jobs=args.jobs, plan=plan)
        log.info("wrapper: %d subset evaluations", len(results))
        idx = {n: i for i, n in enumerate(names)}

        def enc(sub):
            return "|".join(str(idx[n]) for n in sub)

        write_csv(out / "wrapper_all.csv", ["rank", "subset_index", "features", "accuracy",
                                            "weighted_accuracy"],
                  [[i + 1, enc(r.feature_subset), "|".join(r.feature_subset),
                    r.cv_metrics.accuracy, r.cv_metrics.weighted_accuracy]
                   for i, r in enumerate(results)])
        top = results[:cfg["selection"]["top"]]
        write_csv(out / "wrapper_top10.csv", ["rank", "subset_index", "features", "accuracy",
                                              "weighted_accuracy"],
                  [[i + 1, enc(r.feature_subset), "|".join(r.feature_subset),
                    r.cv_metrics.accuracy, r.cv_metrics.weighted_accuracy]
                   for i, r in enumerate(top)])
        refined = wrapper_refine(top, spec, _grid_for(cfg, spec.algorithm), m,
                                 k=cfg["cv_folds"], seed=cfg["seed"], jobs=args.jobs,
                                 refine=cfg["refine"])
        write_csv(out / "wrapper_refined.csv", ["rank", "features", "params", "accuracy",
                                                "weighted_accuracy"],
                  [[i + 1, "|".join(r.feature_subset),
                    ";".join(f"{k}={v}" for k, v in sorted(r.params.items())),
                    r.cv_metrics.accuracy, r.cv_metrics.weighted_accuracy]
                   for i, r in enumerate(refined)])
    write_provenance(out, f"select-features --method {args.method}", cfg)
    return EXIT_OK


def _recipe(cfg, name) -> ModelRecipe:
    user = cfg["backtest"]["models"].get(name)
    base = MODEL_RECIPES[name]
    if not user:
        recipe = base
    else:
        spec = ModelSpec(user.get("algorithm", base.spec.algorithm),
                         user.get("params", base.spec.hyper_params), cfg["seed"])
        feats = user.get("features", base.features)
        recipe = ModelRecipe(spec, tuple(feats) if feats else None, user.get("level", cfg["level"]))
    grid = _grid_for(cfg, recipe.spec.algorithm) if cfg["backtest"]["retune"] else None
    return ModelRecipe(ModelSpec(recipe.spec.algorithm, recipe.spec.hyper_params, cfg["seed"]),
                       recipe.features, recipe.level, grid, bool(cfg["backtest"]["retune"]),
                       cfg["cv_folds"])


def cmd_backtest(args) -> int:
    cfg = load_config(args)
    out = Path(args.out)
    datasets = load_data(cfg)
    _, test = _seasons(cfg, datasets)
    exclude = tuple(cfg["backtest"]["exclude_rounds"] or ())
    model = args.model
    extra = []
    if model == "bench1":
        rep = benchmark_home(datasets, test, exclude)
    elif model == "bench2":
        rep = benchmark_f4(datasets, test, exclude)
    elif model == "bench3":
        rep = benchmark_standings(datasets, test, exclude)
    elif model == "crowd":
        if not cfg["data"]["crowd"]:
            raise UsageError("crowd backtest needs --crowd")
        rep, cov = crowd_backtest(parse_crowd(cfg["data"]["crowd"]), datasets, test, exclude)
        extra = [["voted_games", cov.voted_games], ["unvoted_games", cov.unvoted_games]]
    else:
        model_dir = out / "models" if args.save_models else None
        rep = walk_forward(datasets, test, _recipe(cfg, model), model, exclude, cfg["seed"],
                           args.jobs, model_dir)
    name = "crowd_backtest" if model == "crowd" else f"backtest_{model}"
    write_csv(out / f"{name}.csv", ["round", "n_games", "n_correct", "accuracy"], backtest_rows(rep))
    write_csv(out / f"predictions_{model}.csv",
              ["season", "round", "home_team", "away_team", "predicted", "probability_home",
               "actual"], prediction_rows(rep))
    try:
        wacc = rep.weighted_accuracy
    except ValueError:
        wacc = float("nan")
    try:
        slope = rep.trend_slope
    except ValueError:
        slope = float("nan")
    summary = out / "backtest_summary.csv"
    rows = _read_summary(summary)
    rows[model] = [model, test, rep.n_games, rep.n_correct, rep.accuracy, wacc, slope]
    write_csv(summary, ["model", "season", "n_games", "n_correct", "accuracy",
                        "weighted_accuracy", "trend_slope"],
              [rows[k] for k in MODELS if k in rows])
    if extra:
        write_csv(out / "crowd_coverage.csv", ["statistic", "value"], extra)
    print(f"{model}: accuracy {rep.accuracy:.4f} weighted accuracy {wacc:.4f} "
          f"({rep.n_correct}/{rep.n_games})")
    write_provenance(out, f"backtest --model {model}", cfg)
    return EXIT_OK


def _read_summary(path: Path) -> dict:
    if not path.exists():
        return {}
    lines = path.read_text(encoding="utf-8").splitlines()[1:]
    return {ln.split(",")[0]: ln.split(",") for ln in lines if ln}


def _round_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated rounds, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--results", help="results CSV")
    common.add_argument("--f4", help="final-four metadata CSV")
    common.add_argument("--crowd", help="crowd predictions CSV")
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1, help="worker processes (results unchanged)")
    common.add_argument("--exclude-rounds", type=_round_list, default=None,
                        help="comma-separated rounds to leave out of scoring")
    common.add_argument("--level", choices=("match", "team"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="eurohoops", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check input files").set_defaults(fn=cmd_validate)
    sub.add_parser("describe", parents=[common], help="descriptive statistics").set_defaults(fn=cmd_describe)
    sub.add_parser("calibrate", parents=[common], help="CV grid search per algorithm").set_defaults(fn=cmd_calibrate)
    sp = sub.add_parser("select-features", parents=[common], help="filter / PCA / wrapper selection")
    sp.add_argument("--method", choices=METHODS, required=True)
    sp.set_defaults(fn=cmd_select_features)
    bp = sub.add_parser("backtest", parents=[common], help="walk-forward test season")
    bp.add_argument("--model", choices=MODELS, required=True)
    bp.add_argument("--save-models", action="store_true",
                    help="store per-round models under OUT/models and reuse them on rerun")
    bp.set_defaults(fn=cmd_backtest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, FileNotFoundError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
