"""CSV emitters for every table / figure the pipeline reproduces."""
from __future__ import annotations

import csv
from pathlib import Path

from . import descriptive as desc


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def descriptive_reports(datasets, out) -> list[Path]:
    out = Path(out)
    files = []
    seasons = sorted(datasets)
    summaries = [desc.season_summary(datasets[s]) for s in seasons]
    files.append(write_csv(out / "season_summary.csv", desc.SUMMARY_HEADER,
                           [s.row(1) for s in summaries]))
    rows = []
    scopes = [(str(s), datasets[s]) for s in seasons] + [("all", list(datasets.values()))]
    for label, d in scopes:
        for side in ("home", "away"):
            for outcome in ("all", "wins", "losses"):
                try:
                    q = desc.score_quartiles(d, side, outcome)
                except ValueError:
                    continue
                rows.append([label, side, outcome, q.min, q.q1, q.median, q.q3, q.max, q.n])
    files.append(write_csv(out / "score_quartiles.csv",
                           ["season", "side", "outcome", "min", "q1", "median", "q3", "max", "n"], rows))
    rows = []
    for label, d in scopes:
        for winner in ("home", "away"):
            try:
                q = desc.diff_quartiles(d, winner)
            except ValueError:
                continue
            rows.append([label, winner, q.min, q.q1, q.median, q.q3, q.max, q.n])
    files.append(write_csv(out / "diff_quartiles.csv",
                           ["season", "winner", "min", "q1", "median", "q3", "max", "n"], rows))
    pooled = list(datasets.values())
    for scope in ("all", "home", "away"):
        curve = desc.win_probability_curve(pooled, scope)
        files.append(write_csv(out / f"win_prob_curve_{scope}.csv",
                               ["threshold", "probability", "support"], curve))
    return files


def grid_rows(algorithm, result):
    names = sorted({k for p, _ in result.all_points for k in p})
    rows = [[algorithm, *(p.get(n, "") for n in names), m.accuracy, m.weighted_accuracy]
            for p, m in result.all_points]
    return ["algorithm", *names, "accuracy", "weighted_accuracy"], rows


def backtest_rows(report):
    return [[r.round, r.n_games, r.n_correct, r.accuracy] for r in report.per_round]


def prediction_rows(report):
    return [[p.season, p.round, p.home_team, p.away_team, int(p.predicted), p.probability_home,
             int(report.actual[p.key])] for p in report.predictions]
