"""Round-by-round walk-forward evaluation and the three rule-based benchmarks."""
from __future__ import annotations

import logging
from pathlib import Path
from dataclasses import dataclass, field

import numpy as np

from .classifiers import ModelSpec, combine_team_predictions, load_model, save_model, train
from .domain import Label, Prediction, SeasonDataset, label_from_probability
from .features import (FeatureMatrix, compute_standings, fit_scaler,
                       match_feature_matrix, team_feature_matrix)
from .model_selection import MetricPair, grid_search, weighted_accuracy

log = logging.getLogger(__name__)

MODEL_1_FEATURES = ("Position Home", "Position Away", "Offence Home", "Offence Away",
                    "Defence Away", "Difference Away", "Away F4")
MODEL_2_FEATURES = ("Position Home", "Offence Home", "Offence Away", "Defence Away",
                    "Difference Away", "Home F4", "Away F4")


@dataclass(frozen=True)
class ModelRecipe:
    spec: ModelSpec
    features: tuple[str, ...] | None = None    # None = every column
    level: str = "match"                       # or "team"
    grid: dict | None = None
    retune: bool = False
    cv_folds: int = 5


MODEL_RECIPES = {
    "model1": ModelRecipe(ModelSpec("ADA2", {"n_estimators": 141, "learning_rate": 0.7}),
                          MODEL_1_FEATURES),
    "model2": ModelRecipe(ModelSpec("ADA2", {"n_estimators": 115, "learning_rate": 0.7}),
                          MODEL_2_FEATURES),
    "model3": ModelRecipe(ModelSpec("ADA2", {"n_estimators": 141, "learning_rate": 0.7})),
}


@dataclass
class RoundResult:
    round: int
    n_games: int
    n_correct: int
    predictions: list[Prediction] = field(default_factory=list)

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_games


@dataclass
class BacktestReport:
    name: str
    season: int
    per_round: list[RoundResult] = field(default_factory=list)
    actual: dict = field(default_factory=dict)   # game key -> Label
    skipped_rounds: list[int] = field(default_factory=list)

    @property
    def predictions(self) -> list[Prediction]:
        return [p for r in self.per_round for p in r.predictions]

    def _labels(self):
        preds = self.predictions
        return (np.array([int(self.actual[p.key]) for p in preds]),
                np.array([int(p.predicted) for p in preds]))

    @property
    def n_games(self) -> int:
        return sum(r.n_games for r in self.per_round)

    @property
    def n_correct(self) -> int:
        return sum(r.n_correct for r in self.per_round)

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_games

    @property
    def weighted_accuracy(self) -> float:
        return weighted_accuracy(*self._labels())

    @property
    def totals(self) -> MetricPair:
        return MetricPair(self.accuracy, self.weighted_accuracy)

    @property
    def trend_slope(self) -> float:
        return accuracy_trend(self)


def accuracy_trend(report: BacktestReport) -> float:
    """Least-squares slope of per-round accuracy against round number."""
    if len(report.per_round) < 2:
        raise ValueError("trend needs at least two rounds")
    x = np.array([r.round for r in report.per_round], dtype=float)
    a = np.array([r.accuracy for r in report.per_round])
    xc = x - x.mean()
    return float((xc * (a - a.mean())).sum() / (xc * xc).sum())


def _complete_rounds(d: SeasonDataset, name: str):
    expected = d.n_teams // 2
    for r in d.rounds:
        if r < 2:
            continue
        games = d.games_in_round(r)
        if len(games) < expected:
            log.warning("%s: season %d round %d has %d of %d games; skipped",
                        name, d.season, r, len(games), expected)
            yield r, None
        else:
            yield r, games


def _report(name, d, predict_round, rounds=None, exclude=()) -> BacktestReport:
    rep = BacktestReport(name, d.season)
    for r, games in _complete_rounds(d, name):
        if r in exclude or (rounds is not None and r not in rounds):
            continue
        if games is None:
            rep.skipped_rounds.append(r)
            continue
        preds = predict_round(r, games)
        correct = 0
        for g, p in zip(games, preds):
            rep.actual[g.key] = g.label
            correct += int(p.predicted == g.label)
        rep.per_round.append(RoundResult(r, len(games), correct, preds))
    return rep


def _fixed(g, label: Label) -> Prediction:
    return Prediction(g.season, g.round, g.home_team, g.away_team, label,
                      1.0 if label == Label.HOME_WIN else 0.0)


def benchmark_home(datasets, test_season: int, exclude=()) -> BacktestReport:
    d = datasets[test_season]
    return _report("bench1", d, lambda r, games: [_fixed(g, Label.HOME_WIN) for g in games],
                   exclude=exclude)


def f4_rule(home_f4: bool, away_f4: bool) -> Label:
    # previous final-four side wins; otherwise (none or both) the home side
    if away_f4 and not home_f4:
        return Label.AWAY_WIN
    return Label.HOME_WIN


def benchmark_f4(datasets, test_season: int, exclude=()) -> BacktestReport:
    d = datasets[test_season]
    if not d.f4_prev:
        raise ValueError(f"season {test_season}: final-four metadata for the previous "
                         "season is required")
    f4 = d.f4_prev
    return _report("bench2", d, lambda r, games: [
        _fixed(g, f4_rule(g.home_team in f4, g.away_team in f4)) for g in games], exclude=exclude)


def benchmark_standings(datasets, test_season: int, exclude=()) -> BacktestReport:
    d = datasets[test_season]

    def predict(r, games):
        pos = {row.team: row.position for row in compute_standings(d, r - 1)}
        return [_fixed(g, Label.HOME_WIN if pos[g.home_team] < pos[g.away_team]
                       else Label.AWAY_WIN) for g in games]

    return _report("bench3", d, predict, exclude=exclude)


def _matrix(datasets, seasons, level):
    fn = match_feature_matrix if level == "match" else team_feature_matrix
    return fn(datasets, seasons)


def walk_forward(datasets, test_season: int, recipe: ModelRecipe, name: str = "model",
                 exclude=(), seed: int = 0, jobs: int = 1, model_dir=None) -> BacktestReport:
    """Re-fit on every earlier round (prior seasons + rounds 2..r-1) and predict round r.

    With ``model_dir`` each round's fitted model is saved there, and an existing
    file for the same spec is loaded instead of refitting (resume).
    """
    if test_season not in datasets:
        raise KeyError(f"test season {test_season} not in data")
    prior = sorted(s for s in datasets if s < test_season)
    if not prior:
        raise ValueError("walk-forward needs at least one earlier season")
    d = datasets[test_season]
    hist = _matrix(datasets, prior, recipe.level)
    test = _matrix(datasets, [test_season], recipe.level)
    if recipe.features is not None:
        if recipe.level != "match":
            raise ValueError("feature subsets apply to match-level recipes")
        hist, test = hist.select(recipe.features), test.select(recipe.features)
    keys_by_round: dict[int, np.ndarray] = {}
    for r in np.unique(test.rounds):
        keys_by_round[int(r)] = np.flatnonzero(test.rounds == r)

    def predict(r, games):
        train_rows = FeatureMatrix(
            hist.column_names,
            np.vstack([hist.X, test.X[test.rounds < r]]),
            np.concatenate([hist.y, test.y[test.rounds < r]]),
            list(hist.row_keys) + [k for k, rr in zip(test.row_keys, test.rounds) if rr < r],
        )
        if len(train_rows) == 0:
            raise ValueError(f"round {r}: empty training set")
        spec = recipe.spec
        if recipe.retune and recipe.grid is not None:
            spec = spec.with_params(**grid_search(spec, recipe.grid, train_rows, k=recipe.cv_folds,
                                                  seed=seed, jobs=jobs, refine=True).best_params)
        scaler = fit_scaler(train_rows)
        model = None
        path = Path(model_dir) / f"{name}_{test_season}_round{r:02d}.json" if model_dir else None
        if path is not None and path.exists():
            cached = load_model(path)
            if cached.spec == spec and cached.n_features == train_rows.n_features:
                model = cached
        if model is None:
            model = train(spec, scaler.transform(train_rows.X), train_rows.y)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                save_model(model, path)
        idx = keys_by_round.get(r, np.array([], dtype=np.intp))
        probs = model.predict_proba(scaler.transform(test.X[idx])) if len(idx) else np.array([])
        if recipe.level == "match":
            by_key = {test.row_keys[i]: float(p) for i, p in zip(idx, probs)}
            return [Prediction(*g.key, label_from_probability(by_key[g.key]), by_key[g.key])
                    for g in games]
        by_key = {test.row_keys[i]: float(p) for i, p in zip(idx, probs)}
        out = []
        for g in games:
            ph, pa = by_key[(g.key, g.home_team)], by_key[(g.key, g.away_team)]
            label = combine_team_predictions(ph, pa)
            # share of the two win probabilities, as a home-win score
            share = ph / (ph + pa) if ph + pa > 0 else 0.5
            out.append(Prediction(*g.key, label, share))
        return out

    return _report(name, d, predict, exclude=exclude)
