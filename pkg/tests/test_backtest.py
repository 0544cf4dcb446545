import datetime as dt
from dataclasses import replace

import numpy as np
import pytest

from eurohoops import backtest
from eurohoops.backtest import (BacktestReport, ModelRecipe, RoundResult, accuracy_trend,
                                benchmark_f4, benchmark_home, benchmark_standings, f4_rule,
                                walk_forward)
from eurohoops.classifiers import ModelSpec
from eurohoops.domain import GameRecord, Label, SeasonDataset
from eurohoops.features import match_feature_matrix

FAST = ModelRecipe(ModelSpec("ADA2", {"n_estimators": 20, "learning_rate": 0.7}))


def truncated(league, season, r):
    out = dict(league)
    out[season] = league[season].through_round(r)
    return out


def test_benchmark_home(league):
    rep = benchmark_home(league, 2019)
    assert rep.n_games == 232 and len(rep.per_round) == 29
    assert rep.weighted_accuracy == 0.5
    assert rep.accuracy == np.mean([g.label == Label.HOME_WIN for g in league[2019].games
                                    if g.round >= 2])


def test_home_only_season_single_class(league):
    d = league[2019]
    games = tuple(replace(g, home_score=max(g.home_score, g.away_score),
                          away_score=min(g.home_score, g.away_score)) for g in d.games)
    rep = benchmark_home({2019: SeasonDataset(2019, games, d.teams, d.f4_prev)}, 2019)
    assert rep.accuracy == 1.0
    with pytest.raises(ValueError):
        rep.weighted_accuracy


@pytest.mark.parametrize("home,away,label", [(False, True, 2), (True, True, 1),
                                             (True, False, 1), (False, False, 1)])
def test_f4_rule(home, away, label):
    assert f4_rule(home, away) == label


def test_benchmark_f4_matches_rule(league):
    rep = benchmark_f4(league, 2019)
    f4 = league[2019].f4_prev
    for p in rep.predictions:
        assert p.predicted == f4_rule(p.home_team in f4, p.away_team in f4)
    bare = {2019: SeasonDataset(2019, league[2019].games, league[2019].teams, frozenset())}
    with pytest.raises(ValueError):
        benchmark_f4(bare, 2019)


def test_standings_round_two():
    day = dt.date(2018, 10, 1)
    g = [GameRecord(2019, 1, day, "A", "B", 80, 70), GameRecord(2019, 1, day, "C", "D", 60, 75),
         GameRecord(2019, 2, day + dt.timedelta(7), "A", "C", 70, 90),
         GameRecord(2019, 2, day + dt.timedelta(7), "B", "D", 70, 60)]
    d = SeasonDataset(2019, tuple(g), frozenset("ABCD"), frozenset())
    rep = benchmark_standings({2019: d}, 2019)
    preds = {(p.home_team, p.away_team): p.predicted for p in rep.predictions}
    # A (1-0) hosts C (0-1); D (1-0, +15) visits B (0-1)
    assert preds[("A", "C")] == Label.HOME_WIN
    assert preds[("B", "D")] == Label.AWAY_WIN


def test_trend_slope():
    rep = BacktestReport("x", 2019, [RoundResult(1, 4, 2), RoundResult(2, 4, 3), RoundResult(3, 4, 4)])
    assert rep.trend_slope == pytest.approx(0.25)
    flat = BacktestReport("x", 2019, [RoundResult(r, 4, 2) for r in (2, 3, 4)])
    assert accuracy_trend(flat) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        accuracy_trend(BacktestReport("x", 2019, [RoundResult(2, 4, 2)]))


def test_totals_recount(league):
    rep = benchmark_standings(league, 2019)
    assert rep.n_correct == sum(int(p.predicted == rep.actual[p.key]) for p in rep.predictions)
    assert rep.totals.accuracy == pytest.approx(rep.n_correct / rep.n_games)
    assert all(r.n_correct <= r.n_games for r in rep.per_round)


def test_incomplete_round_skipped(league):
    d = league[2019]
    games = tuple(g for g in d.games if not (g.round == 5 and g.home_team == d.games_in_round(5)[0].home_team))
    rep = benchmark_home({2019: SeasonDataset(2019, games, d.teams, d.f4_prev)}, 2019)
    assert rep.skipped_rounds == [5] and rep.n_games == 224


def test_walk_forward_size_and_window(league, monkeypatch):
    seen = {}
    real_train = backtest.train

    def spy(spec, X, y, *a, **kw):
        seen[len(seen) + 2] = X.shape[0]
        return real_train(spec, X, y, *a, **kw)

    monkeypatch.setattr(backtest, "train", spy)
    rep = walk_forward(league, 2019, FAST)
    assert rep.n_games == 232 and len(rep.predictions) == 232
    prior = len(match_feature_matrix(league, [2017, 2018]))
    # predicting round 8 uses both earlier seasons plus rounds 2..7 of the test season
    assert seen[8] == prior + 6 * 8


def test_walk_forward_no_leakage(league):
    full = {p.key: p for p in walk_forward(league, 2019, FAST).predictions}
    for r in (2, 9, 30):
        cut = walk_forward(truncated(league, 2019, r), 2019, FAST)
        for p in cut.predictions:
            if p.round == r:
                assert p == full[p.key]


def test_walk_forward_team_level(league):
    rep = walk_forward(league, 2019, ModelRecipe(ModelSpec("LR"), level="team"),
                       exclude=tuple(range(4, 31)))
    assert rep.n_games == 16


def test_walk_forward_needs_prior_season(league):
    with pytest.raises(ValueError):
        walk_forward({2017: league[2017]}, 2017, FAST)


def test_walk_forward_resume(league, tmp_path):
    a = walk_forward(league, 2019, FAST, exclude=tuple(range(5, 31)), model_dir=tmp_path)
    assert len(list(tmp_path.glob("*.json"))) == 3
    b = walk_forward(league, 2019, FAST, exclude=tuple(range(5, 31)), model_dir=tmp_path)
    assert a.predictions == b.predictions
