import datetime as dt

import pytest
from hypothesis import given, settings, strategies as st

from eurohoops.descriptive import (break_even_threshold, diff_quartiles, quartiles,
                                   score_quartiles, season_summary, win_probability_curve)
from eurohoops.domain import GameRecord, SeasonDataset

D = dt.date(2019, 1, 1)


def season(*scores):
    games = [GameRecord(2019, i + 1, D, f"H{i}", f"A{i}", h, a) for i, (h, a) in enumerate(scores)]
    return SeasonDataset(2019, tuple(games))


def test_single_game_summary():
    s = season_summary(season((80, 70)))
    assert (s.home_wins, s.away_wins, s.mean_home_score) == (1, 0, 80)


def test_empty_summary_raises():
    with pytest.raises(ValueError):
        season_summary(SeasonDataset(2019, ()))


def test_quartile_median():
    assert score_quartiles(season((70, 60), (80, 60), (90, 60)), "home").median == 80


def test_linear_interpolation_quartiles():
    # position (n-1)p into sorted {1,2,3,4}: 0.75 -> 1.75, 1.5 -> 2.5, 2.25 -> 3.25
    q = quartiles([4, 1, 3, 2])
    assert (q.q1, q.median, q.q3) == (1.75, 2.5, 3.25)


def test_diff_quartiles_single_game():
    q = diff_quartiles(season((80, 70)), "home")
    assert q.min == q.q1 == q.median == q.q3 == q.max == 10


def test_empty_selection_raises():
    with pytest.raises(ValueError):
        diff_quartiles(season((80, 70)), "away")


def test_curve_single_game():
    curve = {n: (p, k) for n, p, k in win_probability_curve(season((80, 70)), "home")}
    assert curve[75] == (1.0, 1)


def brute_curve(d, scope):
    obs = []
    for g in d.games:
        if scope in ("all", "home"):
            obs.append((g.home_score, g.home_score > g.away_score))
        if scope in ("all", "away"):
            obs.append((g.away_score, g.away_score > g.home_score))
    out = []
    every = [x.home_score for x in d.games] + [x.away_score for x in d.games]
    lo, hi = min(every), max(every)
    for n in range(lo, hi + 1):
        sel = [w for s, w in obs if s >= n]
        if sel:
            out.append((n, sum(sel) / len(sel), len(sel)))
    return out


scores = st.tuples(st.integers(40, 120), st.integers(40, 120)).filter(lambda t: t[0] != t[1])


@settings(max_examples=60)
@given(st.lists(scores, min_size=1, max_size=30))
def test_curve_matches_recount(pairs):
    d = season(*pairs)
    for scope in ("all", "home", "away"):
        assert win_probability_curve(d, scope) == brute_curve(d, scope)


@settings(max_examples=60)
@given(st.lists(scores, min_size=1, max_size=30))
def test_summary_counts_and_quartile_order(pairs):
    d = season(*pairs)
    s = season_summary(d)
    assert s.home_wins == sum(h > a for h, a in pairs)
    assert s.home_wins + s.away_wins == len(pairs)
    for side in ("home", "away"):
        q = score_quartiles(d, side)
        assert q.min <= q.q1 <= q.median <= q.q3 <= q.max


def test_synthetic_league_shape(league):
    pooled = list(league.values())
    curve = win_probability_curve(pooled, "all")
    assert break_even_threshold(curve) is not None
    home = dict((n, p) for n, p, _ in win_probability_curve(pooled, "home"))
    away = dict((n, p) for n, p, _ in win_probability_curve(pooled, "away"))
    common = [n for n in home if n in away and 70 <= n <= 90]
    assert sum(home[n] >= away[n] for n in common) >= 0.8 * len(common)
