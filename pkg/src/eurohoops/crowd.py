"""Majority vote of forum members as a predictor."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .backtest import BacktestReport, RoundResult
from .domain import Label, Prediction


def majority_vote(votes) -> Label:
    """Most frequent label; a tie goes to the home side."""
    votes = list(votes)
    if not votes:
        raise ValueError("no votes")
    c = Counter(int(v) for v in votes)
    return Label.AWAY_WIN if c[2] > c[1] else Label.HOME_WIN


@dataclass
class CrowdCoverage:
    voted_games: int
    unvoted_games: int


def crowd_backtest(votes, datasets, test_season: int, excluded_rounds=(1,)):
    """Score the per-game majority against results.

    Round 1 is always skipped. Returns (report, coverage).
    """
    d = datasets[test_season]
    excluded = set(excluded_rounds) | {1}
    by_key = {g.key: g for g in d.games}
    ballots = defaultdict(list)
    for v in votes:
        if v.season != test_season:
            continue
        if v.game_key not in by_key:
            raise KeyError(f"voted game {v.game_key} is not in the results")
        ballots[v.game_key].append(v.prediction)
    rep = BacktestReport("crowd", test_season)
    unvoted = 0
    for r in d.rounds:
        if r in excluded:
            continue
        games = [g for g in d.games_in_round(r)]
        preds, correct, n = [], 0, 0
        for g in games:
            if not ballots.get(g.key):
                unvoted += 1
                continue
            share = sum(1 for b in ballots[g.key] if b == Label.HOME_WIN) / len(ballots[g.key])
            p = Prediction(*g.key, majority_vote(ballots[g.key]), share)
            preds.append(p)
            rep.actual[g.key] = g.label
            correct += int(p.predicted == g.label)
            n += 1
        if n:
            rep.per_round.append(RoundResult(r, n, correct, preds))
    voted = sum(r.n_games for r in rep.per_round)
    return rep, CrowdCoverage(voted, unvoted)
