"""Season summaries, score quartiles and win-probability-by-score curves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import SeasonDataset


@dataclass(frozen=True)
class QuartileSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    n: int


@dataclass(frozen=True)
class SeasonSummary:
    season: int
    home_wins: int
    away_wins: int
    mean_home_score: float
    mean_away_score: float
    mean_home_win_score: float
    mean_away_win_score: float

    def row(self, decimals: int = 1) -> list:
        return [self.season, self.home_wins, self.away_wins] + [
            f"{v:.{decimals}f}" for v in (self.mean_home_score, self.mean_away_score,
                                          self.mean_home_win_score, self.mean_away_win_score)]


SUMMARY_HEADER = ["season", "home_wins", "away_wins", "mean_home_score", "mean_away_score",
                  "mean_home_win_score", "mean_away_win_score"]


def _games(d):
    """Accept a single SeasonDataset or an iterable of them (pooled)."""
    if isinstance(d, SeasonDataset):
        return list(d.games)
    if isinstance(d, dict):
        d = d.values()
    return [g for ds in d for g in ds.games]


def season_summary(d: SeasonDataset) -> SeasonSummary:
    games = _games(d)
    if not games:
        raise ValueError("season_summary needs at least one game")
    home = np.array([g.home_score for g in games], dtype=float)
    away = np.array([g.away_score for g in games], dtype=float)
    hw = home > away
    # home team's mean score in its wins, away team's mean score in its wins
    mhw = float(home[hw].mean()) if hw.any() else float("nan")
    maw = float(away[~hw].mean()) if (~hw).any() else float("nan")
    return SeasonSummary(d.season, int(hw.sum()), int((~hw).sum()), float(home.mean()),
                         float(away.mean()), mhw, maw)


def quartiles(values) -> QuartileSummary:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty selection")
    q = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
    return QuartileSummary(*map(float, q), n=int(v.size))


def score_quartiles(d, side: str = "home", outcome: str = "all") -> QuartileSummary:
    """Quartiles of one side's scores, optionally restricted to that side's wins/losses."""
    if side not in ("home", "away") or outcome not in ("all", "wins", "losses"):
        raise ValueError(f"bad selection side={side!r} outcome={outcome!r}")
    vals = []
    for g in _games(d):
        score = g.home_score if side == "home" else g.away_score
        won = (g.home_score > g.away_score) == (side == "home")
        if outcome == "all" or (outcome == "wins") == won:
            vals.append(score)
    return quartiles(vals)


def diff_quartiles(d, winner: str = "home") -> QuartileSummary:
    if winner not in ("home", "away"):
        raise ValueError(f"bad winner side {winner!r}")
    vals = [abs(g.home_score - g.away_score) for g in _games(d)
            if (g.home_score > g.away_score) == (winner == "home")]
    return quartiles(vals)


def team_game_observations(d, scope: str = "all") -> list[tuple[int, bool]]:
    """(score, won) per team appearance; scope picks home, away or both sides."""
    if scope not in ("all", "home", "away"):
        raise ValueError(f"bad scope {scope!r}")
    obs = []
    for g in _games(d):
        hw = g.home_score > g.away_score
        if scope in ("all", "home"):
            obs.append((g.home_score, hw))
        if scope in ("all", "away"):
            obs.append((g.away_score, not hw))
    return obs


def win_probability_curve(d, scope: str = "all") -> list[tuple[int, float, int]]:
    """P(win | score >= N) for each integer N between the min and max observed score.

    Thresholds with no supporting observation are omitted.
    """
    everything = team_game_observations(d, "all")
    obs = team_game_observations(d, scope)
    if not obs:
        return []
    # threshold range spans every observed score; scope only filters the counts
    lo = min(s for s, _ in everything)
    hi = max(s for s, _ in everything)
    scores = np.array([s for s, _ in obs])
    wins = np.array([w for _, w in obs], dtype=np.int64)
    order = np.argsort(-scores, kind="stable")
    s_desc, w_desc = scores[order], wins[order]
    cum_w = np.cumsum(w_desc)
    out = []
    for n in range(lo, hi + 1):
        k = int(np.searchsorted(-s_desc, -n, side="right"))  # count of scores >= n
        if k:
            out.append((n, float(cum_w[k - 1]) / k, k))
    return out


def break_even_threshold(curve) -> int | None:
    """Smallest threshold whose win probability exceeds one half."""
    for n, p, _ in curve:
        if p > 0.5:
            return n
    return None
