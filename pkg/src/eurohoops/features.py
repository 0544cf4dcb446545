"""Pre-game team states and the match-level / team-level design matrices."""
from __future__ import annotations

import csv
import warnings
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .domain import GameRecord, Label, SeasonDataset

MATCH_COLUMNS = (
    "Position Home", "Position Away", "Offence Home", "Offence Away",
    "Defence Home", "Defence Away", "Form Home", "Form Away",
    "Difference Home", "Difference Away", "Home F4", "Away F4",
)
TEAM_COLUMNS = ("Home Flag", "Position", "Offence", "Defence", "Difference", "Form", "F4")
FORM_WINDOW = 5


class ColdStartError(ValueError):
    """No pre-game information exists for round 1."""


@dataclass(frozen=True)
class StandingsRow:
    team: str
    wins: int
    losses: int
    points_for: int
    points_against: int
    diff: int
    position: int


@dataclass(frozen=True)
class TeamState:
    position: int
    avg_offense: float
    avg_defense: float
    avg_diff: float
    form: float
    f4: int


def _standings_key(team, wins, diff, pf):
    return (-wins, -diff, -pf, team)


def _rank(totals: dict[str, list[int]]) -> list[StandingsRow]:
    # totals[team] = [wins, losses, pf, pa]
    order = sorted(totals, key=lambda t: _standings_key(
        t, totals[t][0], totals[t][2] - totals[t][3], totals[t][2]))
    return [StandingsRow(t, totals[t][0], totals[t][1], totals[t][2], totals[t][3],
                         totals[t][2] - totals[t][3], i + 1) for i, t in enumerate(order)]


def compute_standings(d: SeasonDataset, through_round: int) -> list[StandingsRow]:
    """League table after `through_round`.

    Order: wins desc, points difference desc, points scored desc, team name asc.
    """
    if through_round < 1:
        raise ValueError("through_round must be >= 1")
    if through_round > d.max_round:
        raise ValueError(f"through_round {through_round} exceeds played rounds ({d.max_round})")
    totals = {t: [0, 0, 0, 0] for t in d.teams}
    for g in d.games:
        if g.round > through_round:
            continue
        hw = g.home_score > g.away_score
        h, a = totals[g.home_team], totals[g.away_team]
        h[0 if hw else 1] += 1
        a[1 if hw else 0] += 1
        h[2] += g.home_score
        h[3] += g.away_score
        a[2] += g.away_score
        a[3] += g.home_score
    return _rank(totals)


def team_state(d: SeasonDataset, team: str, before_round: int) -> TeamState:
    if before_round <= 1:
        raise ColdStartError("cold start: no features for round 1")
    if team not in d.teams:
        raise KeyError(team)
    table = compute_standings(d, before_round - 1)
    position = next(r.position for r in table if r.team == team)
    scored, conceded, results = [], [], []
    for g in d.games:
        if g.round >= before_round:
            continue
        if g.home_team == team:
            scored.append(g.home_score)
            conceded.append(g.away_score)
        elif g.away_team == team:
            scored.append(g.away_score)
            conceded.append(g.home_score)
        else:
            continue
        results.append(g.winner == team)
    return _state(position, scored, conceded, results, team in d.f4_prev)


def _state(position, scored, conceded, results, f4) -> TeamState:
    played = len(scored)
    if played == 0:
        off = dfn = form = 0.0
    else:
        off = sum(scored) / played
        dfn = sum(conceded) / played
        last = results[-FORM_WINDOW:]
        form = sum(last) / len(last)
    return TeamState(position, off, dfn, off - dfn, form, int(f4))


def season_states(d: SeasonDataset) -> dict[tuple[str, int], TeamState]:
    """TeamState for every (team, r) with 2 <= r <= max_round, built incrementally."""
    totals = {t: [0, 0, 0, 0] for t in d.teams}
    scored = defaultdict(list)
    conceded = defaultdict(list)
    results = defaultdict(list)
    by_round: dict[int, list[GameRecord]] = defaultdict(list)
    for g in d.games:
        by_round[g.round].append(g)
    states = {}
    for r in range(1, d.max_round + 1):
        if r >= 2:
            positions = {row.team: row.position for row in _rank(totals)}
            for t in d.teams:
                states[(t, r)] = _state(positions[t], scored[t], conceded[t], results[t],
                                        t in d.f4_prev)
        for g in by_round.get(r, ()):
            hw = g.home_score > g.away_score
            h, a = totals[g.home_team], totals[g.away_team]
            h[0 if hw else 1] += 1
            a[1 if hw else 0] += 1
            h[2] += g.home_score
            h[3] += g.away_score
            a[2] += g.away_score
            a[3] += g.home_score
            for team, s, c, w in ((g.home_team, g.home_score, g.away_score, hw),
                                  (g.away_team, g.away_score, g.home_score, not hw)):
                scored[team].append(s)
                conceded[team].append(c)
                results[team].append(w)
    return states


@dataclass
class FeatureMatrix:
    column_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    row_keys: list = field(default_factory=list)
    seasons: np.ndarray | None = None
    rounds: np.ndarray | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float).reshape(len(self.y), len(self.column_names))
        self.y = np.asarray(self.y, dtype=np.int64)
        n = len(self.y)
        if self.seasons is None:
            self.seasons = np.zeros(n, dtype=np.int64)
        if self.rounds is None:
            self.rounds = np.zeros(n, dtype=np.int64)
        if len(self.row_keys) != n:
            raise ValueError("row_keys must align with rows")

    def __len__(self):
        return len(self.y)

    @property
    def n_features(self) -> int:
        return len(self.column_names)

    def take(self, mask_or_idx) -> "FeatureMatrix":
        idx = np.arange(len(self))[mask_or_idx]
        return FeatureMatrix(self.column_names, self.X[idx], self.y[idx],
                             [self.row_keys[i] for i in idx], self.seasons[idx], self.rounds[idx])

    def select(self, columns) -> "FeatureMatrix":
        cols = list(columns)
        missing = [c for c in cols if c not in self.column_names]
        if missing:
            raise KeyError(f"unknown feature columns {missing}")
        # keep canonical order
        keep = [i for i, c in enumerate(self.column_names) if c in cols]
        return replace(self, column_names=tuple(self.column_names[i] for i in keep),
                       X=self.X[:, keep])

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["season", "round", "key", *self.column_names, "label"])
            for key, s, r, x, lab in zip(self.row_keys, self.seasons, self.rounds, self.X, self.y):
                w.writerow([int(s), int(r), "|".join(map(str, _flatten(key))),
                            *(repr(float(v)) for v in x), int(lab)])


def _flatten(key):
    for k in key:
        if isinstance(k, tuple):
            yield from _flatten(k)
        else:
            yield k


def _check_f4(d: SeasonDataset):
    if not d.f4_prev:
        warnings.warn(f"season {d.season}: no final-four metadata, F4 flags are 0",
                      stacklevel=3)


def match_feature_matrix(datasets: dict[int, SeasonDataset], seasons) -> FeatureMatrix:
    """One row per game of round >= 2, features computed within each season."""
    rows, labels, keys, ss, rr = [], [], [], [], []
    for season in seasons:
        d = datasets[season]
        _check_f4(d)
        states = season_states(d)
        for g in d.games:
            if g.round < 2:
                continue
            h, a = states[(g.home_team, g.round)], states[(g.away_team, g.round)]
            rows.append([h.position, a.position, h.avg_offense, a.avg_offense,
                         h.avg_defense, a.avg_defense, h.form, a.form,
                         h.avg_diff, a.avg_diff, h.f4, a.f4])
            labels.append(int(g.label))
            keys.append(g.key)
            ss.append(season)
            rr.append(g.round)
    return FeatureMatrix(MATCH_COLUMNS, np.array(rows, dtype=float).reshape(-1, 12), labels,
                         keys, np.array(ss, dtype=np.int64), np.array(rr, dtype=np.int64))


def team_feature_matrix(datasets: dict[int, SeasonDataset], seasons) -> FeatureMatrix:
    """Two rows per game (home then away); label 1 if that team won, else 2."""
    rows, labels, keys, ss, rr = [], [], [], [], []
    for season in seasons:
        d = datasets[season]
        _check_f4(d)
        states = season_states(d)
        for g in d.games:
            if g.round < 2:
                continue
            for flag, team in ((1, g.home_team), (0, g.away_team)):
                s = states[(team, g.round)]
                rows.append([flag, s.position, s.avg_offense, s.avg_defense, s.avg_diff,
                             s.form, s.f4])
                labels.append(int(Label.HOME_WIN if g.winner == team else Label.AWAY_WIN))
                keys.append((g.key, team))
                ss.append(season)
                rr.append(g.round)
    return FeatureMatrix(TEAM_COLUMNS, np.array(rows, dtype=float).reshape(-1, 7), labels,
                         keys, np.array(ss, dtype=np.int64), np.array(rr, dtype=np.int64))


@dataclass(frozen=True)
class Scaler:
    mins: np.ndarray
    maxs: np.ndarray

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.maxs - self.mins
        safe = np.where(span > 0, span, 1.0)
        out = (X - self.mins) / safe
        out = np.where(span > 0, out, 0.0)
        return np.clip(out, 0.0, 1.0)


def fit_scaler(m) -> Scaler:
    """Min-max scaler; accepts a FeatureMatrix or a raw 2-D array."""
    X = m.X if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=float)
    return Scaler(X.min(axis=0), X.max(axis=0))


def apply_scaler(s: Scaler, m):
    if isinstance(m, FeatureMatrix):
        return replace(m, X=s.transform(m.X))
    return s.transform(m)
