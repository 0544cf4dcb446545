"""Core value types shared across the pipeline."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import IntEnum


class InvalidRecordError(ValueError):
    """A game record violates a basic invariant (tie score, self-play, ...)."""


class Label(IntEnum):
    HOME_WIN = 1
    AWAY_WIN = 2


GameKey = tuple  # (season, round, home_team, away_team)


@dataclass(frozen=True, order=True)
class GameRecord:
    season: int
    round: int
    date: dt.date
    home_team: str
    away_team: str
    home_score: int
    away_score: int

    def __post_init__(self):
        if self.home_team == self.away_team:
            raise InvalidRecordError(f"team plays itself: {self.home_team}")
        if self.round < 1:
            raise InvalidRecordError(f"round must be >= 1, got {self.round}")
        if self.home_score < 0 or self.away_score < 0:
            raise InvalidRecordError("scores must be non-negative")
        if self.home_score == self.away_score:
            raise InvalidRecordError(
                f"tie score {self.home_score}-{self.away_score} in "
                f"{self.season} round {self.round} {self.home_team} v {self.away_team}"
            )

    @property
    def key(self) -> GameKey:
        return (self.season, self.round, self.home_team, self.away_team)

    @property
    def label(self) -> Label:
        return derive_label(self)

    @property
    def winner(self) -> str:
        return self.home_team if self.home_score > self.away_score else self.away_team


def derive_label(g: GameRecord) -> Label:
    if g.home_score == g.away_score:
        raise InvalidRecordError("tie score has no label")
    return Label.HOME_WIN if g.home_score > g.away_score else Label.AWAY_WIN


@dataclass(frozen=True)
class SeasonDataset:
    season: int
    games: tuple[GameRecord, ...]
    teams: frozenset[str] = field(default=frozenset())
    f4_prev: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        games = tuple(sorted(self.games, key=lambda g: (g.round, g.date, g.home_team)))
        object.__setattr__(self, "games", games)
        if not self.teams:
            teams = {g.home_team for g in games} | {g.away_team for g in games}
            object.__setattr__(self, "teams", frozenset(teams))
        object.__setattr__(self, "f4_prev", frozenset(self.f4_prev))

    @property
    def n_teams(self) -> int:
        return len(self.teams)

    @property
    def rounds_in_season(self) -> int:
        return 2 * (self.n_teams - 1)

    @property
    def rounds(self) -> list[int]:
        return sorted({g.round for g in self.games})

    @property
    def max_round(self) -> int:
        return max((g.round for g in self.games), default=0)

    def games_in_round(self, r: int) -> list[GameRecord]:
        return [g for g in self.games if g.round == r]

    def through_round(self, r: int) -> "SeasonDataset":
        """Copy keeping only rounds <= r."""
        return SeasonDataset(self.season, tuple(g for g in self.games if g.round <= r),
                             self.teams, self.f4_prev)

    def with_f4(self, f4: set[str] | frozenset[str]) -> "SeasonDataset":
        return SeasonDataset(self.season, self.games, self.teams, frozenset(f4))


@dataclass(frozen=True)
class Prediction:
    season: int
    round: int
    home_team: str
    away_team: str
    predicted: Label
    probability_home: float

    def __post_init__(self):
        if not 0.0 <= self.probability_home <= 1.0:
            raise ValueError(f"probability out of range: {self.probability_home}")

    @property
    def key(self) -> GameKey:
        return (self.season, self.round, self.home_team, self.away_team)


def label_from_probability(p_home: float) -> Label:
    # ties go to the home side
    return Label.HOME_WIN if p_home >= 0.5 else Label.AWAY_WIN
