"""Readers, writers and validation for the three canonical CSV inputs.

results.csv   season,round,date,home_team,away_team,home_score,away_score
f4.csv        season,team          (teams reaching that season's final four)
crowd.csv     season,round,home_team,away_team,player_id,prediction
"""
from __future__ import annotations

import csv
import datetime as dt
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .domain import GameRecord, InvalidRecordError, Label, SeasonDataset

RESULTS_HEADER = ["season", "round", "date", "home_team", "away_team", "home_score", "away_score"]
F4_HEADER = ["season", "team"]
CROWD_HEADER = ["season", "round", "home_team", "away_team", "player_id", "prediction"]


class IngestError(ValueError):
    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = f"{path}:{line}: " if path is not None and line is not None else (
            f"line {line}: " if line is not None else "")
        super().__init__(where + message)


class IngestWarning(UserWarning):
    pass


def _read_rows(path, header: list[str]):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            return []
        if [c.strip() for c in first] != header:
            raise IngestError(f"bad header {first!r}, expected {','.join(header)}", 1, path)
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise IngestError(f"expected {len(header)} fields, got {len(row)}",
                                  reader.line_num, path)
            rows.append((reader.line_num, [c.strip() for c in row]))
        return rows


def _int(value: str, name: str, line: int, path) -> int:
    try:
        return int(value)
    except ValueError:
        raise IngestError(f"{name} is not an integer: {value!r}", line, path) from None


def parse_results(path) -> dict[int, SeasonDataset]:
    """Parse a results file into one SeasonDataset per season label."""
    by_season: dict[int, list[GameRecord]] = defaultdict(list)
    seen: dict[tuple, int] = {}
    for line, row in _read_rows(path, RESULTS_HEADER):
        season = _int(row[0], "season", line, path)
        rnd = _int(row[1], "round", line, path)
        try:
            date = dt.date.fromisoformat(row[2])
        except ValueError:
            raise IngestError(f"date is not ISO-8601: {row[2]!r}", line, path) from None
        hs = _int(row[5], "home_score", line, path)
        as_ = _int(row[6], "away_score", line, path)
        try:
            g = GameRecord(season, rnd, date, row[3], row[4], hs, as_)
        except InvalidRecordError as e:
            raise IngestError(str(e), line, path) from None
        if g.key in seen:
            raise IngestError(f"duplicate game {g.key} (first at line {seen[g.key]})", line, path)
        seen[g.key] = line
        by_season[season].append(g)
    if not by_season:
        warnings.warn(f"{path}: no games", IngestWarning, stacklevel=2)
    return {s: SeasonDataset(s, tuple(games)) for s, games in sorted(by_season.items())}


def write_results(datasets: dict[int, SeasonDataset], path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        for season in sorted(datasets):
            for g in datasets[season].games:
                w.writerow([g.season, g.round, g.date.isoformat(), g.home_team,
                            g.away_team, g.home_score, g.away_score])


@dataclass
class F4Metadata:
    by_season: dict[int, frozenset[str]] = field(default_factory=dict)

    def lookup(self, season: int) -> frozenset[str]:
        if season not in self.by_season:
            warnings.warn(f"no final-four metadata for season {season}", IngestWarning,
                          stacklevel=2)
            return frozenset()
        return self.by_season[season]

    def __getitem__(self, season):
        return self.by_season[season]

    def __contains__(self, season):
        return season in self.by_season


def parse_f4_metadata(path, results: dict[int, SeasonDataset] | None = None) -> F4Metadata:
    """Read `season,team` rows. Wrong team counts and unknown names only warn."""
    teams: dict[int, set[str]] = defaultdict(set)
    for line, row in _read_rows(path, F4_HEADER):
        teams[_int(row[0], "season", line, path)].add(row[1])
    for season, names in sorted(teams.items()):
        if len(names) != 4:
            warnings.warn(f"season {season}: expected 4 final-four teams, got {len(names)}",
                          IngestWarning, stacklevel=2)
        if results is not None:
            known = set().union(*(d.teams for d in results.values())) if results else set()
            unknown = sorted(names - known)
            if unknown:
                warnings.warn(f"season {season}: unknown final-four teams {unknown}",
                              IngestWarning, stacklevel=2)
    return F4Metadata({s: frozenset(v) for s, v in sorted(teams.items())})


def attach_f4(datasets: dict[int, SeasonDataset], f4: F4Metadata | None) -> dict[int, SeasonDataset]:
    """Set each season's f4_prev from the previous season's final four."""
    out = {}
    for season, d in datasets.items():
        if f4 is None:
            out[season] = d
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IngestWarning)
            prev = f4.lookup(season - 1)
        if not prev:
            warnings.warn(f"season {season}: no final-four metadata for {season - 1}; "
                          "F4 flags set to 0", IngestWarning, stacklevel=2)
        out[season] = d.with_f4(prev)
    return out


@dataclass(frozen=True)
class CrowdVote:
    season: int
    round: int
    home_team: str
    away_team: str
    player_id: str
    prediction: Label

    @property
    def game_key(self):
        return (self.season, self.round, self.home_team, self.away_team)


def parse_crowd(path) -> list[CrowdVote]:
    votes: dict[tuple, CrowdVote] = {}
    for line, row in _read_rows(path, CROWD_HEADER):
        season = _int(row[0], "season", line, path)
        rnd = _int(row[1], "round", line, path)
        pred = row[5]
        if pred not in ("1", "2"):
            raise IngestError(f"prediction must be 1 or 2, got {pred!r}", line, path)
        v = CrowdVote(season, rnd, row[2], row[3], row[4], Label(int(pred)))
        k = (v.game_key, v.player_id)
        if k in votes:
            warnings.warn(f"line {line}: duplicate vote by {v.player_id} for {v.game_key}; "
                          "keeping last", IngestWarning, stacklevel=2)
            del votes[k]  # keep insertion order of the surviving row
        votes[k] = v
    return list(votes.values())


def write_crowd(votes, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CROWD_HEADER)
        for v in votes:
            w.writerow([v.season, v.round, v.home_team, v.away_team, v.player_id, int(v.prediction)])


def write_f4(f4: F4Metadata, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(F4_HEADER)
        for season, teams in sorted(f4.by_season.items()):
            for t in sorted(teams):
                w.writerow([season, t])


@dataclass
class ValidationReport:
    errors: list[tuple[int | None, str]] = field(default_factory=list)
    warnings: list[tuple[int | None, str]] = field(default_factory=list)
    is_complete_season: dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def lines(self) -> list[str]:
        out = []
        for kind, items in (("ERROR", self.errors), ("WARNING", self.warnings)):
            for line, msg in items:
                out.append(f"{kind}: " + (f"line {line}: " if line else "") + msg)
        for season, complete in sorted(self.is_complete_season.items()):
            out.append(f"season {season}: {'complete' if complete else 'incomplete'}")
        return out


def validate(datasets: dict[int, SeasonDataset]) -> ValidationReport:
    """Check per-round completeness, round contiguity and team consistency."""
    rep = ValidationReport()
    for season, d in sorted(datasets.items()):
        teams = d.teams
        n = len(teams)
        expected_rounds = 2 * (n - 1)
        per_round: dict[int, Counter] = defaultdict(Counter)
        for g in d.games:
            per_round[g.round][g.home_team] += 1
            per_round[g.round][g.away_team] += 1
        complete = True
        for r, counts in sorted(per_round.items()):
            doubles = sorted(t for t, c in counts.items() if c > 1)
            if doubles:
                rep.errors.append((None, f"season {season} round {r}: teams appear more than once: {doubles}"))
                complete = False
            missing = sorted(teams - set(counts))
            if missing:
                rep.warnings.append((None, f"season {season} round {r}: teams without a game: {missing}"))
                complete = False
            if r > expected_rounds:
                rep.errors.append((None, f"season {season}: round {r} exceeds {expected_rounds} rounds "
                                         f"for {n} teams"))
        present = set(per_round)
        gaps = [r for r in range(1, max(present, default=0) + 1) if r not in present]
        if gaps or len(present) != expected_rounds:
            complete = False
            rep.warnings.append((None, f"season {season}: incomplete season (missing rounds "
                                       f"{[r for r in range(1, expected_rounds + 1) if r not in present]})"))
        rep.is_complete_season[season] = complete
    return rep
