"""Synthetic double round-robin seasons for tests, demos and benchmarks."""
from __future__ import annotations

import datetime as dt

import numpy as np

from .domain import GameRecord, SeasonDataset


def round_robin(teams: list[str]) -> list[list[tuple[str, str]]]:
    """Circle-method double round robin: 2(n-1) rounds, home/away mirrored."""
    teams = list(teams)
    if len(teams) % 2:
        raise ValueError("need an even number of teams")
    n = len(teams)
    rot = teams[1:]
    first = []
    for r in range(n - 1):
        line = [teams[0]] + rot
        pairs = []
        for i in range(n // 2):
            a, b = line[i], line[n - 1 - i]
            pairs.append((a, b) if (r + i) % 2 == 0 else (b, a))
        first.append(pairs)
        rot = rot[-1:] + rot[:-1]
    second = [[(b, a) for a, b in rnd] for rnd in first]
    return first + second


def generate_season(n_teams: int = 16, season: int = 2019, seed: int = 0,
                    home_advantage: float = 3.5, spread: float = 6.0,
                    f4_prev: set[str] | None = None) -> SeasonDataset:
    rng = np.random.default_rng([seed, season, n_teams])
    teams = [f"Team{i:02d}" for i in range(n_teams)]
    strength = dict(zip(teams, rng.normal(0.0, spread, n_teams)))
    start = dt.date(season - 1, 10, 1)
    games = []
    for r, pairs in enumerate(round_robin(teams), start=1):
        day = start + dt.timedelta(days=7 * (r - 1))
        for k, (h, a) in enumerate(pairs):
            base = 79.0 + rng.normal(0, 4)
            margin = strength[h] - strength[a] + home_advantage + rng.normal(0, 11)
            hs = int(round(base + margin / 2))
            as_ = int(round(base - margin / 2))
            while hs == as_:  # overtime
                hs += int(rng.integers(0, 12))
                as_ += int(rng.integers(0, 12))
            games.append(GameRecord(season, r, day + dt.timedelta(days=k % 2), h, a, hs, as_))
    if f4_prev is None:
        f4_prev = set(sorted(teams, key=lambda t: -strength[t])[:4])
    return SeasonDataset(season, tuple(games), frozenset(teams), frozenset(f4_prev))


def generate_league(seasons=(2017, 2018, 2019), n_teams: int = 16, seed: int = 0):
    return {s: generate_season(n_teams, s, seed) for s in seasons}


def generate_crowd(datasets, season: int, n_players: int = 41, skill: float = 0.62,
                   difficulty: float = 0.25, seed: int = 0):
    """Votes with a shared per-game hit rate drawn around ``skill``.

    Shared difficulty keeps the majority from being right on every game.
    """
    from .ingestion import CrowdVote
    from .domain import Label

    rng = np.random.default_rng([seed, season, n_players])
    votes = []
    for g in datasets[season].games:
        hit = float(np.clip(rng.normal(skill, difficulty), 0.0, 1.0))
        for p in range(n_players):
            right = rng.random() < hit
            label = g.label if right else Label(3 - int(g.label))
            votes.append(CrowdVote(season, g.round, g.home_team, g.away_team, f"player{p:02d}", label))
    return votes


def write_demo(out_dir, seed: int = 0) -> dict:
    """Write results.csv, f4.csv and crowd.csv for a three-season synthetic league."""
    from pathlib import Path

    from .ingestion import F4Metadata, write_crowd, write_f4, write_results

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    league = generate_league(seed=seed)
    f4 = {s - 1: d.f4_prev for s, d in league.items()}
    paths = {"results": out / "results.csv", "f4": out / "f4.csv", "crowd": out / "crowd.csv"}
    write_results(league, paths["results"])
    write_f4(F4Metadata(f4), paths["f4"])
    write_crowd(generate_crowd(league, max(league), seed=seed), paths["crowd"])
    return paths


if __name__ == "__main__":
    import sys

    for name, path in write_demo(sys.argv[1] if len(sys.argv) > 1 else "demo_data").items():
        print(f"{name}: {path}")
