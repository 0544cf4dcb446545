import random

import pytest

from eurohoops.domain import Label
from eurohoops.ingestion import (IngestError, IngestWarning, attach_f4, parse_crowd,
                                 parse_f4_metadata, parse_results, validate, write_results)
from eurohoops.synth import generate_season

HEADER = "season,round,date,home_team,away_team,home_score,away_score\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_single_row(tmp_path):
    ds = parse_results(write(tmp_path, "r.csv", HEADER + "2019,1,2018-10-11,TeamA,TeamB,95,70\n"))
    assert list(ds) == [2019]
    (g,) = ds[2019].games
    assert g.label == Label.HOME_WIN


def test_header_only_warns(tmp_path):
    with pytest.warns(IngestWarning, match="no games"):
        assert parse_results(write(tmp_path, "r.csv", HEADER)) == {}


def test_full_season_is_complete(tmp_path):
    season = generate_season(16, 2019, seed=4)
    write_results({2019: season}, tmp_path / "r.csv")
    ds = parse_results(tmp_path / "r.csv")
    assert len(ds[2019].games) == 240
    assert validate(ds).is_complete_season == {2019: True}
    assert validate(ds).ok


@pytest.mark.parametrize("row,msg", [
    ("2019,1,2018-10-11,TeamA,TeamB,80,80", "tie"),
    ("2019,x,2018-10-11,TeamA,TeamB,80,70", "round"),
    ("2019,1,11/10/2018,TeamA,TeamB,80,70", "ISO"),
    ("2019,1,2018-10-11,TeamA,TeamB,80", "fields"),
])
def test_malformed_rows_report_line(tmp_path, row, msg):
    p = write(tmp_path, "r.csv", HEADER + "2019,1,2018-10-11,TeamC,TeamD,70,60\n" + row + "\n")
    with pytest.raises(IngestError, match=msg) as ei:
        parse_results(p)
    assert ei.value.line == 3


def test_duplicate_game(tmp_path):
    row = "2019,1,2018-10-11,TeamA,TeamB,95,70\n"
    with pytest.raises(IngestError, match="duplicate"):
        parse_results(write(tmp_path, "r.csv", HEADER + row + row))


def test_round_trip_and_order_insensitive(tmp_path):
    league = {s: generate_season(8, s, seed=1) for s in (2018, 2019)}
    write_results(league, tmp_path / "a.csv")
    parsed = parse_results(tmp_path / "a.csv")
    assert {s: d.games for s, d in parsed.items()} == {s: d.games for s, d in league.items()}
    lines = (tmp_path / "a.csv").read_text().splitlines()
    body = lines[1:]
    random.Random(7).shuffle(body)
    (tmp_path / "b.csv").write_text("\n".join([lines[0], *body]) + "\n")
    shuffled = parse_results(tmp_path / "b.csv")
    assert {s: d.games for s, d in shuffled.items()} == {s: d.games for s, d in parsed.items()}


def test_f4_metadata(tmp_path):
    p = write(tmp_path, "f4.csv", "season,team\n" + "".join(f"2018,T{i}\n" for i in range(4)))
    f4 = parse_f4_metadata(p)
    assert f4[2018] == {"T0", "T1", "T2", "T3"}
    with pytest.warns(IngestWarning, match="no final-four"):
        assert f4.lookup(2017) == frozenset()


def test_f4_wrong_count_warns(tmp_path):
    p = write(tmp_path, "f4.csv", "season,team\n" + "".join(f"2018,T{i}\n" for i in range(5)))
    with pytest.warns(IngestWarning, match="expected 4"):
        f4 = parse_f4_metadata(p)
    assert len(f4[2018]) == 5


def test_f4_unknown_team_warns(tmp_path):
    season = generate_season(4, 2019, seed=0)
    p = write(tmp_path, "f4.csv", "season,team\n2018,Team00\n2018,Team01\n2018,Team02\n2018,Nobody\n")
    with pytest.warns(IngestWarning, match="unknown"):
        parse_f4_metadata(p, {2019: season})


def test_attach_f4_uses_previous_season(tmp_path):
    season = generate_season(4, 2019, seed=0, f4_prev=set())
    p = write(tmp_path, "f4.csv", "season,team\n" + "".join(f"2018,Team0{i}\n" for i in range(4)))
    out = attach_f4({2019: season}, parse_f4_metadata(p))
    assert out[2019].f4_prev == {"Team00", "Team01", "Team02", "Team03"}


CROWD = "season,round,home_team,away_team,player_id,prediction\n"


def test_crowd_rows(tmp_path):
    votes = parse_crowd(write(tmp_path, "c.csv", CROWD + "2019,2,TeamA,TeamB,player7,1\n"))
    assert len(votes) == 1 and votes[0].prediction == Label.HOME_WIN
    assert votes[0].game_key == (2019, 2, "TeamA", "TeamB")


def test_crowd_duplicate_keeps_last(tmp_path):
    text = CROWD + "2019,2,TeamA,TeamB,p1,1\n2019,2,TeamA,TeamB,p1,2\n"
    with pytest.warns(IngestWarning, match="duplicate"):
        votes = parse_crowd(write(tmp_path, "c.csv", text))
    assert [v.prediction for v in votes] == [Label.AWAY_WIN]


def test_crowd_bad_prediction(tmp_path):
    with pytest.raises(IngestError, match="1 or 2") as ei:
        parse_crowd(write(tmp_path, "c.csv", CROWD + "2019,2,TeamA,TeamB,p1,3\n"))
    assert ei.value.line == 2


def test_validate_team_twice_in_round():
    season = generate_season(4, 2019, seed=0)
    games = list(season.games)
    r7 = [g for g in games if g.round == 5]
    g0 = r7[0]
    # replace the other game of round 5 with a second game for g0's home team
    other = r7[1]
    from eurohoops.domain import GameRecord, SeasonDataset
    bad = GameRecord(2019, 5, other.date, g0.home_team, other.away_team, 80, 70)
    games[games.index(other)] = bad
    rep = validate({2019: SeasonDataset(2019, tuple(games), season.teams)})
    assert not rep.ok
    assert any("more than once" in m for _, m in rep.errors)


def test_validate_missing_round_warns():
    season = generate_season(16, 2019, seed=0)
    from eurohoops.domain import SeasonDataset
    trimmed = SeasonDataset(2019, tuple(g for g in season.games if g.round != 13), season.teams)
    rep = validate({2019: trimmed})
    assert rep.ok
    assert rep.is_complete_season[2019] is False
    assert any("incomplete season" in m for _, m in rep.warnings)
