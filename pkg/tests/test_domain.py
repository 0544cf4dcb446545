import datetime as dt

import pytest
from hypothesis import given, strategies as st

from eurohoops.domain import (GameRecord, InvalidRecordError, Label, Prediction, derive_label,
                              label_from_probability)

D = dt.date(2018, 10, 11)


def game(h, a):
    return GameRecord(2019, 1, D, "TeamA", "TeamB", h, a)


def test_derive_label():
    assert derive_label(game(80, 77)) == Label.HOME_WIN
    assert derive_label(game(77, 80)) == Label.AWAY_WIN


def test_tie_is_invalid():
    with pytest.raises(InvalidRecordError):
        game(80, 80)


def test_self_play_is_invalid():
    with pytest.raises(InvalidRecordError):
        GameRecord(2019, 1, D, "TeamA", "TeamA", 80, 70)


@given(st.integers(0, 200), st.integers(0, 200))
def test_label_total(h, a):
    if h == a:
        return
    assert derive_label(game(h, a)) in (Label.HOME_WIN, Label.AWAY_WIN)
    assert (derive_label(game(h, a)) == Label.HOME_WIN) == (h > a)


def test_probability_tie_goes_home():
    assert label_from_probability(0.5) == Label.HOME_WIN
    assert label_from_probability(0.4999) == Label.AWAY_WIN


def test_prediction_range():
    with pytest.raises(ValueError):
        Prediction(2019, 2, "A", "B", Label.HOME_WIN, 1.5)
