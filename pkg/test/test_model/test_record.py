"""Tests for detection records and side patterns."""

import pytest

from photonq.model import Side, make_record, pattern_of
from photonq.utils import ModelConfigurationError


def test_record_properties():  # noqa
    record = make_record([(0.5, "R"), (1.5, "L")], 2.0)
    assert record.n_counts == 2
    assert record.times == (0.5, 1.5)
    assert record.sides == (Side.RIGHT, Side.LEFT)
    # latest count first
    assert record.pattern == "LR"


def test_pattern_of():  # noqa
    assert pattern_of(()) == "none"
    assert pattern_of(["L"]) == "L"
    assert pattern_of([Side.LEFT, Side.RIGHT]) == "RL"
    assert pattern_of(["R", "R"]) == "RR"


@pytest.mark.parametrize(
    "events, horizon",
    [
        ([(1.0, "R"), (1.0, "L")], 2.0),
        ([(1.5, "R"), (1.0, "L")], 2.0),
        ([(0.0, "R")], 2.0),
        ([(3.0, "R")], 2.0),
        ([(1.0, "X")], 2.0),
    ],
)
def test_invalid_records(events, horizon):  # noqa
    with pytest.raises(ModelConfigurationError):
        make_record(events, horizon)
