"""Detection records: time ordered counts at the right and left detectors."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..utils import ModelConfigurationError

__all__ = ("Side", "CountEvent", "DetectionRecord", "make_record", "pattern_of")


class Side(str, Enum):
    """Detector that registered a count. `BOTH` marks simultaneous counts in one time step."""

    RIGHT = "R"
    LEFT = "L"
    BOTH = "B"


class CountEvent(BaseModel):  # noqa
    model_config = ConfigDict(frozen=True)

    time: float
    side: Side


class DetectionRecord(BaseModel):
    """Counts registered on [0, horizon], strictly ordered in time."""

    model_config = ConfigDict(frozen=True)

    events: tuple[CountEvent, ...] = ()
    horizon: float

    @model_validator(mode="after")
    def _validate_order(self) -> "DetectionRecord":
        previous = 0.0
        for event in self.events:
            if not event.time > previous:
                raise ValueError(
                    f"count times must be positive and strictly increasing: {self.times}"
                )
            previous = event.time
        if previous > self.horizon:
            raise ValueError(f"count at {previous} lies beyond the horizon {self.horizon}")
        return self

    @property
    def n_counts(self) -> int:  # noqa
        return len(self.events)

    @property
    def times(self) -> tuple[float, ...]:  # noqa
        return tuple(event.time for event in self.events)

    @property
    def sides(self) -> tuple[Side, ...]:  # noqa
        return tuple(event.side for event in self.events)

    @property
    def pattern(self) -> str:
        """Side pattern written latest count first, e.g. "LR" for R followed by L."""
        return pattern_of(self.sides)


def pattern_of(sides) -> str:
    """Pattern label of a chronological sequence of sides ("none" when empty)."""
    if len(sides) == 0:
        return "none"
    return "".join(Side(side).value for side in reversed(tuple(sides)))


def make_record(events, horizon: float) -> DetectionRecord:
    """Build a record from chronological (time, side) pairs.

    Args:
        events: iterable of (time, side) with side one of "R", "L" (or "B").
        horizon (float): end of the observation window.

    Raises:
        ModelConfigurationError: if the counts are not strictly increasing in (0, horizon].

    Returns:
        DetectionRecord: the record.
    """
    try:
        return DetectionRecord(
            events=tuple(CountEvent(time=t, side=side) for t, side in events),
            horizon=horizon,
        )
    except ValidationError as e:
        raise ModelConfigurationError(f"invalid detection record: {e}") from e
