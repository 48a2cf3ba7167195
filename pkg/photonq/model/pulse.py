"""Single-photon wavepacket profiles, continuous and discretized.

Pulse classes (selected by `kind` in JSON):
- `ExponentialPulse` sqrt(omega) exp(-omega t / 2)
- `GaussianPulse` Gaussian intensity centred at `center`, truncated to t >= 0
- `FlatPulse` constant amplitude on [0, duration]
- `TablePulse` linear interpolation of tabulated complex samples

All profiles are normalized so that the integral of |xi(t)|^2 over [0, inf) is one.
"""

from typing import Annotated, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    field_validator,
    model_validator,
)
from scipy.special import erfc, erfcinv

from ..numerics import integrate_1d
from ..utils import ModelConfigurationError
from ..utils._const import PULSE_NORM_TOL, PULSE_TAIL_EPS

__all__ = (
    "Pulse",
    "ExponentialPulse",
    "GaussianPulse",
    "FlatPulse",
    "TablePulse",
    "PulseSpec",
    "DiscretePulse",
    "discretize_pulse",
    "check_normalization",
)


class Pulse(BaseModel):
    """Base class of normalized wavepacket profiles xi(t), zero for t < 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    def amplitude(self, t):
        """Complex amplitude xi(t), vectorized over `t`."""
        raise NotImplementedError()

    def tail(self, t):
        """Remaining norm: integral of |xi|^2 over [t, inf)."""
        raise NotImplementedError()

    @property
    def horizon(self) -> float:
        """Time beyond which the remaining norm is below 1e-12."""
        raise NotImplementedError()

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Times at which the profile (or its derivative) is discontinuous."""
        return (0.0,)

    def __call__(self, t):  # noqa
        return self.amplitude(t)

    def intensity(self, t):
        """|xi(t)|^2."""
        return np.abs(self.amplitude(t)) ** 2

    def first_moment(self) -> float:
        """Mean arrival time of the free photon, the integral of t |xi(t)|^2."""
        value = integrate_1d(
            lambda t: float(t * self.intensity(t)),
            0.0,
            self.horizon,
            points=self.breakpoints,
        )
        return float(value.real)

    def scaled(self, rate: float) -> "Pulse":
        """The same pulse with time measured in units of 1/`rate`."""
        raise NotImplementedError()


class ExponentialPulse(Pulse):
    """Decaying exponential profile sqrt(omega) exp(-omega t / 2)."""

    kind: Literal["exponential"] = "exponential"
    omega: float

    @field_validator("omega")
    @classmethod
    def _validate_omega(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"omega must be positive, got {value}")
        return value

    def amplitude(self, t):  # noqa
        t = np.asarray(t, dtype=float)
        value = np.sqrt(self.omega) * np.exp(-0.5 * self.omega * np.maximum(t, 0.0))
        return np.where(t >= 0, value, 0.0) + 0j

    def tail(self, t):  # noqa
        return np.exp(-self.omega * np.maximum(np.asarray(t, dtype=float), 0.0))

    @property
    def horizon(self) -> float:  # noqa
        return -np.log(PULSE_TAIL_EPS) / self.omega

    def first_moment(self) -> float:  # noqa
        return 1.0 / self.omega

    def scaled(self, rate: float) -> "ExponentialPulse":  # noqa
        return ExponentialPulse(omega=self.omega / rate)


class GaussianPulse(Pulse):
    """Gaussian intensity exp(-(t - center)^2 / (2 width^2)) restricted to t >= 0."""

    kind: Literal["gaussian"] = "gaussian"
    center: float
    width: float
    _norm: float = PrivateAttr(default=1.0)

    @field_validator("width")
    @classmethod
    def _validate_width(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"width must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _validate_norm(self) -> "GaussianPulse":
        norm = self._half_line_integral(0.0)
        if not norm > 1e-300:
            raise ValueError("pulse has no weight on t >= 0")
        self._norm = float(norm)
        return self

    def _half_line_integral(self, t):
        x = (np.asarray(t, dtype=float) - self.center) / (self.width * np.sqrt(2.0))
        return self.width * np.sqrt(np.pi / 2.0) * erfc(x)

    def amplitude(self, t):  # noqa
        t = np.asarray(t, dtype=float)
        value = np.exp(-((t - self.center) ** 2) / (4.0 * self.width**2))
        return np.where(t >= 0, value / np.sqrt(self._norm), 0.0) + 0j

    def tail(self, t):  # noqa
        t = np.maximum(np.asarray(t, dtype=float), 0.0)
        return np.clip(self._half_line_integral(t) / self._norm, 0.0, 1.0)

    @property
    def horizon(self) -> float:  # noqa
        x = erfcinv(PULSE_TAIL_EPS * self._norm / (self.width * np.sqrt(np.pi / 2.0)))
        return float(max(self.center + self.width * np.sqrt(2.0) * x, 0.0))

    def scaled(self, rate: float) -> "GaussianPulse":  # noqa
        return GaussianPulse(center=self.center * rate, width=self.width * rate)


class FlatPulse(Pulse):
    """Constant amplitude 1/sqrt(duration) on [0, duration]."""

    kind: Literal["flat"] = "flat"
    duration: float

    @field_validator("duration")
    @classmethod
    def _validate_duration(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"duration must be positive, got {value}")
        return value

    def amplitude(self, t):  # noqa
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t <= self.duration)
        return np.where(inside, 1.0 / np.sqrt(self.duration), 0.0) + 0j

    def tail(self, t):  # noqa
        t = np.asarray(t, dtype=float)
        return np.clip((self.duration - t) / self.duration, 0.0, 1.0)

    @property
    def horizon(self) -> float:  # noqa
        return self.duration

    @property
    def breakpoints(self) -> tuple[float, ...]:  # noqa
        return (0.0, self.duration)

    def first_moment(self) -> float:  # noqa
        return self.duration / 2.0

    def scaled(self, rate: float) -> "FlatPulse":  # noqa
        return FlatPulse(duration=self.duration * rate)


class TablePulse(Pulse):
    """Piecewise linear interpolation of tabulated amplitudes, renormalized on construction.

    `values` holds [re, im] pairs, one per entry of `times`.
    """

    kind: Literal["table"] = "table"
    times: tuple[float, ...]
    values: tuple[tuple[float, float], ...]
    _norm: float = PrivateAttr(default=1.0)
    _cumulative: tuple[float, ...] = PrivateAttr(default=())

    @model_validator(mode="after")
    def _validate_table(self) -> "TablePulse":
        times = np.asarray(self.times, dtype=float)
        if len(times) < 2 or len(times) != len(self.values):
            raise ValueError("table pulse needs at least two times and one value per time")
        if times[0] < 0 or np.any(np.diff(times) <= 0):
            raise ValueError("table times must be nonnegative and strictly increasing")
        segments = self._segment_integrals(self._samples())
        norm = float(np.sum(segments))
        if not norm > 0:
            raise ValueError("table pulse is identically zero")
        self._norm = norm
        self._cumulative = tuple(float(x) for x in np.concatenate([[0.0], np.cumsum(segments)]))
        return self

    def _samples(self) -> np.ndarray:
        values = np.asarray(self.values, dtype=float)
        return values[:, 0] + 1j * values[:, 1]

    def _segment_integrals(self, samples: np.ndarray) -> np.ndarray:
        # exact integral of |linear interpolant|^2 on each segment
        a, b = samples[:-1], samples[1:]
        h = np.diff(np.asarray(self.times, dtype=float))
        return h * (np.abs(a) ** 2 + np.abs(b) ** 2 + np.real(a * b.conj())) / 3.0

    def amplitude(self, t):  # noqa
        t = np.asarray(t, dtype=float)
        samples = self._samples() / np.sqrt(self._norm)
        re = np.interp(t, self.times, samples.real, left=0.0, right=0.0)
        im = np.interp(t, self.times, samples.imag, left=0.0, right=0.0)
        return re + 1j * im

    def tail(self, t):  # noqa
        times = np.asarray(self.times, dtype=float)
        samples = self._samples()
        t = np.clip(np.asarray(t, dtype=float), times[0], times[-1])
        k = np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(times) - 2)
        h = times[k + 1] - times[k]
        u = (t - times[k]) / h
        a, d = samples[k], samples[k + 1] - samples[k]
        # integral of |a + d s|^2 for s in [0, u]
        partial = h * (
            np.abs(a) ** 2 * u + np.real(a.conj() * d) * u**2 + np.abs(d) ** 2 * u**3 / 3.0
        )
        done = np.asarray(self._cumulative)[k] + partial
        return np.clip((self._norm - done) / self._norm, 0.0, 1.0)

    @property
    def horizon(self) -> float:  # noqa
        return float(self.times[-1])

    @property
    def breakpoints(self) -> tuple[float, ...]:  # noqa
        return (float(self.times[0]), float(self.times[-1]))

    def scaled(self, rate: float) -> "TablePulse":  # noqa
        return TablePulse(times=tuple(t * rate for t in self.times), values=self.values)


PulseSpec = Annotated[
    ExponentialPulse | GaussianPulse | FlatPulse | TablePulse,
    Field(discriminator="kind"),
]


class DiscretePulse(BaseModel):
    """Samples xi_k of a pulse on the grid k * step, normalized so that sum |xi_k|^2 step = 1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    samples: np.ndarray
    step: float
    normalization: float = 1.0

    @field_validator("samples", mode="before")
    @classmethod
    def _validate_samples(cls, value) -> np.ndarray:
        samples = np.array(value, dtype=complex).reshape(-1)
        if samples.size == 0:
            raise ValueError("a discrete pulse needs at least one sample")
        samples.setflags(write=False)
        return samples

    @field_validator("step")
    @classmethod
    def _validate_step(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"step must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _validate_norm(self) -> "DiscretePulse":
        total = float(np.sum(np.abs(self.samples) ** 2) * self.step)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"discrete pulse is not normalized (sum {total})")
        return self

    @classmethod
    def from_samples(cls, samples, step: float) -> "DiscretePulse":
        """Renormalize raw samples into a `DiscretePulse`.

        Raises:
            ModelConfigurationError: if all samples vanish or `step` is not positive.
        """
        samples = np.array(samples, dtype=complex).reshape(-1)
        if not step > 0:
            raise ModelConfigurationError(f"step must be positive, got {step}")
        total = float(np.sum(np.abs(samples) ** 2) * step)
        if not total > 0:
            raise ModelConfigurationError("cannot normalize a pulse whose samples all vanish")
        scale = 1.0 / np.sqrt(total)
        try:
            return cls(samples=samples * scale, step=step, normalization=scale)
        except ValidationError as e:
            raise ModelConfigurationError(f"invalid discrete pulse: {e}") from e

    @property
    def n_steps(self) -> int:  # noqa
        return self.samples.shape[0]

    def times(self) -> np.ndarray:
        """Sample times k * step."""
        return np.arange(self.n_steps) * self.step

    def tails(self) -> np.ndarray:
        """Remaining weights sum_{k >= j} |xi_k|^2 step for j = 0..N (length N + 1)."""
        weights = np.abs(self.samples) ** 2 * self.step
        tails = np.concatenate([np.cumsum(weights[::-1])[::-1], [0.0]])
        return np.clip(tails, 0.0, 1.0)


def discretize_pulse(pulse: Pulse, N: int, T: float) -> DiscretePulse:
    """Sample a pulse at k * T / N, k = 0..N-1, and renormalize the samples.

    Args:
        pulse (Pulse): continuous profile.
        N (int): number of samples.
        T (float): covered time span.

    Raises:
        ModelConfigurationError: on invalid `N`, `T` or vanishing samples.

    Returns:
        DiscretePulse: the normalized samples, `normalization` holds the applied factor.
    """
    if N < 1 or not T > 0:
        raise ModelConfigurationError(f"need N >= 1 and T > 0, got N={N}, T={T}")
    step = T / N
    return DiscretePulse.from_samples(pulse.amplitude(np.arange(N) * step), step)


def check_normalization(pulse: Pulse) -> float:
    """Numerically verify the normalization of a pulse.

    Raises:
        ModelConfigurationError: if the norm deviates from 1 by more than 1e-10.

    Returns:
        float: the computed norm.
    """
    inside = integrate_1d(
        lambda t: float(pulse.intensity(t)),
        0.0,
        pulse.horizon,
        points=pulse.breakpoints,
    )
    norm = inside.real + float(pulse.tail(pulse.horizon))
    if abs(norm - 1.0) > PULSE_NORM_TOL:
        raise ModelConfigurationError(f"pulse is not normalized (norm {norm})")
    return norm
