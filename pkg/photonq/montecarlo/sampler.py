"""Monte Carlo sampling of discrete detection records.

Every sample owns a counter based random stream derived from (seed, sample index), so a
sample does not depend on how the indices are split into chunks or scheduled on workers.
Instead of one uniform per collision, a sample draws a threshold for the waiting time of
its next count: the count happens at the first step where the accumulated log probability
of seeing nothing drops below log(u). A second uniform picks the side of the count. This
is equivalent in distribution to drawing every collision outcome.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..collision import DiscreteOutcome, collision_blocks, step_matrix
from ..model import (
    DensityMatrix,
    DetectionRecord,
    DiscretePulse,
    Side,
    SystemModel,
    make_record,
    pattern_of,
    pure_components,
)
from ..utils import LOGGER, ModelConfigurationError, NumericalError, parallel_map

__all__ = (
    "SamplerConfig",
    "SampleBatch",
    "PatternEstimate",
    "MonteCarloEstimate",
    "sample_record",
    "sample_records",
    "estimate",
    "records_to_dataframe",
    "ESTIMATED_PATTERNS",
)

ESTIMATED_PATTERNS = ("none", "R", "L", "RR", "LR", "RL", "LL", "other")
_OUTCOMES = (
    DiscreteOutcome.NONE,
    DiscreteOutcome.RIGHT,
    DiscreteOutcome.LEFT,
    DiscreteOutcome.BOTH,
)
_SIDE_CODES = (Side.RIGHT, Side.LEFT, Side.BOTH)


class SamplerConfig(BaseModel):
    """Parameters of a Monte Carlo run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int
    n_samples: int = 100_000
    tau: float
    n_steps: int
    block_mode: Literal["exact", "first-order"] = "first-order"
    max_events: int = 4
    chunk_size: int = 8192

    @field_validator("seed")
    @classmethod
    def _validate_seed(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError(f"seed must be an unsigned 64 bit integer, got {value}")
        return value

    @field_validator("n_samples", "n_steps", "max_events", "chunk_size")
    @classmethod
    def _validate_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"expected a positive integer, got {value}")
        return value

    @field_validator("tau")
    @classmethod
    def _validate_tau(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"tau must be positive, got {value}")
        return value

    @property
    def horizon(self) -> float:  # noqa
        return self.n_steps * self.tau

    @classmethod
    def create(cls, **kwargs) -> "SamplerConfig":
        """Validated construction that reports problems as `ModelConfigurationError`."""
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise ModelConfigurationError(f"invalid sampler configuration: {e}") from e


@dataclass(frozen=True)
class SampleBatch:
    """Sampled records stored as arrays.

    `steps[i, :counts[i]]` are the (1-based) count steps of sample i and `sides` their side
    codes (0 = R, 1 = L, 2 = both). Samples with more than `max_events` counts keep their
    first `max_events` counts and are flagged in `truncated`.
    """

    indices: np.ndarray
    counts: np.ndarray
    steps: np.ndarray
    sides: np.ndarray
    truncated: np.ndarray
    tau: float
    horizon: float

    def __len__(self) -> int:  # noqa
        return self.indices.shape[0]

    def record(self, i: int) -> DetectionRecord:
        """The detection record of row `i`."""
        m = min(int(self.counts[i]), self.steps.shape[1])
        events = [
            (int(self.steps[i, k]) * self.tau, _SIDE_CODES[self.sides[i, k]]) for k in range(m)
        ]
        return make_record(events, self.horizon)

    def records(self) -> list[DetectionRecord]:  # noqa
        return [self.record(i) for i in range(len(self))]

    def patterns(self) -> list[str]:
        """Pattern label of every sample, `other` for three or more counts or simultaneous counts."""
        labels = []
        for i in range(len(self)):
            m = int(self.counts[i])
            codes = self.sides[i, : min(m, self.sides.shape[1])]
            if m > 2 or np.any(codes == 2):
                labels.append("other")
            else:
                labels.append(pattern_of([_SIDE_CODES[c] for c in codes]))
        return labels

    def count_times(self, k: int) -> np.ndarray:
        """Time of the k-th count (1-based) of the samples that have one."""
        mask = self.counts >= k
        return self.steps[mask, k - 1] * self.tau

    @classmethod
    def concatenate(cls, batches: list["SampleBatch"]) -> "SampleBatch":  # noqa
        first = batches[0]
        return cls(
            indices=np.concatenate([b.indices for b in batches]),
            counts=np.concatenate([b.counts for b in batches]),
            steps=np.concatenate([b.steps for b in batches]),
            sides=np.concatenate([b.sides for b in batches]),
            truncated=np.concatenate([b.truncated for b in batches]),
            tau=first.tau,
            horizon=first.horizon,
        )


class PatternEstimate(BaseModel):  # noqa
    model_config = ConfigDict(frozen=True)

    probability: float
    std_error: float


class MonteCarloEstimate(BaseModel):
    """Empirical pattern probabilities and mean count times with standard errors."""

    model_config = ConfigDict(frozen=True)

    n_samples: int
    patterns: dict[str, PatternEstimate]
    tau1: PatternEstimate | None = None
    tau2: PatternEstimate | None = None
    truncated: int = 0

    def to_dataframe(self) -> pd.DataFrame:
        """Table with columns `pattern`, `probability`, `std_error`."""
        return pd.DataFrame(
            [
                {"pattern": p, "probability": e.probability, "std_error": e.std_error}
                for p, e in self.patterns.items()
            ],
            columns=["pattern", "probability", "std_error"],
        )


def _uniforms(seed: int, indices: np.ndarray, n: int) -> np.ndarray:
    out = np.empty((indices.shape[0], n))
    for row, index in enumerate(indices):
        sequence = np.random.SeedSequence(seed, spawn_key=(int(index),))
        out[row] = np.random.Generator(np.random.Philox(sequence)).random(n)
    return out


def _step_maps(config: SamplerConfig, model: SystemModel, dpulse: DiscretePulse):
    blocks = collision_blocks(model, config.tau, config.block_mode)
    maps = np.empty((config.n_steps, 4, 2 * model.dim, 2 * model.dim), dtype=complex)
    for j in range(config.n_steps):
        xi = complex(dpulse.samples[j])
        for o, outcome in enumerate(_OUTCOMES):
            maps[j, o] = step_matrix(blocks, outcome, xi, config.tau)
    return maps


def _check(config: SamplerConfig, dpulse: DiscretePulse):
    if abs(dpulse.step - config.tau) > 1e-12 * config.tau:
        raise ModelConfigurationError(
            f"pulse step {dpulse.step} does not match the sampler step {config.tau}"
        )
    if dpulse.n_steps < config.n_steps:
        raise ModelConfigurationError(
            f"pulse has {dpulse.n_steps} samples, the sampler needs {config.n_steps}"
        )


def _sample_chunk(indices, config, maps, tails, components) -> SampleBatch:
    n = indices.shape[0]
    d = maps.shape[-1] // 2
    max_events = config.max_events
    n_uniforms = 1 + 2 * (max_events + 1)
    u = _uniforms(config.seed, indices, n_uniforms)

    weights = np.array([p for p, _ in components])
    choice = np.searchsorted(np.cumsum(weights) / np.sum(weights), u[:, 0], side="right")
    choice = np.minimum(choice, len(components) - 1)
    v = np.zeros((n, 2 * d), dtype=complex)
    v[:, :d] = np.stack([components[c][1] for c in choice])

    counts = np.zeros(n, dtype=np.int64)
    steps = np.zeros((n, max_events), dtype=np.int64)
    sides = np.zeros((n, max_events), dtype=np.int8)
    log_survival = np.zeros(n)
    threshold = np.log(u[:, 1])
    rows = np.arange(n)
    for j in range(config.n_steps):
        # candidate stacked vectors for the four readouts of this collision
        candidates = np.einsum("oij,nj->noi", maps[j], v)
        w = tails[j + 1] * np.sum(np.abs(candidates[..., :d]) ** 2, axis=-1)
        w += np.sum(np.abs(candidates[..., d:]) ** 2, axis=-1)
        total = np.sum(w, axis=1)
        if np.any(total <= 0):
            raise NumericalError(f"zero weight pair in step {j + 1}")
        p = w / total[:, None]
        with np.errstate(divide="ignore"):
            log_survival += np.log(p[:, 0])
        count = log_survival < threshold
        outcome = np.zeros(n, dtype=np.int64)
        if np.any(count):
            slot = np.minimum(counts[count], max_events)
            side_u = u[count, 2 + 2 * slot]
            count_p = p[count, 1:]
            cumulative = np.cumsum(count_p, axis=1) / np.sum(count_p, axis=1)[:, None]
            picked = np.minimum((cumulative < side_u[:, None]).sum(axis=1), 2)
            outcome[count] = 1 + picked
            recorded = count & (counts < max_events)
            steps[recorded, counts[recorded]] = j + 1
            sides[recorded, counts[recorded]] = outcome[recorded] - 1
            counts[count] += 1
            next_slot = np.minimum(counts[count], max_events)
            threshold[count] = np.log(u[count, 1 + 2 * next_slot])
            log_survival[count] = 0.0
        v = candidates[rows, outcome]
        norm = np.sqrt(total * p[rows, outcome])
        v /= norm[:, None]
    truncated = counts > max_events
    return SampleBatch(
        indices=indices,
        counts=counts,
        steps=steps,
        sides=sides,
        truncated=truncated,
        tau=config.tau,
        horizon=config.horizon,
    )


def sample_records(
    config: SamplerConfig,
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    indices: np.ndarray | None = None,
) -> SampleBatch:
    """Sample the records of the given sample indices (all `n_samples` by default).

    Raises:
        ModelConfigurationError: if the pulse does not match the configuration.
        NumericalError: if a pair loses all its weight.

    Returns:
        SampleBatch: the records in index order.
    """
    _check(config, dpulse)
    indices = np.arange(config.n_samples) if indices is None else np.asarray(indices)
    maps = _step_maps(config, model, dpulse)
    tails = dpulse.tails()
    components = pure_components(initial)
    chunks = [
        indices[start : start + config.chunk_size]
        for start in range(0, indices.shape[0], config.chunk_size)
    ]
    LOGGER.debug(
        f"sampling {indices.shape[0]} records in {len(chunks)} chunks, N={config.n_steps}"
    )
    batches = parallel_map(
        lambda chunk: _sample_chunk(chunk, config, maps, tails, components), chunks
    )
    batch = SampleBatch.concatenate(batches)
    if np.any(batch.truncated):
        LOGGER.warning(
            f"{int(np.sum(batch.truncated))} samples exceeded {config.max_events} counts"
        )
    return batch


def sample_record(
    config: SamplerConfig,
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    index: int = 0,
) -> DetectionRecord:
    """The record of sample `index`, identical to the one `sample_records` produces for it."""
    return sample_records(config, model, dpulse, initial, np.array([index])).record(0)


def _mean(values: np.ndarray) -> PatternEstimate | None:
    if values.shape[0] < 2:
        return None
    return PatternEstimate(
        probability=float(np.mean(values)),
        std_error=float(np.std(values, ddof=1) / np.sqrt(values.shape[0])),
    )


def estimate(
    config: SamplerConfig,
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    patterns: tuple[str, ...] = ESTIMATED_PATTERNS,
) -> MonteCarloEstimate:
    """Empirical pattern frequencies with binomial standard errors and mean count times.

    Returns:
        MonteCarloEstimate: the estimates, `tau1`/`tau2` are the mean first/second count times
        over the samples that have them (stored in the `probability` field).
    """
    batch = sample_records(config, model, dpulse, initial)
    labels = pd.Series(batch.patterns())
    frequencies = labels.value_counts()
    n = len(batch)
    result = {}
    for pattern in patterns:
        p = float(frequencies.get(pattern, 0)) / n
        result[pattern] = PatternEstimate(probability=p, std_error=float(np.sqrt(p * (1 - p) / n)))
    return MonteCarloEstimate(
        n_samples=n,
        patterns=result,
        tau1=_mean(batch.count_times(1)),
        tau2=_mean(batch.count_times(2)),
        truncated=int(np.sum(batch.truncated)),
    )


def records_to_dataframe(batch: SampleBatch) -> pd.DataFrame:
    """Sample dump with columns `sample_id`, `m`, `t1`, `side1`, `t2`, `side2`, ..."""
    width = max(2, min(int(np.max(batch.counts, initial=0)), batch.steps.shape[1]))
    columns = {"sample_id": batch.indices, "m": batch.counts}
    for k in range(width):
        present = batch.counts > k
        if k < batch.steps.shape[1]:
            times = np.where(present, batch.steps[:, k] * batch.tau, np.nan)
            codes = batch.sides[:, k]
        else:
            times = np.full(len(batch), np.nan)
            codes = np.zeros(len(batch), dtype=np.int8)
        columns[f"t{k + 1}"] = times
        columns[f"side{k + 1}"] = [
            _SIDE_CODES[c].value if ok else "" for c, ok in zip(codes, present)
        ]
    return pd.DataFrame(columns)
