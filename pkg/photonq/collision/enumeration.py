"""Enumeration of discrete detection records and the discrete a-priori state.

Both work on the stacked vector v = (alpha, beta). A collision with readout eta acts on it
as a fixed 2d x 2d matrix, and the weight of a pair after step j is v^dagger Q_j v where
Q_j pulls the final weight |alpha|^2 tail + |beta|^2 back through the remaining no-count
steps. The weight of a record therefore only needs the stacked vector right after its last
count, and all records sharing a prefix share the propagation of that prefix.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from math import comb

import numpy as np
import pandas as pd

from ..model import (
    DensityMatrix,
    DetectionRecord,
    DiscretePulse,
    Side,
    SystemModel,
    as_density,
    make_record,
    pattern_of,
    pure_components,
)
from ..utils import LOGGER, EnumerationBudgetError, ModelConfigurationError
from ..utils._const import ENUMERATION_BUDGET
from .blocks import BlockMode, VBlocks, collision_blocks
from .recurrence import DiscreteOutcome, step_matrix

__all__ = (
    "WeightedRecord",
    "EnumerationResult",
    "enumerate_records",
    "apriori_discrete",
    "record_count",
    "count_weights",
)

_SIDE_CODES = (Side.RIGHT, Side.LEFT, Side.BOTH)


@dataclass(frozen=True, slots=True)
class WeightedRecord:  # noqa
    record: DetectionRecord
    weight: float


@dataclass(frozen=True)
class EnumerationResult:
    """Weights of all records with at most `m_max` counts.

    `positions[m]` (shape (n, m)) holds 1-based count steps, `sides[m]` the side codes
    (0 = R, 1 = L, 2 = both) and `weights[m]` the probabilities, sorted by positions and
    then sides.
    """

    tau: float
    n_steps: int
    m_max: int
    no_count_weight: float
    positions: tuple[np.ndarray, ...]
    sides: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    def total_weight(self) -> float:
        """Sum of all enumerated weights, the no-count record included."""
        return self.no_count_weight + float(sum(np.sum(w) for w in self.weights[1:]))

    def tail_bound(self) -> float:
        """Weight of the records that were not enumerated (more than `m_max` counts)."""
        return max(1.0 - self.total_weight(), 0.0)

    def count_weight(self, m: int) -> float:
        """Total weight of the records with exactly `m` counts."""
        if m == 0:
            return self.no_count_weight
        return float(np.sum(self.weights[m]))

    def pattern_weights(self) -> dict[str, float]:
        """Total weight per side pattern (latest count first)."""
        result = {"none": self.no_count_weight}
        for m in range(1, self.m_max + 1):
            for code in np.unique(self.sides[m], axis=0):
                mask = np.all(self.sides[m] == code, axis=1)
                label = pattern_of([_SIDE_CODES[c] for c in code])
                result[label] = result.get(label, 0.0) + float(np.sum(self.weights[m][mask]))
        return result

    def __len__(self) -> int:  # noqa
        return 1 + sum(len(w) for w in self.weights[1:])

    def __iter__(self) -> Iterator[WeightedRecord]:
        """All records as `WeightedRecord`, count times are position * tau."""
        horizon = self.n_steps * self.tau
        yield WeightedRecord(make_record((), horizon), self.no_count_weight)
        for m in range(1, self.m_max + 1):
            for pos, codes, w in zip(self.positions[m], self.sides[m], self.weights[m]):
                events = [(p * self.tau, _SIDE_CODES[c]) for p, c in zip(pos, codes)]
                yield WeightedRecord(make_record(events, horizon), float(w))

    def to_dataframe(self) -> pd.DataFrame:
        """Table with columns m, l1, side1, ..., weight (missing counts are empty)."""
        frames = [
            pd.DataFrame({"m": [0], "weight": [self.no_count_weight]}),
        ]
        for m in range(1, self.m_max + 1):
            columns = {"m": np.full(len(self.weights[m]), m)}
            for k in range(m):
                columns[f"l{k + 1}"] = self.positions[m][:, k]
                columns[f"side{k + 1}"] = [_SIDE_CODES[c].value for c in self.sides[m][:, k]]
            columns["weight"] = self.weights[m]
            frames.append(pd.DataFrame(columns))
        frame = pd.concat(frames, ignore_index=True)
        order = ["m"]
        for k in range(self.m_max):
            order += [f"l{k + 1}", f"side{k + 1}"]
        order.append("weight")
        for column in order:
            if column not in frame:
                frame[column] = pd.NA
        frame = frame[order].copy()
        for k in range(self.m_max):
            frame[f"l{k + 1}"] = frame[f"l{k + 1}"].astype("Int64")
        return frame


def record_count(n_steps: int, m_max: int, n_sides: int = 2) -> int:
    """Number of records with at most `m_max` counts on `n_steps` steps."""
    return sum(comb(n_steps, m) * n_sides**m for m in range(m_max + 1))


def _outcomes(blocks: VBlocks) -> tuple[DiscreteOutcome, ...]:
    # simultaneous counts are a separate event kind of the exact unitary only
    return DiscreteOutcome.counts(include_both=blocks.mode == "exact")


def _step_maps(blocks: VBlocks, dpulse: DiscretePulse, n_steps: int, outcome: DiscreteOutcome):
    return np.stack(
        [step_matrix(blocks, outcome, dpulse.samples[j], dpulse.step) for j in range(n_steps)]
    )


def _final_forms(no_count: np.ndarray, tails: np.ndarray, d: int) -> np.ndarray:
    # Q[j]: weight form of a stacked vector after j steps, no counts afterwards
    n_steps = no_count.shape[0]
    Q = np.empty((n_steps + 1, 2 * d, 2 * d), dtype=complex)
    Q[n_steps] = np.diag(np.concatenate([np.full(d, tails[n_steps]), np.ones(d)]))
    for j in range(n_steps - 1, -1, -1):
        Q[j] = no_count[j].conj().T @ Q[j + 1] @ no_count[j]
    return Q


def _quadratic(vectors: np.ndarray, form: np.ndarray) -> np.ndarray:
    return np.einsum("ni,ij,nj->n", vectors.conj(), form, vectors).real


def enumerate_records(
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    n_steps: int | None = None,
    m_max: int = 2,
    mode: BlockMode = "first-order",
    budget: int = ENUMERATION_BUDGET,
) -> EnumerationResult:
    """Weights of every detection record with at most `m_max` counts in `n_steps` collisions.

    Args:
        model (SystemModel): the system.
        dpulse (DiscretePulse): pulse samples, at least `n_steps` of them.
        initial (np.ndarray | DensityMatrix): initial system state.
        n_steps (int | None, optional): number of collisions. Defaults to all samples.
        m_max (int, optional): largest number of counts. Defaults to 2.
        mode (BlockMode, optional): block mode. Defaults to "first-order".
        budget (int, optional): largest number of records to produce. Defaults to 5e7.

    Raises:
        ModelConfigurationError: on invalid `n_steps` or `m_max`.
        EnumerationBudgetError: if the number of records exceeds `budget`.

    Returns:
        EnumerationResult: the weights.
    """
    n_steps = dpulse.n_steps if n_steps is None else n_steps
    if not 0 <= n_steps <= dpulse.n_steps or m_max < 0:
        raise ModelConfigurationError(
            f"invalid enumeration size: n_steps={n_steps} (of {dpulse.n_steps}), m_max={m_max}"
        )
    blocks = collision_blocks(model, dpulse.step, mode)
    outcomes = _outcomes(blocks)
    size = record_count(n_steps, m_max, len(outcomes))
    if size > budget:
        raise EnumerationBudgetError(
            f"enumeration of {size} records exceeds the budget of {budget}, "
            "use count_weights for totals per number of counts"
        )
    LOGGER.debug(f"enumerating {size} records: N={n_steps}, m_max={m_max}, mode={mode}")

    d = model.dim
    no_count = _step_maps(blocks, dpulse, n_steps, DiscreteOutcome.NONE)
    jumps = [_step_maps(blocks, dpulse, n_steps, outcome) for outcome in outcomes]
    Q = _final_forms(no_count, dpulse.tails(), d)

    components = pure_components(initial)
    no_count_weight = 0.0
    weights = [None] + [0.0] * m_max
    positions = sides = None
    for probability, psi in components:
        v0 = np.concatenate([psi, np.zeros(d, dtype=complex)])
        no_count_weight += probability * float(np.real(v0.conj() @ Q[0] @ v0))
        pos_m, side_m, weight_m = _enumerate_pure(v0, no_count, jumps, Q, m_max)
        positions, sides = pos_m, side_m
        for m in range(1, m_max + 1):
            weights[m] = weights[m] + probability * weight_m[m]

    order_positions = [np.zeros((1, 0), dtype=np.int64)]
    order_sides = [np.zeros((1, 0), dtype=np.int8)]
    order_weights = [np.array([no_count_weight])]
    for m in range(1, m_max + 1):
        # sort by positions, then sides
        keys = [sides[m][:, k] for k in reversed(range(m))]
        keys += [positions[m][:, k] for k in reversed(range(m))]
        order = np.lexsort(keys) if len(weights[m]) else np.zeros(0, dtype=np.int64)
        order_positions.append(positions[m][order])
        order_sides.append(sides[m][order])
        order_weights.append(np.asarray(weights[m])[order])
    return EnumerationResult(
        tau=dpulse.step,
        n_steps=n_steps,
        m_max=m_max,
        no_count_weight=no_count_weight,
        positions=tuple(order_positions),
        sides=tuple(order_sides),
        weights=tuple(order_weights),
    )


def _enumerate_pure(v0, no_count, jumps, Q, m_max):
    n_steps = no_count.shape[0]
    n_sides = len(jumps)
    dim2 = v0.shape[0]
    # states of records with m < m_max counts so far, propagated to the current step
    states = [v0[None, :]] + [np.zeros((0, dim2), dtype=complex) for _ in range(1, m_max)]
    state_pos = [np.zeros((1, 0), dtype=np.int64)] + [
        np.zeros((0, m), dtype=np.int64) for m in range(1, m_max)
    ]
    state_sides = [np.zeros((1, 0), dtype=np.int8)] + [
        np.zeros((0, m), dtype=np.int8) for m in range(1, m_max)
    ]
    out_pos = [[] for _ in range(m_max + 1)]
    out_sides = [[] for _ in range(m_max + 1)]
    out_weights = [[] for _ in range(m_max + 1)]
    for j in range(n_steps):
        created = []
        for m in range(1, m_max + 1):
            before = states[m - 1]
            if before.shape[0] == 0:
                created.append(None)
                continue
            new_states = np.concatenate([before @ jumps[s][j].T for s in range(n_sides)])
            n_prev = before.shape[0]
            new_pos = np.concatenate(
                [np.tile(state_pos[m - 1], (n_sides, 1)), np.full((n_sides * n_prev, 1), j + 1)],
                axis=1,
            )
            codes = np.repeat(np.arange(n_sides, dtype=np.int8), n_prev)[:, None]
            new_sides = np.concatenate([np.tile(state_sides[m - 1], (n_sides, 1)), codes], axis=1)
            out_pos[m].append(new_pos)
            out_sides[m].append(new_sides)
            out_weights[m].append(_quadratic(new_states, Q[j + 1]))
            created.append((new_states, new_pos, new_sides))
        for m in range(min(m_max, len(states))):
            if states[m].shape[0]:
                states[m] = states[m] @ no_count[j].T
        for m in range(1, m_max):
            if created[m - 1] is not None:
                new_states, new_pos, new_sides = created[m - 1]
                states[m] = np.concatenate([states[m], new_states])
                state_pos[m] = np.concatenate([state_pos[m], new_pos])
                state_sides[m] = np.concatenate([state_sides[m], new_sides])

    positions = [None]
    sides = [None]
    weights = [None]
    for m in range(1, m_max + 1):
        if out_pos[m]:
            positions.append(np.concatenate(out_pos[m]))
            sides.append(np.concatenate(out_sides[m]))
            weights.append(np.concatenate(out_weights[m]))
        else:
            positions.append(np.zeros((0, m), dtype=np.int64))
            sides.append(np.zeros((0, m), dtype=np.int8))
            weights.append(np.zeros(0))
    return positions, sides, weights


def apriori_discrete(
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    j: int,
    m_max: int = 2,
    mode: BlockMode = "first-order",
) -> DensityMatrix:
    """Record averaged system state after `j` collisions, summed over records with at most `m_max` counts.

    sigma_j = sum over records of |alpha><alpha| tail_j + |beta><beta|, accumulated as
    count-resolved sums of stacked dyads instead of record by record.

    Args:
        model (SystemModel): the system.
        dpulse (DiscretePulse): pulse samples.
        initial (np.ndarray | DensityMatrix): initial system state.
        j (int): number of collisions, at most the number of samples.
        m_max (int, optional): largest number of counts. Defaults to 2.
        mode (BlockMode, optional): block mode. Defaults to "first-order".

    Raises:
        ModelConfigurationError: on invalid `j` or `m_max`.

    Returns:
        DensityMatrix: unnormalized state, its trace is the enumerated probability.
    """
    if not 0 <= j <= dpulse.n_steps or m_max < 0:
        raise ModelConfigurationError(f"invalid a-priori request: j={j}, m_max={m_max}")
    d = model.dim
    blocks = collision_blocks(model, dpulse.step, mode)
    X = _count_resolved(blocks, dpulse, initial, j, m_max)
    tail = dpulse.tails()[j]
    sigma = np.sum(tail * X[:, :d, :d] + X[:, d:, d:], axis=0)
    sigma = (sigma + sigma.conj().T) / 2
    return DensityMatrix.from_entries(sigma, normalized=False)


def _count_resolved(
    blocks: VBlocks, dpulse: DiscretePulse, initial, j: int, m_max: int
) -> np.ndarray:
    # X[m]: sum of stacked dyads v v^dagger over records with m counts after j steps
    outcomes = _outcomes(blocks)
    d = blocks.dim
    X = np.zeros((m_max + 1, 2 * d, 2 * d), dtype=complex)
    X[0, :d, :d] = as_density(initial)
    for k in range(j):
        xi = dpulse.samples[k]
        A = step_matrix(blocks, DiscreteOutcome.NONE, xi, dpulse.step)
        J = [step_matrix(blocks, outcome, xi, dpulse.step) for outcome in outcomes]
        updated = np.einsum("ij,mjk,lk->mil", A, X, A.conj())
        for m in range(1, m_max + 1):
            for Jo in J:
                updated[m] += Jo @ X[m - 1] @ Jo.conj().T
        X = updated
    return X


def count_weights(
    model: SystemModel,
    dpulse: DiscretePulse,
    initial: np.ndarray | DensityMatrix,
    n_steps: int | None = None,
    m_max: int = 2,
    mode: BlockMode = "first-order",
) -> np.ndarray:
    """Total weight of the records with exactly m counts, for m = 0..m_max.

    Sums over the records without listing them, so its cost does not grow with the
    number of records and no enumeration budget applies.

    Args:
        model (SystemModel): the system.
        dpulse (DiscretePulse): pulse samples, at least `n_steps` of them.
        initial (np.ndarray | DensityMatrix): initial system state.
        n_steps (int | None, optional): number of collisions. Defaults to all samples.
        m_max (int, optional): largest number of counts. Defaults to 2.
        mode (BlockMode, optional): block mode. Defaults to "first-order".

    Raises:
        ModelConfigurationError: on invalid `n_steps` or `m_max`.

    Returns:
        np.ndarray: real weights of shape (m_max + 1,).
    """
    n_steps = dpulse.n_steps if n_steps is None else n_steps
    if not 0 <= n_steps <= dpulse.n_steps or m_max < 0:
        raise ModelConfigurationError(
            f"invalid count weights request: n_steps={n_steps} "
            f"(of {dpulse.n_steps}), m_max={m_max}"
        )
    d = model.dim
    blocks = collision_blocks(model, dpulse.step, mode)
    X = _count_resolved(blocks, dpulse, initial, n_steps, m_max)
    tail = dpulse.tails()[n_steps]
    alpha = np.trace(X[:, :d, :d], axis1=1, axis2=2)
    beta = np.trace(X[:, d:, d:], axis1=1, axis2=2)
    return (tail * alpha + beta).real
