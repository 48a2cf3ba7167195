"""Convergence of the discrete conditional pair to its continuous time limit."""

from collections.abc import Iterable

import numpy as np
import pandas as pd

from ..continuum import conditional_pair
from ..model import (
    DetectionRecord,
    Pulse,
    Side,
    SystemModel,
    discretize_pulse,
    initial_pair,
    pair_weight,
    unit_vector,
)
from ..utils import LOGGER, ModelConfigurationError
from .blocks import BlockMode, collision_blocks
from .recurrence import DiscreteOutcome, step

__all__ = ("discrete_pair", "convergence_table")

_OUTCOME_OF_SIDE = {
    Side.RIGHT: DiscreteOutcome.RIGHT,
    Side.LEFT: DiscreteOutcome.LEFT,
    Side.BOTH: DiscreteOutcome.BOTH,
}


def _positions(record: DetectionRecord, tau: float) -> dict[int, DiscreteOutcome]:
    positions = {}
    for event in record.events:
        position = int(round(event.time / tau))
        if position < 1 or position in positions:
            raise ModelConfigurationError(
                f"count at {event.time} cannot be placed on a grid of step {tau}"
            )
        if abs(position * tau - event.time) > 1e-9 * max(1.0, event.time):
            LOGGER.debug(f"count at {event.time} moved to step {position} (tau={tau:.3g})")
        positions[position] = _OUTCOME_OF_SIDE[event.side]
    return positions


def discrete_pair(
    model: SystemModel,
    pulse: Pulse,
    psi0: np.ndarray,
    record: DetectionRecord,
    tau: float,
    mode: BlockMode = "first-order",
):
    """Discrete pair of `record` after round(horizon / tau) collisions.

    Count times are mapped to the steps round(t / tau). The pulse is sampled over its whole
    support so that the discrete tail weights track the continuous ones.

    Returns:
        tuple[ConditionalPair, float]: the pair and the largest deviation of the four
        outcome weights of a step from the weight before it, along the trajectory.
    """
    if not tau > 0:
        raise ModelConfigurationError(f"time step must be positive, got {tau}")
    n_steps = int(round(record.horizon / tau))
    span = max(record.horizon, pulse.horizon)
    n_samples = max(n_steps, int(np.ceil(span / tau)))
    dpulse = discretize_pulse(pulse, n_samples, n_samples * tau)
    positions = _positions(record, tau)
    if positions and max(positions) > n_steps:
        raise ModelConfigurationError("record counts lie beyond the discrete horizon")
    blocks = collision_blocks(model, tau, mode)
    pair = initial_pair(unit_vector(psi0))
    balance = 0.0
    for j in range(n_steps):
        xi = complex(dpulse.samples[j])
        if mode == "exact":
            before = pair_weight(pair)
            after = sum(pair_weight(step(pair, o, xi, tau, blocks)) for o in DiscreteOutcome)
            balance = max(balance, abs(after - before))
        outcome = positions.get(j + 1, DiscreteOutcome.NONE)
        pair = step(pair, outcome, xi, tau, blocks)
    return pair, balance


def convergence_table(
    model: SystemModel,
    pulse: Pulse,
    psi0: np.ndarray,
    record: DetectionRecord,
    taus: Iterable[float],
    mode: BlockMode = "first-order",
) -> pd.DataFrame:
    """Error of the discrete pair against the continuous pair for a sequence of time steps.

    The discrete pair of a record with m counts carries a factor tau^{m/2} that the
    continuous densities factor out, it is rescaled before comparing.

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        psi0 (np.ndarray): initial unit state vector.
        record (DetectionRecord): counts and horizon of the comparison.
        taus (Iterable[float]): time steps, usually halving.
        mode (BlockMode, optional): block mode. Defaults to "first-order".

    Returns:
        pd.DataFrame: columns `tau`, `err` (max norm over alpha and beta), `ratio` (previous
        error over this one, empty for the first row) and `balance` (largest outcome
        probability imbalance along the trajectory, exact mode only).
    """
    taus = [float(tau) for tau in taus]
    if not taus:
        raise ModelConfigurationError("no time steps given")
    reference = conditional_pair(model, pulse, record, psi0)
    rows = []
    previous = None
    for tau in taus:
        pair, balance = discrete_pair(model, pulse, psi0, record, tau, mode)
        scale = tau ** (-0.5 * record.n_counts)
        err = max(
            float(np.max(np.abs(scale * pair.alpha - reference.alpha))),
            float(np.max(np.abs(scale * pair.beta - reference.beta))),
        )
        ratio = previous / err if previous is not None and err > 0 else np.nan
        rows.append(
            {
                "tau": tau,
                "err": err,
                "ratio": ratio,
                "balance": balance if mode == "exact" else np.nan,
            }
        )
        LOGGER.debug(f"convergence: tau={tau:.3g}, err={err:.3g}")
        previous = err
    return pd.DataFrame(rows, columns=["tau", "err", "ratio", "balance"])
