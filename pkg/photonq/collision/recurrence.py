"""One collision step of the conditional pair and the outcome probabilities of a step."""

from enum import Enum

import numpy as np

from ..model import ConditionalPair, Side, pair_weight
from ..utils import NumericalError
from .blocks import VBlocks

__all__ = ("DiscreteOutcome", "step", "step_matrix", "outcome_distribution")


class DiscreteOutcome(Enum):
    """Detector bits (right, left) read out after one collision."""

    NONE = (0, 0)
    RIGHT = (1, 0)
    LEFT = (0, 1)
    BOTH = (1, 1)

    @property
    def index(self) -> int:
        """Block index of the outcome label."""
        right, left = self.value
        return 2 * right + left

    @property
    def side(self) -> Side | None:
        """Detector side of a count outcome, None for no count."""
        return _SIDES[self]

    @classmethod
    def counts(cls, include_both: bool = True) -> tuple["DiscreteOutcome", ...]:
        """Outcomes that register at least one count."""
        if include_both:
            return (cls.RIGHT, cls.LEFT, cls.BOTH)
        return (cls.RIGHT, cls.LEFT)


_SIDES = {
    DiscreteOutcome.NONE: None,
    DiscreteOutcome.RIGHT: Side.RIGHT,
    DiscreteOutcome.LEFT: Side.LEFT,
    DiscreteOutcome.BOTH: Side.BOTH,
}
# block index of the ancilla label "10": the photon still sitting in the right chain
_PHOTON_IN = 2


def step(
    pair: ConditionalPair,
    outcome: DiscreteOutcome,
    xi: complex,
    tau: float,
    blocks: VBlocks,
) -> ConditionalPair:
    """Advance a pair by one collision conditioned on `outcome`.

    alpha' = V[eta, 00] alpha and beta' = V[eta, 00] beta + sqrt(tau) xi V[eta, 10] alpha,
    the remaining pulse weight drops by |xi|^2 tau.

    Args:
        pair (ConditionalPair): pair before the collision.
        outcome (DiscreteOutcome): detector readout.
        xi (complex): pulse sample of this step.
        tau (float): step size.
        blocks (VBlocks): collision blocks.

    Returns:
        ConditionalPair: the pair after the collision.
    """
    vacuum = blocks.blocks[outcome.index, 0]
    photon = blocks.blocks[outcome.index, _PHOTON_IN]
    alpha = vacuum @ pair.alpha
    beta = vacuum @ pair.beta + np.sqrt(tau) * xi * (photon @ pair.alpha)
    tail = pair.tail_weight - abs(xi) ** 2 * tau
    return ConditionalPair(alpha=alpha, beta=beta, tail_weight=max(tail, 0.0))


def step_matrix(
    blocks: VBlocks, outcome: DiscreteOutcome, xi: complex, tau: float
) -> np.ndarray:
    """The 2d x 2d linear map of `step` acting on the stacked vector (alpha, beta)."""
    d = blocks.dim
    vacuum = blocks.blocks[outcome.index, 0]
    photon = blocks.blocks[outcome.index, _PHOTON_IN]
    M = np.zeros((2 * d, 2 * d), dtype=complex)
    M[:d, :d] = vacuum
    M[d:, d:] = vacuum
    M[d:, :d] = np.sqrt(tau) * xi * photon
    return M


def outcome_distribution(
    pair: ConditionalPair, xi: complex, tau: float, blocks: VBlocks
) -> dict[DiscreteOutcome, float]:
    """Conditional probabilities of the four readouts of the next collision.

    In exact mode they sum to one up to round-off, with first order blocks the sum deviates
    at O(tau^2).

    Raises:
        NumericalError: if the pair has zero weight.

    Returns:
        dict[DiscreteOutcome, float]: probability per outcome.
    """
    weight = pair_weight(pair)
    if not weight > 0:
        raise NumericalError("outcome probabilities of a zero weight pair are undefined")
    return {
        outcome: pair_weight(step(pair, outcome, xi, tau, blocks)) / weight
        for outcome in DiscreteOutcome
    }
