"""Count updates of the conditional pair in continuous time."""

from dataclasses import dataclass

import numpy as np

from ..model import ConditionalPair, Side, SystemModel
from ..utils import ModelConfigurationError

__all__ = ("JumpRule", "jump_rule", "apply_jump")


@dataclass(frozen=True, slots=True)
class JumpRule:
    """Update of (alpha, beta) at a count on `side`.

    A right count maps (alpha, beta) to (L1 alpha, L1 beta + xi alpha), the xi term being the
    photon that reached the right detector without interacting. Left counts only apply L2.
    """

    side: Side
    operator: np.ndarray
    feed_through: bool

    def matrix(self, xi: complex) -> np.ndarray:
        """The rule as a 2d x 2d map of the stacked vector (alpha, beta)."""
        d = self.operator.shape[0]
        M = np.zeros((2 * d, 2 * d), dtype=complex)
        M[:d, :d] = self.operator
        M[d:, d:] = self.operator
        if self.feed_through:
            M[d:, :d] = xi * np.eye(d)
        return M

    def apply(self, pair: ConditionalPair, xi: complex) -> ConditionalPair:  # noqa
        alpha = self.operator @ pair.alpha
        beta = self.operator @ pair.beta
        if self.feed_through:
            beta = beta + xi * pair.alpha
        return ConditionalPair(alpha=alpha, beta=beta, tail_weight=pair.tail_weight)


def jump_rule(model: SystemModel, side: Side | str) -> JumpRule:
    """The jump rule of a detector.

    Raises:
        ModelConfigurationError: for simultaneous counts, which have no continuous time analogue.
    """
    side = Side(side)
    if side == Side.RIGHT:
        return JumpRule(side=side, operator=model.L1, feed_through=True)
    if side == Side.LEFT:
        return JumpRule(side=side, operator=model.L2, feed_through=False)
    raise ModelConfigurationError("simultaneous counts are not defined in continuous time")


def apply_jump(
    model: SystemModel, pair: ConditionalPair, side: Side | str, xi: complex
) -> ConditionalPair:
    """Update a pair at a count on `side`, `xi` being the pulse amplitude at the count time."""
    return jump_rule(model, side).apply(pair, xi)
