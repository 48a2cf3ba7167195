"""The conditional vector pair (alpha, beta) carried along a detection record."""

from dataclasses import dataclass, field

import numpy as np

from ..utils import ModelConfigurationError

__all__ = ("ConditionalPair", "pair_weight", "initial_pair")

# round-off allowance when a tail weight is decremented step by step
_TAIL_SLACK = 1e-12


@dataclass(frozen=True, slots=True)
class ConditionalPair:
    """Unnormalized conditional vectors of the system.

    `alpha` is the branch in which the photon is still travelling in the pulse, `beta` the
    branch in which it has already been absorbed or detected. `tail_weight` is the norm of
    the part of the pulse that has not yet reached the system.
    """

    alpha: np.ndarray
    beta: np.ndarray
    tail_weight: float = field(default=1.0)

    def __post_init__(self):  # noqa
        alpha = np.asarray(self.alpha, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex)
        if alpha.shape != beta.shape or alpha.ndim != 1:
            raise ModelConfigurationError(
                f"alpha and beta must be vectors of equal size: {alpha.shape}, {beta.shape}"
            )
        tail = float(self.tail_weight)
        if tail < -_TAIL_SLACK or tail > 1.0 + _TAIL_SLACK:
            raise ModelConfigurationError(f"tail weight {tail} is outside of [0, 1]")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "tail_weight", min(max(tail, 0.0), 1.0))

    @property
    def dim(self) -> int:  # noqa
        return self.alpha.shape[0]

    def stacked(self) -> np.ndarray:
        """The augmented vector (alpha, beta) of length 2d."""
        return np.concatenate([self.alpha, self.beta])

    @classmethod
    def from_stacked(cls, vector: np.ndarray, tail_weight: float) -> "ConditionalPair":
        """Inverse of `stacked`."""
        d = vector.shape[0] // 2
        return cls(alpha=vector[:d], beta=vector[d:], tail_weight=tail_weight)


def pair_weight(pair: ConditionalPair) -> float:
    """Probability weight of a pair: |alpha|^2 tail + |beta|^2."""
    a = np.vdot(pair.alpha, pair.alpha).real
    b = np.vdot(pair.beta, pair.beta).real
    return float(a * pair.tail_weight + b)


def initial_pair(psi0: np.ndarray) -> ConditionalPair:
    """The pair (psi0, 0) with the whole pulse still to arrive."""
    psi0 = np.asarray(psi0, dtype=complex)
    return ConditionalPair(alpha=psi0, beta=np.zeros_like(psi0), tail_weight=1.0)
