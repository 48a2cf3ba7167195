"""Tests for collision unitaries, their blocks and the one step recurrence."""

import numpy as np
import pytest

from photonq.analytic import AtomParams, tla_model
from photonq.collision import (
    DiscreteOutcome,
    blocks_from_unitary,
    collision_blocks,
    exact_collision_unitary,
    first_order_blocks,
    label_index,
    outcome_distribution,
    step,
    step_matrix,
)
from photonq.model import ConditionalPair, initial_pair, make_model, pair_weight
from photonq.utils import ModelConfigurationError, NumericalError

MODEL = tla_model(AtomParams(gamma1=0.3, gamma2=0.7, delta0=0.2))


def _random_model(d, seed):  # noqa
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    L1 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    L2 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return make_model((A + A.conj().T) / 4, L1, L2)


def test_label_index():  # noqa
    assert [label_index(label) for label in ("00", "01", "10", "11")] == [0, 1, 2, 3]
    assert label_index(3) == 3
    with pytest.raises(ModelConfigurationError):
        label_index("12")


@pytest.mark.parametrize("seed", range(24))
def test_exact_unitary(seed):  # noqa
    d = 2 + seed % 3
    tau = float(np.random.default_rng(seed).uniform(1e-3, 0.3))
    blocks = collision_blocks(_random_model(d, seed), tau, "exact")
    assert blocks.unitarity_defect() < 1e-10
    assert blocks.mode == "exact"


def test_blocks_round_trip_through_assemble():  # noqa
    U = exact_collision_unitary(MODEL, 0.05)
    blocks = blocks_from_unitary(U, 0.05)
    assert np.allclose(blocks.assemble(), U)
    assert np.allclose(blocks["10", "00"], U[4:6, 0:2])


def test_first_order_single_exchange_blocks():  # noqa
    tau = 1e-2
    blocks = first_order_blocks(MODEL, tau)
    s = np.sqrt(tau)
    assert np.allclose(blocks["10", "00"], s * MODEL.L1)
    assert np.allclose(blocks["00", "10"], -s * MODEL.L1.conj().T)
    assert np.allclose(blocks["01", "00"], s * MODEL.L2)
    G = MODEL.H - 0.5j * MODEL.decay_operator()
    assert np.allclose(blocks["00", "00"], np.eye(2) - 1j * tau * G)


@pytest.mark.parametrize("tau", [1e-2, 1e-3])
def test_symmetric_blocks_approach_exact(tau):  # noqa
    exact = collision_blocks(MODEL, tau, "exact").blocks
    symmetric = first_order_blocks(MODEL, tau, cross_terms="symmetric").blocks
    listed = first_order_blocks(MODEL, tau, cross_terms="listed").blocks
    assert np.max(np.abs(symmetric - exact)) < 5 * tau**1.5
    assert np.max(np.abs(listed - exact)) < 5 * tau


def test_invalid_block_requests():  # noqa
    with pytest.raises(ModelConfigurationError):
        collision_blocks(MODEL, 0.1, "second-order")
    with pytest.raises(ModelConfigurationError):
        collision_blocks(MODEL, 0.0)
    with pytest.raises(ModelConfigurationError):
        first_order_blocks(MODEL, 0.1, cross_terms="other")


def test_exact_outcomes_conserve_weight():  # noqa
    tau = 0.02
    blocks = collision_blocks(_random_model(3, 5), tau, "exact")
    pair = ConditionalPair(
        alpha=np.array([0.6, 0.0, 0.8j]), beta=np.array([0.1, 0.2, 0.0]), tail_weight=0.7
    )
    xi = 0.9 - 0.3j
    distribution = outcome_distribution(pair, xi, tau, blocks)
    assert sum(distribution.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(p >= 0 for p in distribution.values())


def test_first_order_outcomes_nearly_conserve_weight():  # noqa
    tau = 1e-3
    blocks = collision_blocks(MODEL, tau, "first-order")
    pair = initial_pair(np.array([0.0, 1.0]))
    total = sum(outcome_distribution(pair, 1.0, tau, blocks).values())
    assert total == pytest.approx(1.0, abs=10 * tau**2)


def test_step_matrix_matches_step():  # noqa
    tau = 0.01
    blocks = collision_blocks(MODEL, tau, "exact")
    pair = ConditionalPair(alpha=np.array([0.6, 0.8]), beta=np.array([0.0, 0.1j]), tail_weight=0.5)
    for outcome in DiscreteOutcome:
        stepped = step(pair, outcome, 0.7, tau, blocks)
        mapped = step_matrix(blocks, outcome, 0.7, tau) @ pair.stacked()
        assert np.allclose(stepped.stacked(), mapped)
        assert stepped.tail_weight == pytest.approx(0.5 - 0.49 * tau)


def test_zero_weight_pair():  # noqa
    blocks = collision_blocks(MODEL, 0.01)
    pair = ConditionalPair(alpha=np.zeros(2), beta=np.zeros(2))
    with pytest.raises(NumericalError):
        outcome_distribution(pair, 1.0, 0.01, blocks)
    assert pair_weight(pair) == 0.0


def test_outcome_properties():  # noqa
    assert DiscreteOutcome.RIGHT.index == 2
    assert DiscreteOutcome.LEFT.index == 1
    assert DiscreteOutcome.NONE.side is None
    assert DiscreteOutcome.counts(include_both=False) == (
        DiscreteOutcome.RIGHT,
        DiscreteOutcome.LEFT,
    )
