"""Tests for record enumeration and the discrete a-priori state."""

import numpy as np
import pytest

from photonq.analytic import AtomParams, AtomState, event_probs, tla_model
from photonq.collision import (
    DiscreteOutcome,
    apriori_discrete,
    collision_blocks,
    count_weights,
    enumerate_records,
    record_count,
    step,
    step_matrix,
)
from photonq.model import (
    DiscretePulse,
    ExponentialPulse,
    GaussianPulse,
    discretize_pulse,
    initial_pair,
    make_model,
    pair_weight,
)
from photonq.utils import EnumerationBudgetError, ModelConfigurationError

PARAMS = AtomParams(gamma1=0.5, gamma2=0.5, delta0=0.0)
MODEL = tla_model(PARAMS)
GROUND = np.array([1.0, 0.0])
EXCITED = np.array([0.0, 1.0])


def test_record_count():  # noqa
    assert record_count(10, 0) == 1
    assert record_count(10, 1) == 21
    assert record_count(10, 2) == 1 + 20 + 45 * 4
    assert record_count(4, 2, n_sides=3) == 1 + 12 + 6 * 9


@pytest.mark.parametrize("initial, m_max", [(GROUND, 1), (EXCITED, 2)])
def test_exact_enumeration_is_complete(initial, m_max):  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=1.0), 60, 6.0)
    result = enumerate_records(MODEL, dpulse, initial, m_max=m_max, mode="exact")
    # a single photon plus the initial excitation yields at most m_max counts
    assert result.total_weight() == pytest.approx(1.0, abs=1e-12)
    assert result.tail_bound() == pytest.approx(0.0, abs=1e-12)
    assert len(result) == record_count(60, m_max, n_sides=3)


def test_enumeration_weights_sum_per_count():  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=1.0), 40, 4.0)
    result = enumerate_records(MODEL, dpulse, EXCITED, m_max=2, mode="exact")
    total = sum(result.count_weight(m) for m in range(3))
    assert total == pytest.approx(result.total_weight())
    assert sum(w.weight for w in result) == pytest.approx(result.total_weight())
    frame = result.to_dataframe()
    assert list(frame.columns) == ["m", "l1", "side1", "l2", "side2", "weight"]
    assert frame["weight"].sum() == pytest.approx(result.total_weight())


def test_enumeration_approaches_continuum():  # noqa
    pulse = ExponentialPulse(omega=1.0)
    tau, horizon = 0.01, 5.0
    dpulse = discretize_pulse(pulse, int(round(horizon / tau)), horizon)
    result = enumerate_records(MODEL, dpulse, EXCITED, m_max=2, mode="exact")
    weights = result.pattern_weights()
    reference = event_probs(PARAMS, AtomState.excited(), pulse, horizon)
    for pattern in ("none", "R", "L", "RR", "LR", "RL", "LL"):
        assert weights.get(pattern, 0.0) == pytest.approx(reference[pattern], abs=0.03)


def test_vacuum_window_symmetry():  # noqa
    params = AtomParams(gamma1=0.3, gamma2=0.9, delta0=0.4)
    model = tla_model(params)
    # no photon arrives during the first 50 collisions
    samples = np.concatenate([np.zeros(50), np.ones(50)])
    dpulse = DiscretePulse.from_samples(samples, 0.02)
    weights = enumerate_records(model, dpulse, EXCITED, n_steps=50, m_max=2).pattern_weights()
    swapped = enumerate_records(
        model.swapped(), dpulse, EXCITED, n_steps=50, m_max=2
    ).pattern_weights()
    mirror = {"none": "none", "R": "L", "L": "R", "RR": "LL", "LL": "RR", "LR": "RL", "RL": "LR"}
    for pattern, image in mirror.items():
        assert weights.get(pattern, 0.0) == pytest.approx(swapped.get(image, 0.0), abs=1e-14)


def test_budget():  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=1.0), 100, 10.0)
    with pytest.raises(EnumerationBudgetError):
        enumerate_records(MODEL, dpulse, GROUND, m_max=2, budget=1000)
    with pytest.raises(ModelConfigurationError):
        enumerate_records(MODEL, dpulse, GROUND, n_steps=101)


def test_apriori_matches_enumeration():  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=0.8), 50, 5.0)
    for mode in ("exact", "first-order"):
        result = enumerate_records(MODEL, dpulse, EXCITED, n_steps=30, m_max=2, mode=mode)
        sigma = apriori_discrete(MODEL, dpulse, EXCITED, 30, m_max=2, mode=mode)
        assert sigma.trace == pytest.approx(result.total_weight(), abs=1e-12)
        assert not sigma.normalized


def test_apriori_exact_keeps_trace():  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=0.8), 50, 5.0)
    sigma = apriori_discrete(MODEL, dpulse, EXCITED, 50, m_max=2, mode="exact")
    assert sigma.trace == pytest.approx(1.0, abs=1e-12)
    # after the photon and the excitation have left, the atom is mostly back in |g>
    assert sigma.population(0) > sigma.population(1)


@pytest.mark.parametrize("mode", ["exact", "first-order"])
def test_count_weights_match_enumeration(mode):  # noqa
    dpulse = discretize_pulse(ExponentialPulse(omega=1.0), 40, 4.0)
    result = enumerate_records(MODEL, dpulse, EXCITED, m_max=2, mode=mode)
    weights = count_weights(MODEL, dpulse, EXCITED, m_max=2, mode=mode)
    assert weights.shape == (3,)
    for m in range(3):
        assert weights[m] == pytest.approx(result.count_weight(m), abs=1e-12)


def test_count_weights_beyond_budget():  # noqa
    # three counts on two thousand exact collisions is far beyond listing every record
    dpulse = discretize_pulse(ExponentialPulse(omega=0.5), 2000, 20.0)
    with pytest.raises(EnumerationBudgetError, match="count_weights"):
        enumerate_records(MODEL, dpulse, GROUND, m_max=3, mode="exact")
    weights = count_weights(MODEL, dpulse, GROUND, m_max=3, mode="exact")
    # a ground atom scatters the single photon at most once
    assert weights.sum() == pytest.approx(1.0, abs=1e-9)
    assert weights[2] + weights[3] <= 1e-9
    with pytest.raises(ModelConfigurationError):
        count_weights(MODEL, dpulse, GROUND, n_steps=2001)


@pytest.mark.parametrize("mode", ["exact", "first-order"])
@pytest.mark.parametrize("d, seed", [(2, 3), (3, 4), (4, 5)])
def test_replayed_steps_match_enumeration(mode, d, seed):  # noqa
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    L1 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    L2 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    model = make_model((A + A.conj().T) / 4, L1, L2)
    dpulse = discretize_pulse(GaussianPulse(center=1.0, width=0.4), 12, 2.4)
    blocks = collision_blocks(model, dpulse.step, mode)
    result = enumerate_records(model, dpulse, psi, m_max=2, mode=mode)

    # a right count at step 3 and a left count at step 8
    counts = {3: DiscreteOutcome.RIGHT, 8: DiscreteOutcome.LEFT}
    pair, product = initial_pair(psi), np.eye(2 * d, dtype=complex)
    for j, xi in enumerate(dpulse.samples):
        outcome = counts.get(j + 1, DiscreteOutcome.NONE)
        pair = step(pair, outcome, xi, dpulse.step, blocks)
        product = step_matrix(blocks, outcome, xi, dpulse.step) @ product
    assert np.allclose(product @ initial_pair(psi).stacked(), pair.stacked())

    mask = np.all(result.positions[2] == [3, 8], axis=1) & np.all(result.sides[2] == [0, 1], axis=1)
    assert mask.sum() == 1
    assert result.weights[2][mask][0] == pytest.approx(pair_weight(pair), abs=1e-12)
