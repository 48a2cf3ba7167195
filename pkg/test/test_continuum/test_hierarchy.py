"""Tests for the count hierarchy, normalization and grid densities."""

import numpy as np
import pytest

from photonq.analytic import AtomParams, AtomState, event_probs, tla_model
from photonq.collision import apriori_discrete
from photonq.continuum import (
    CountHierarchy,
    apriori_continuous,
    density_grid,
    event_probabilities,
    exclusive_density,
    side_patterns,
    total_probability,
)
from photonq.model import (
    ExponentialPulse,
    GaussianPulse,
    discretize_pulse,
    make_model,
    make_record,
)
from photonq.utils import ModelConfigurationError


def _random_configurations(n, seed):  # noqa
    rng = np.random.default_rng(seed)
    for _ in range(n):
        params = AtomParams(
            gamma1=rng.uniform(0.1, 1.0),
            gamma2=rng.uniform(0.1, 1.0),
            delta0=rng.uniform(-1.0, 1.0),
        )
        pulse = ExponentialPulse(omega=rng.uniform(0.3, 3.0))
        state = AtomState(rho_ee=rng.uniform(0.0, 1.0))
        yield params, pulse, state


def test_side_patterns():  # noqa
    patterns = side_patterns(2)
    assert len(patterns) == 7
    assert patterns[0] == ()
    assert len(side_patterns(3)) == 15


@pytest.mark.parametrize("params, pulse, state", list(_random_configurations(5, 11)))
def test_normalization(params, pulse, state):  # noqa
    model = tla_model(params)
    gamma = params.gamma
    for t in (1.0 / gamma, 5.0 / gamma, 20.0 / gamma):
        assert total_probability(model, pulse, state.density(), t) == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("params, pulse, state", list(_random_configurations(3, 4)))
def test_event_probabilities_match_closed_forms(params, pulse, state):  # noqa
    times = [0.5, 2.0, 6.0]
    table = event_probabilities(tla_model(params), pulse, state.density(), times)
    assert list(table.columns) == ["t", "none", "R", "L", "RR", "LR", "RL", "LL", "total"]
    for row in table.itertuples(index=False):
        expected = event_probs(params, state, pulse, row.t)
        for pattern in ("none", "R", "L", "RR", "LR", "RL", "LL"):
            assert getattr(row, pattern) == pytest.approx(expected[pattern], abs=1e-8)
        assert row.total == pytest.approx(1.0, abs=1e-8)


def test_hierarchy_state_and_validation():  # noqa
    params = AtomParams(gamma1=0.5, gamma2=0.5)
    model = tla_model(params)
    pulse = ExponentialPulse(omega=1.0)
    hierarchy = CountHierarchy(model, pulse, np.array([0.0, 1.0]), 4.0)
    probabilities = hierarchy.probabilities(4.0)
    assert sum(probabilities.values()) == pytest.approx(np.trace(hierarchy.state(4.0)).real)
    assert hierarchy.t_end == pytest.approx(4.0)
    with pytest.raises(ModelConfigurationError):
        CountHierarchy(model, pulse, np.array([1.0, 0.0]), 1.0, m_max=-1)
    with pytest.raises(ModelConfigurationError):
        total_probability(model, pulse, np.array([1.0, 0.0]), 1.0, m_max=0)


def test_apriori_states_agree():  # noqa
    params = AtomParams(gamma1=0.5, gamma2=0.5, delta0=0.2)
    model = tla_model(params)
    pulse = ExponentialPulse(omega=1.0)
    initial = AtomState(rho_ee=0.5, rho_ge=0.2).density()
    sigma = apriori_continuous(model, pulse, initial, 3.0)
    assert sigma.trace == pytest.approx(total_probability(model, pulse, initial, 3.0), abs=1e-10)
    dpulse = discretize_pulse(pulse, 4000, 40.0)
    discrete = apriori_discrete(model, dpulse, initial, 300, mode="exact")
    assert np.allclose(discrete.entries, sigma.entries, atol=0.02)


def _v_system():  # noqa
    H = np.diag([0.0, -0.25, 0.25])
    L1 = np.zeros((3, 3), dtype=complex)
    L2 = np.zeros((3, 3), dtype=complex)
    L1[0, 1], L1[0, 2] = 0.6, 0.4
    L2[0, 1], L2[0, 2] = 0.3, 0.5j
    return make_model(H, L1, L2)


@pytest.mark.parametrize(
    "model, initial",
    [
        (tla_model(AtomParams(gamma1=0.7, gamma2=0.4, delta0=0.3)), np.array([0.6, 0.8])),
        (_v_system(), np.array([1.0, 0.0, 0.0])),
    ],
)
def test_density_grid_matches_records(model, initial):  # noqa
    pulse = GaussianPulse(center=1.5, width=0.5)
    times = [0.5, 1.0, 2.0, 3.0]
    horizon = 3.0
    frame = density_grid(model, pulse, initial, times, horizon)
    assert list(frame.columns) == ["t_prime", "t_second", "side_pattern", "density"]
    assert len(frame) == 4 * 2 + 6 * 4
    for row in frame.sample(n=10, random_state=1).itertuples(index=False):
        if np.isnan(row.t_second):
            record = make_record([(row.t_prime, row.side_pattern)], horizon)
        else:
            first, second = row.side_pattern[1], row.side_pattern[0]
            record = make_record([(row.t_prime, first), (row.t_second, second)], horizon)
        expected = exclusive_density(model, pulse, record, initial)
        assert row.density == pytest.approx(expected, rel=1e-6, abs=1e-10)


def test_density_grid_one_count_only():  # noqa
    model = tla_model(AtomParams(gamma1=0.5, gamma2=0.5))
    frame = density_grid(
        model, ExponentialPulse(omega=1.0), np.array([1.0, 0.0]), [1.0, 2.0, 5.0], 2.0, max_counts=1
    )
    # points beyond the horizon are dropped
    assert sorted(set(frame["t_prime"])) == [1.0, 2.0]
    assert frame["t_second"].isna().all()
    with pytest.raises(ModelConfigurationError):
        density_grid(model, ExponentialPulse(omega=1.0), np.array([1.0, 0.0]), [1.0], 2.0, 3)
