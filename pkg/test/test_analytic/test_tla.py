"""Tests for the two-level atom closed forms with arbitrary pulses."""

import numpy as np
import pytest

from photonq.analytic import (
    AtomParams,
    AtomState,
    delay_time,
    event_prob,
    event_probs,
    first_count,
    mean_counts,
    one_count_density,
    p_zero,
    second_count,
    two_count_density,
)
from photonq.model import ExponentialPulse, FlatPulse, GaussianPulse
from photonq.numerics import integrate_1d
from photonq.utils import ModelConfigurationError

SYMMETRIC = AtomParams(gamma1=0.5, gamma2=0.5, delta0=0.0)
PULSES = [
    ExponentialPulse(omega=0.5),
    GaussianPulse(center=3.0, width=1.0),
    FlatPulse(duration=2.0),
]


def test_atom_validation():  # noqa
    with pytest.raises(ValueError):
        AtomParams(gamma1=-0.1, gamma2=0.5)
    with pytest.raises(ModelConfigurationError):
        AtomParams.create(0.5, -1.0)
    with pytest.raises(ValueError):
        AtomState(rho_ee=1.5)
    with pytest.raises(ValueError):
        AtomState(rho_ee=0.5, rho_ge=0.6)
    assert AtomState(rho_ee=0.5, rho_ge=[0.1, 0.2]).rho_ge == 0.1 + 0.2j
    assert AtomState.excited().is_excited()
    assert SYMMETRIC.scaled(2.0).gamma == pytest.approx(0.5)


@pytest.mark.parametrize("pulse", PULSES)
def test_no_count_probability_limits(pulse):  # noqa
    assert p_zero(SYMMETRIC, AtomState.ground(), pulse, 0.0) == pytest.approx(1.0)
    assert p_zero(SYMMETRIC, AtomState.excited(), pulse, 0.0) == pytest.approx(1.0)
    assert p_zero(SYMMETRIC, AtomState.ground(), pulse, 60.0) == pytest.approx(0.0, abs=1e-10)
    values = p_zero(SYMMETRIC, AtomState(rho_ee=0.3), pulse, np.linspace(0.0, 10.0, 21))
    assert np.all(np.diff(values) <= 1e-12)


@pytest.mark.parametrize("pulse", PULSES)
def test_event_probabilities_normalized(pulse):  # noqa
    state = AtomState(rho_ee=0.35, rho_ge=0.2j)
    for t in (0.5, 3.0, 30.0):
        p = event_probs(SYMMETRIC, state, pulse, t)
        assert sum(p.values()) == pytest.approx(1.0, abs=1e-8)
        assert all(value >= -1e-12 for value in p.values())


def test_decoupled_atom():  # noqa
    params = AtomParams(gamma1=0.0, gamma2=0.0)
    pulse = ExponentialPulse(omega=1.0)
    state = AtomState.ground()
    assert p_zero(params, state, pulse, 2.0) == pytest.approx(np.exp(-2.0))
    assert event_prob(params, state, pulse, "R", 2.0) == pytest.approx(1 - np.exp(-2.0))
    assert event_prob(params, state, pulse, "L", 2.0) == pytest.approx(0.0, abs=1e-14)


def test_mean_counts_conservation():  # noqa
    pulse = GaussianPulse(center=3.0, width=1.0)
    for rho_ee in (0.0, 0.5, 1.0):
        right, left = mean_counts(SYMMETRIC, AtomState(rho_ee=rho_ee), pulse, 60.0)
        assert right + left == pytest.approx(1.0 + rho_ee, abs=1e-8)


@pytest.mark.parametrize("pulse", PULSES)
def test_first_count_density_integrates_to_one(pulse):  # noqa
    p1, tau1 = first_count(SYMMETRIC, AtomState.ground(), pulse)
    end = pulse.horizon + 40.0
    total = integrate_1d(p1, 0.0, end, points=pulse.breakpoints)
    assert total.real == pytest.approx(1.0, abs=1e-7)
    mean = integrate_1d(lambda t: t * p1(t), 0.0, end, points=pulse.breakpoints)
    assert mean.real == pytest.approx(tau1, abs=1e-6)


def test_ground_atom_first_count_time():  # noqa
    _, tau1 = first_count(SYMMETRIC, AtomState.ground(), ExponentialPulse(omega=0.5))
    assert tau1 == pytest.approx(10.0 / 3.0, abs=1e-6)
    assert delay_time(SYMMETRIC, ExponentialPulse(omega=0.5)) == pytest.approx(2.0 - 10.0 / 3.0, abs=1e-6)


def test_excited_atom_count_times():  # noqa
    pulse = ExponentialPulse(omega=2.0)
    _, tau1 = first_count(SYMMETRIC, AtomState.excited(), pulse)
    p2, tau2 = second_count(SYMMETRIC, pulse)
    assert tau1 == pytest.approx(1.0 / 3.0, abs=1e-6)
    assert tau2 == pytest.approx(17.0 / 18.0, abs=1e-6)
    total = integrate_1d(p2, 0.0, pulse.horizon + 40.0)
    assert total.real == pytest.approx(1.0, abs=1e-7)


def test_second_count_needs_excited_atom():  # noqa
    pulse = ExponentialPulse(omega=2.0)
    _, tau2 = second_count(SYMMETRIC, pulse, AtomState.excited())
    assert tau2 == pytest.approx(17.0 / 18.0, abs=1e-6)
    for state in (AtomState.ground(), AtomState(rho_ee=0.5)):
        with pytest.raises(ModelConfigurationError):
            second_count(SYMMETRIC, pulse, state)


def test_two_count_density_patterns():  # noqa
    pulse = GaussianPulse(center=2.0, width=0.8)
    state = AtomState.excited()
    parts = [two_count_density(SYMMETRIC, state, pulse, p, 0.5, 1.5) for p in ("RR", "LR", "RL", "LL")]
    assert two_count_density(SYMMETRIC, state, pulse, "all", 0.5, 1.5) == pytest.approx(sum(parts))
    # the ground state contributes nothing to two counts
    assert two_count_density(SYMMETRIC, AtomState.ground(), pulse, "RR", 0.5, 1.5) == 0.0
    # after the second count nothing else can happen
    assert two_count_density(SYMMETRIC, state, pulse, "LR", 0.5, 1.5, 9.0) == pytest.approx(parts[1])


def test_density_arguments():  # noqa
    pulse = ExponentialPulse(omega=1.0)
    state = AtomState.ground()
    with pytest.raises(ModelConfigurationError):
        one_count_density(SYMMETRIC, state, pulse, "R", 2.0, 1.0)
    with pytest.raises(ModelConfigurationError):
        one_count_density(SYMMETRIC, state, pulse, "B", 0.5, 1.0)
    with pytest.raises(ModelConfigurationError):
        two_count_density(SYMMETRIC, state, pulse, "RR", 1.0, 0.5)
    with pytest.raises(ModelConfigurationError):
        two_count_density(SYMMETRIC, state, pulse, "RB", 0.5, 1.0)
    with pytest.raises(ModelConfigurationError):
        event_prob(SYMMETRIC, state, pulse, "RRR", 1.0)
