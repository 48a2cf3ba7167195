"""Conditional pairs of random systems against explicit propagator products."""

import numpy as np
import pytest
from scipy.integrate import quad_vec
from scipy.linalg import expm

from photonq.continuum import (
    conditional_pair,
    evolve_no_count,
    exclusive_density,
    no_count_prob,
)
from photonq.model import (
    GaussianPulse,
    initial_pair,
    make_model,
    make_record,
    pair_weight,
)

PULSE = GaussianPulse(center=1.5, width=0.5)
MODELS = [(d, seed) for d in (2, 3, 4) for seed in (11, 12)]
RECORDS = [[], [(0.4, "R")], [(0.4, "L"), (1.1, "L")], [(0.4, "R"), (1.1, "L")]]


def _random_system(d, seed):  # noqa
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    L1 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    L2 = 0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return make_model((A + A.conj().T) / 4, L1, L2), psi / np.linalg.norm(psi)


def _product_pair(model, pulse, events, psi0, horizon):
    # alpha is a product of no-count propagators and jump operators, beta adds the
    # absorbed photon source integrated through the same propagators
    G = model.H - 0.5j * model.decay_operator()

    def T(t):
        return expm(-1j * G * t)

    absorb = model.L1.conj().T
    alpha, beta, start = np.asarray(psi0, dtype=complex), np.zeros(len(psi0), complex), 0.0
    for end, side in [*events, (horizon, None)]:
        alpha_start = alpha

        def source(s, a=alpha_start, t0=start, t1=end):
            return T(t1 - s) @ (-complex(pulse.amplitude(s)) * (absorb @ (T(s - t0) @ a)))

        integral, _ = quad_vec(source, start, end, epsabs=1e-12, epsrel=1e-10)
        alpha, beta = T(end - start) @ alpha, T(end - start) @ beta + integral
        if side == "R":
            xi = complex(pulse.amplitude(end))
            alpha, beta = model.L1 @ alpha, model.L1 @ beta + xi * alpha
        elif side == "L":
            alpha, beta = model.L2 @ alpha, model.L2 @ beta
        start = end
    return alpha, beta


@pytest.mark.parametrize("d, seed", MODELS)
@pytest.mark.parametrize("events", RECORDS)
def test_pair_is_propagator_product(d, seed, events):  # noqa
    model, psi = _random_system(d, seed)
    horizon = 2.0
    pair = conditional_pair(model, PULSE, make_record(events, horizon), psi)
    alpha, beta = _product_pair(model, PULSE, events, psi, horizon)
    assert np.allclose(pair.alpha, alpha, atol=1e-10)
    assert np.allclose(pair.beta, beta, atol=1e-7)
    expected = np.vdot(alpha, alpha).real * float(PULSE.tail(horizon)) + np.vdot(beta, beta).real
    if events:
        value = exclusive_density(model, PULSE, make_record(events, horizon), psi)
    else:
        value = no_count_prob(model, PULSE, horizon, psi)
    assert value == pytest.approx(expected, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("d, seed", MODELS)
def test_no_count_evolution_composes(d, seed):  # noqa
    model, psi = _random_system(d, seed)
    pair = initial_pair(psi)
    direct = evolve_no_count(model, PULSE, pair, 0.0, 2.5)
    halfway = evolve_no_count(model, PULSE, pair, 0.0, 0.9)
    composed = evolve_no_count(model, PULSE, halfway, 0.9, 2.5)
    assert np.allclose(composed.alpha, direct.alpha, atol=1e-10)
    assert np.allclose(composed.beta, direct.beta, atol=1e-7)
    assert composed.tail_weight == pytest.approx(direct.tail_weight)
    same = evolve_no_count(model, PULSE, direct, 2.5, 2.5)
    assert np.allclose(same.stacked(), direct.stacked())


@pytest.mark.parametrize("d, seed", MODELS)
def test_initial_pair(d, seed):  # noqa
    _, psi = _random_system(d, seed)
    pair = initial_pair(psi)
    assert np.array_equal(pair.alpha, psi)
    assert np.array_equal(pair.beta, np.zeros(d))
    assert pair.tail_weight == 1.0
    assert pair_weight(pair) == pytest.approx(1.0)


@pytest.mark.parametrize("d, seed", MODELS)
def test_global_phase_drops_out(d, seed):  # noqa
    model, psi = _random_system(d, seed)
    phase = np.exp(0.7j)
    record = make_record([(0.5, "L"), (1.2, "R")], 2.0)
    pair = conditional_pair(model, PULSE, record, psi)
    rotated = conditional_pair(model, PULSE, record, phase * psi)
    assert np.allclose(rotated.stacked(), phase * pair.stacked(), atol=1e-9)
    assert exclusive_density(model, PULSE, record, phase * psi) == pytest.approx(
        exclusive_density(model, PULSE, record, psi), rel=1e-9
    )
    assert no_count_prob(model, PULSE, 2.0, phase * psi) == pytest.approx(
        no_count_prob(model, PULSE, 2.0, psi), rel=1e-9
    )
