"""Tests for the ODE kernels."""

import numpy as np
import pytest

from photonq.numerics import solve_linear_ode, solve_ode
from photonq.utils import ModelConfigurationError


def test_dense_solution():  # noqa
    solution = solve_ode(lambda t, y: -1j * y, np.array([1.0]), 0.0, 3.0, dense=True)
    assert solution.final[0] == pytest.approx(np.exp(-3j), abs=1e-10)
    t = np.array([0.0, 1.0, 2.5])
    assert np.allclose(solution(t)[0], np.exp(-1j * t), atol=1e-10)
    assert solution(1.0).shape == (1,)
    with pytest.raises(ModelConfigurationError):
        solution(4.0)


def test_breakpoints_split_segments():  # noqa
    def rhs(t, y):
        return np.array([1.0 if t < 1.0 else 0.0])

    solution = solve_ode(rhs, np.zeros(1), 0.0, 2.0, breakpoints=[1.0], dense=True)
    assert solution.final[0].real == pytest.approx(1.0, abs=1e-10)
    assert solution(0.5)[0].real == pytest.approx(0.5, abs=1e-10)


def test_linear_ode_with_source():  # noqa
    # v' = -v + 1, v(0) = 0 -> 1 - exp(-t)
    v = solve_linear_ode(np.array([[-1.0]]), lambda t: np.array([1.0]), np.zeros(1), 0.0, 2.0)
    assert v[0].real == pytest.approx(1 - np.exp(-2.0), abs=1e-10)


def test_reversed_interval():  # noqa
    with pytest.raises(ModelConfigurationError):
        solve_ode(lambda t, y: y, np.ones(1), 1.0, 0.0)
