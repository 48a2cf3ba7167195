"""Tests for matrix exponentials and propagators."""

import numpy as np
import pytest
from scipy.linalg import expm

from photonq.numerics import Propagator, is_normal, matrix_exponential
from photonq.utils import ModelConfigurationError


def test_normal_path_matches_pade():  # noqa
    rng = np.random.default_rng(3)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = (A + A.conj().T) / 2
    assert is_normal(H)
    U = matrix_exponential(H, -0.7j)
    assert np.allclose(U, expm(-0.7j * H), atol=1e-12)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)


def test_non_normal_matrix():  # noqa
    A = np.array([[-0.5, 1.0], [0.0, -1.0]], dtype=complex)
    assert not is_normal(A)
    assert np.allclose(matrix_exponential(A, 2.0), expm(2.0 * A), atol=1e-12)


def test_propagator():  # noqa
    A = np.array([[-0.5 - 0.2j, 0.0], [0.3, -1.0]], dtype=complex)
    propagator = Propagator(A)
    assert np.allclose(propagator(1.3), expm(1.3 * A), atol=1e-12)
    v = np.array([1.0, 2.0j])
    assert np.allclose(propagator.apply(0.4, v), expm(0.4 * A) @ v, atol=1e-12)
    assert np.allclose(propagator(0.0), np.eye(2))


def test_rejects_non_square():  # noqa
    with pytest.raises(ModelConfigurationError):
        matrix_exponential(np.zeros((2, 3)))
