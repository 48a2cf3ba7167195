"""Matrix exponentials of small dense matrices."""

import numpy as np
from scipy.linalg import expm, schur

from ..utils import ModelConfigurationError
from ..utils._const import MAX_INTERACTION_DIMENSION

__all__ = ("matrix_exponential", "Propagator", "is_normal")


def _as_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ModelConfigurationError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_INTERACTION_DIMENSION:
        raise ModelConfigurationError(
            f"dimension {A.shape[0]} exceeds the supported maximum {MAX_INTERACTION_DIMENSION}"
        )
    return A


def is_normal(A: np.ndarray, tol: float = 1e-12) -> bool:
    """Whether `A` commutes with its adjoint (relative to its squared norm)."""
    A = np.asarray(A, dtype=complex)
    scale = np.linalg.norm(A, 2) ** 2
    if scale == 0.0:
        return True
    Ah = A.conj().T
    return float(np.max(np.abs(A @ Ah - Ah @ A))) <= tol * scale


def matrix_exponential(A: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """Compute exp(scale * A).

    Normal matrices are exponentiated through their (diagonal) Schur form, everything else
    through scaling and squaring with Pade approximants.

    Args:
        A (np.ndarray): square complex matrix, dimension at most 64.
        scale (float, optional): multiplier of `A`. Defaults to 1.0.

    Raises:
        ModelConfigurationError: if `A` is not square or too large.

    Returns:
        np.ndarray: the matrix exponential.
    """
    A = _as_square(A)
    if is_normal(A):
        T, Z = schur(A, output="complex")
        return (Z * np.exp(scale * np.diag(T))) @ Z.conj().T
    return expm(scale * A)


class Propagator:
    """The one parameter family exp(t * A), with the decomposition of `A` computed once."""

    def __init__(self, A: np.ndarray):
        """Constructor.

        Args:
            A (np.ndarray): square generator.
        """
        self._A = _as_square(A)
        self._normal = is_normal(self._A)
        if self._normal:
            T, Z = schur(self._A, output="complex")
            self._eigenvalues = np.diag(T)
            self._Z = Z
            self._Zh = Z.conj().T

    @property
    def generator(self) -> np.ndarray:  # noqa
        return self._A

    def __call__(self, t: float) -> np.ndarray:
        """The propagator exp(t * A)."""
        if self._normal:
            return (self._Z * np.exp(t * self._eigenvalues)) @ self._Zh
        return expm(t * self._A)

    def apply(self, t: float, v: np.ndarray) -> np.ndarray:
        """Apply exp(t * A) to a vector (or the columns of a matrix)."""
        if self._normal:
            coeffs = self._Zh @ v
            factors = np.exp(t * self._eigenvalues)
            if coeffs.ndim == 2:
                factors = factors[:, None]
            return self._Z @ (factors * coeffs)
        return expm(t * self._A) @ v
