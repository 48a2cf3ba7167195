"""Initial and a-priori states of the system."""

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..utils import ModelConfigurationError
from ..utils._const import HERMITIAN_TOL, PSD_TOL, TRACE_TOL

__all__ = ("DensityMatrix", "unit_vector", "pure_components", "as_density")


class DensityMatrix(BaseModel):
    """A d x d density matrix.

    States produced by truncated sums over detection records (a-priori states) carry
    `normalized=False`, their trace is the accumulated probability instead of 1.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    normalized: bool = True

    @field_validator("entries", mode="before")
    @classmethod
    def _validate_entries(cls, value) -> np.ndarray:
        rho = np.array(value, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise ValueError(f"expected a non-empty square matrix, got shape {rho.shape}")
        deviation = float(np.max(np.abs(rho - rho.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise ValueError(f"density matrix is not Hermitian (deviation {deviation:.3g})")
        rho = (rho + rho.conj().T) / 2
        rho.setflags(write=False)
        return rho

    @model_validator(mode="after")
    def _validate_state(self) -> "DensityMatrix":
        if np.min(np.linalg.eigvalsh(self.entries)) < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        if self.normalized and abs(self.trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {self.trace}, expected 1")
        return self

    @property
    def dim(self) -> int:  # noqa
        return self.entries.shape[0]

    @property
    def trace(self) -> float:  # noqa
        return float(np.real(np.trace(self.entries)))

    @classmethod
    def from_vector(cls, psi) -> "DensityMatrix":
        """The pure state |psi><psi| of a unit vector."""
        psi = unit_vector(psi)
        return cls(entries=np.outer(psi, psi.conj()))

    @classmethod
    def from_entries(cls, entries, normalized: bool = True) -> "DensityMatrix":
        """Validated construction that reports problems as `ModelConfigurationError`."""
        try:
            return cls(entries=entries, normalized=normalized)
        except ValidationError as e:
            raise ModelConfigurationError(f"invalid density matrix: {e}") from e

    def population(self, index: int) -> float:
        """Diagonal entry `index`."""
        return float(np.real(self.entries[index, index]))


def unit_vector(psi) -> np.ndarray:
    """Validate a state vector.

    Raises:
        ModelConfigurationError: if `psi` is not a unit vector.
    """
    psi = np.array(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if psi.size == 0 or abs(norm - 1.0) > TRACE_TOL:
        raise ModelConfigurationError(f"state vector must have unit norm, got {norm}")
    return psi


def pure_components(initial: "np.ndarray | DensityMatrix") -> list[tuple[float, np.ndarray]]:
    """Decompose an initial state into weighted unit vectors.

    Args:
        initial (np.ndarray | DensityMatrix): unit vector or density matrix.

    Returns:
        list[tuple[float, np.ndarray]]: (probability, vector) pairs with nonzero probability.
    """
    if isinstance(initial, DensityMatrix):
        weights, vectors = np.linalg.eigh(initial.entries)
        return [
            (float(w), vectors[:, k])
            for k, w in enumerate(weights)
            if w > PSD_TOL
        ]
    return [(1.0, unit_vector(initial))]


def as_density(initial: "np.ndarray | DensityMatrix") -> np.ndarray:
    """The density matrix entries of an initial state (vector or `DensityMatrix`)."""
    if isinstance(initial, DensityMatrix):
        return np.array(initial.entries)
    psi = unit_vector(initial)
    return np.outer(psi, psi.conj())
