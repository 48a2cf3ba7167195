"""The scattering system: Hamiltonian, right/left couplings and the no-count generator."""

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..utils import ModelConfigurationError
from ..utils._const import HERMITIAN_TOL, MAX_DIMENSION

__all__ = ("SystemModel", "EffectiveGenerator", "make_model", "effective_generator")


def _frozen_matrix(value) -> np.ndarray:
    matrix = np.array(value, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] > MAX_DIMENSION:
        raise ValueError(f"dimension {matrix.shape[0]} exceeds {MAX_DIMENSION}")
    matrix.setflags(write=False)
    return matrix


class SystemModel(BaseModel):
    """A small quantum system coupled to the right (L1) and left (L2) moving field.

    Use `make_model` to construct one, it reports problems as `ModelConfigurationError`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hamiltonian: np.ndarray
    coupling_right: np.ndarray
    coupling_left: np.ndarray

    @field_validator("hamiltonian", "coupling_right", "coupling_left", mode="before")
    @classmethod
    def _validate_matrix(cls, value) -> np.ndarray:
        return _frozen_matrix(value)

    @model_validator(mode="after")
    def _validate_model(self) -> "SystemModel":
        shapes = {
            self.hamiltonian.shape,
            self.coupling_right.shape,
            self.coupling_left.shape,
        }
        if len(shapes) != 1:
            raise ValueError(f"matrix dimensions do not agree: {sorted(shapes)}")
        deviation = float(np.max(np.abs(self.hamiltonian - self.hamiltonian.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise ValueError(f"hamiltonian is not Hermitian (deviation {deviation:.3g})")
        return self

    @property
    def dim(self) -> int:  # noqa
        return self.hamiltonian.shape[0]

    @property
    def H(self) -> np.ndarray:  # noqa
        return self.hamiltonian

    @property
    def L1(self) -> np.ndarray:  # noqa
        return self.coupling_right

    @property
    def L2(self) -> np.ndarray:  # noqa
        return self.coupling_left

    def decay_operator(self) -> np.ndarray:
        """L1^dagger L1 + L2^dagger L2."""
        L1, L2 = self.L1, self.L2
        return L1.conj().T @ L1 + L2.conj().T @ L2

    def decay_rate(self) -> float:
        """Largest eigenvalue of the decay operator (Gamma1 + Gamma2 for a two-level atom)."""
        return float(np.max(np.linalg.eigvalsh(self.decay_operator())))

    def swapped(self) -> "SystemModel":
        """The same system with the right and left couplings exchanged."""
        return make_model(self.H, self.L2, self.L1)

    def rescaled(self, rate: float) -> "SystemModel":
        """Express the model with time measured in units of 1/`rate`."""
        return make_model(self.H / rate, self.L1 / np.sqrt(rate), self.L2 / np.sqrt(rate))


class EffectiveGenerator(BaseModel):
    """G = H - (i/2)(L1^dagger L1 + L2^dagger L2), no-count evolution is exp(-iGt)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _validate_matrix(cls, value) -> np.ndarray:
        return _frozen_matrix(value)

    @model_validator(mode="after")
    def _validate_dissipative(self) -> "EffectiveGenerator":
        G = self.matrix
        # the anti-Hermitian part must not amplify
        gain = np.linalg.eigvalsh((G - G.conj().T) / 2j)
        if np.max(gain) > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(G)))):
            raise ValueError("effective generator has an amplifying anti-Hermitian part")
        return self

    def propagator_generator(self) -> np.ndarray:
        """-iG, the generator of the no-count propagator."""
        return -1j * self.matrix


def make_model(H, L1, L2) -> SystemModel:
    """Build a validated `SystemModel`.

    A Hamiltonian that is Hermitian up to round-off (1e-12) is symmetrized.

    Args:
        H: Hamiltonian, square (complex) array-like.
        L1: coupling to the right moving (photon carrying) field.
        L2: coupling to the left moving field.

    Raises:
        ModelConfigurationError: on non-square or mismatched matrices, or a non-Hermitian `H`.

    Returns:
        SystemModel: the model.
    """
    try:
        H = np.array(H, dtype=complex)
        if H.ndim == 2 and H.shape[0] == H.shape[1]:
            deviation = np.max(np.abs(H - H.conj().T)) if H.size else 0.0
            if deviation <= HERMITIAN_TOL:
                H = (H + H.conj().T) / 2
        return SystemModel(hamiltonian=H, coupling_right=L1, coupling_left=L2)
    except ValidationError as e:
        raise ModelConfigurationError(f"invalid system model: {e}") from e


def effective_generator(model: SystemModel) -> EffectiveGenerator:
    """The effective (non-Hermitian) generator of the model.

    Args:
        model (SystemModel): the model.

    Returns:
        EffectiveGenerator: G = H - (i/2)(L1^dagger L1 + L2^dagger L2).
    """
    return EffectiveGenerator(matrix=model.H - 0.5j * model.decay_operator())
