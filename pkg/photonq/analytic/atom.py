"""Two-level atom parameters and states in the basis [g, e]."""

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..model import DensityMatrix, SystemModel, make_model
from ..utils import ModelConfigurationError
from ..utils._const import TRACE_TOL

__all__ = ("AtomParams", "AtomState", "tla_model", "SIGMA_MINUS")

# |g><e| in the basis [g, e]
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)


class AtomParams(BaseModel):
    """Couplings of the atom to the right (`gamma1`) and left (`gamma2`) field and the detuning."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma1: float
    gamma2: float
    delta0: float = 0.0

    @field_validator("gamma1", "gamma2")
    @classmethod
    def _validate_rate(cls, value: float) -> float:
        if not value >= 0:
            raise ValueError(f"coupling rates must be nonnegative, got {value}")
        return float(value)

    @property
    def gamma(self) -> float:
        """Total decay rate gamma1 + gamma2."""
        return self.gamma1 + self.gamma2

    def scaled(self, rate: float) -> "AtomParams":
        """Parameters in units of `rate`."""
        return AtomParams(
            gamma1=self.gamma1 / rate, gamma2=self.gamma2 / rate, delta0=self.delta0 / rate
        )

    @classmethod
    def create(cls, gamma1: float, gamma2: float, delta0: float = 0.0) -> "AtomParams":
        """Validated construction that reports problems as `ModelConfigurationError`."""
        try:
            return cls(gamma1=gamma1, gamma2=gamma2, delta0=delta0)
        except ValidationError as e:
            raise ModelConfigurationError(f"invalid atom parameters: {e}") from e


class AtomState(BaseModel):
    """Initial atom state given by the excited population and the coherence <g|rho|e>."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    rho_ee: float
    rho_ge: complex = 0j

    @field_validator("rho_ge", mode="before")
    @classmethod
    def _validate_coherence(cls, value) -> complex:
        if isinstance(value, list | tuple):
            if len(value) != 2:
                raise ValueError(f"coherence must be given as [re, im], got {value}")
            return complex(value[0], value[1])
        return complex(value)

    @model_validator(mode="after")
    def _validate_state(self) -> "AtomState":
        if not -TRACE_TOL <= self.rho_ee <= 1.0 + TRACE_TOL:
            raise ValueError(f"rho_ee must lie in [0, 1], got {self.rho_ee}")
        if abs(self.rho_ge) ** 2 > self.rho_gg * self.rho_ee + TRACE_TOL:
            raise ValueError("atom state is not positive semidefinite")
        return self

    @property
    def rho_gg(self) -> float:  # noqa
        return 1.0 - self.rho_ee

    @classmethod
    def ground(cls) -> "AtomState":  # noqa
        return cls(rho_ee=0.0)

    @classmethod
    def excited(cls) -> "AtomState":  # noqa
        return cls(rho_ee=1.0)

    def is_excited(self) -> bool:
        """Whether the atom starts fully excited."""
        return abs(self.rho_ee - 1.0) <= TRACE_TOL

    def density(self) -> DensityMatrix:
        """The state as a 2 x 2 density matrix in the basis [g, e]."""
        rho = np.array(
            [[self.rho_gg, self.rho_ge], [np.conj(self.rho_ge), self.rho_ee]], dtype=complex
        )
        return DensityMatrix.from_entries(rho)


def tla_model(params: AtomParams) -> SystemModel:
    """The atom as a generic system: H = -(delta0 / 2) sigma_z, L_l = sqrt(gamma_l) sigma_-.

    Raises:
        ModelConfigurationError: on negative rates.
    """
    if params.gamma1 < 0 or params.gamma2 < 0:
        raise ModelConfigurationError("coupling rates must be nonnegative")
    return make_model(
        -0.5 * params.delta0 * _SIGMA_Z,
        np.sqrt(params.gamma1) * SIGMA_MINUS,
        np.sqrt(params.gamma2) * SIGMA_MINUS,
    )
