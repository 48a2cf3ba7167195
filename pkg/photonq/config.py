"""Run configuration of the command line tool, read from a single JSON document.

Example:
```
{
  "model": {"gamma1": 0.5, "gamma2": 0.5, "delta0": 0.0},
  "pulse": {"kind": "exponential", "omega": 0.5},
  "state": {"rho_ee": 0.0},
  "grid": {"t_min": 0.0, "t_max": 20.0, "n_points": 41},
  "seed": 1234
}
```
Unknown keys are rejected at every level.
"""

import json
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .analytic import AtomParams, AtomState, tla_model
from .model import DensityMatrix, PulseSpec, SystemModel, make_model, make_record, unit_vector
from .utils import LOGGER, RunConfigurationError

__all__ = (
    "AtomModelSpec",
    "MatrixModelSpec",
    "StateSpec",
    "GridSpec",
    "SamplerSection",
    "ConvergeSection",
    "DensitiesSection",
    "TimesSection",
    "EventsSection",
    "RunConfig",
    "ResolvedRun",
    "load_config",
)


def _entry(x) -> complex:
    # numbers or [re, im] pairs
    if isinstance(x, list | tuple):
        if len(x) != 2:
            raise ValueError(f"complex entries must be [re, im], got {x}")
        return complex(x[0], x[1])
    return complex(x)


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class AtomModelSpec(_Section):
    """Two-level atom in units of choice."""

    gamma1: float
    gamma2: float
    delta0: float = 0.0

    def params(self) -> AtomParams:  # noqa
        return AtomParams.create(self.gamma1, self.gamma2, self.delta0)


class MatrixModelSpec(_Section):
    """Arbitrary small system given by its matrices; complex entries are [re, im] pairs."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    dim: int
    H: np.ndarray
    L1: np.ndarray
    L2: np.ndarray

    @field_validator("H", "L1", "L2", mode="before")
    @classmethod
    def _validate_matrix(cls, value) -> np.ndarray:
        try:
            return np.array([[_entry(x) for x in row] for row in value], dtype=complex)
        except TypeError as e:
            raise ValueError(f"not a matrix: {value}") from e

    @model_validator(mode="after")
    def _validate_dim(self) -> "MatrixModelSpec":
        for name in ("H", "L1", "L2"):
            if getattr(self, name).shape != (self.dim, self.dim):
                raise ValueError(f"{name} must be {self.dim} x {self.dim}")
        return self


class StateSpec(_Section):
    """Initial state: `rho_ee`/`rho_ge` for atoms, `psi` or `rho` for matrix models."""

    rho_ee: float | None = None
    rho_ge: tuple[float, float] | None = None
    psi: list[float | tuple[float, float]] | None = None
    rho: list[list[float | tuple[float, float]]] | None = None

    @model_validator(mode="after")
    def _validate_form(self) -> "StateSpec":
        forms = [self.rho_ee is not None, self.psi is not None, self.rho is not None]
        if sum(forms) != 1:
            raise ValueError("give exactly one of rho_ee, psi or rho")
        if self.rho_ge is not None and self.rho_ee is None:
            raise ValueError("rho_ge needs rho_ee")
        return self

    def atom_state(self) -> AtomState:
        """The state as `AtomState`, only for the rho_ee form."""
        if self.rho_ee is None:
            raise RunConfigurationError("an atom model needs its state as rho_ee (and rho_ge)")
        rho_ge = complex(*self.rho_ge) if self.rho_ge is not None else 0j
        try:
            return AtomState(rho_ee=self.rho_ee, rho_ge=rho_ge)
        except ValidationError as e:
            raise RunConfigurationError(f"invalid atom state: {e}") from e

    def initial(self, dim: int) -> np.ndarray | DensityMatrix:
        """The state as a unit vector or `DensityMatrix` of dimension `dim`."""
        if self.rho_ee is not None:
            if dim != 2:
                raise RunConfigurationError("rho_ee describes a two-level system")
            return self.atom_state().density()
        if self.psi is not None:
            psi = np.array([_entry(x) for x in self.psi], dtype=complex)
            if psi.shape != (dim,):
                raise RunConfigurationError(f"psi must have {dim} entries")
            return unit_vector(psi)
        rho = np.array([[_entry(x) for x in row] for row in self.rho], dtype=complex)
        if rho.shape != (dim, dim):
            raise RunConfigurationError(f"rho must be {dim} x {dim}")
        return DensityMatrix.from_entries(rho)


class GridSpec(_Section):
    """Evaluation times, `n_points` equally spaced on [t_min, t_max]."""

    t_min: float = 0.0
    t_max: float
    n_points: int = 41

    @model_validator(mode="after")
    def _validate_grid(self) -> "GridSpec":
        if self.n_points < 2:
            raise ValueError(f"n_points must be at least 2, got {self.n_points}")
        if not self.t_max > self.t_min >= 0:
            raise ValueError(f"need t_max > t_min >= 0, got [{self.t_min}, {self.t_max}]")
        return self

    def times(self) -> np.ndarray:  # noqa
        return np.linspace(self.t_min, self.t_max, self.n_points)

    def scaled(self, factor: float) -> "GridSpec":  # noqa
        return GridSpec(
            t_min=self.t_min * factor, t_max=self.t_max * factor, n_points=self.n_points
        )


class SamplerSection(_Section):
    """Monte Carlo settings, the seed is the top level `seed`."""

    n_samples: int = 100_000
    tau: float = 5e-3
    t_max: float | None = None
    block_mode: Literal["exact", "first-order"] = "exact"
    max_events: int = 4
    chunk_size: int = 8192
    n_sigma: float = 4.0


class ConvergeSection(_Section):
    """Conditional pair convergence study."""

    taus: list[float] = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
    events: list[tuple[float, Literal["R", "L"]]] = []
    horizon: float = 2.0
    block_mode: Literal["exact", "first-order"] = "first-order"
    ratio_min: float = 1.7
    ratio_max: float = 2.3
    balance_tol: float = 1e-10


class DensitiesSection(_Section):  # noqa
    max_counts: Literal[1, 2] = 2


class TimesSection(_Section):  # noqa
    second: bool = False
    monte_carlo: bool = False


class EventsSection(_Section):  # noqa
    m_max: int = 2


class RunConfig(_Section):
    """The complete configuration document."""

    model: AtomModelSpec | MatrixModelSpec
    pulse: PulseSpec
    state: StateSpec
    grid: GridSpec
    tolerance: float = 1e-6
    seed: int | None = None
    normalize_gamma: bool = False
    output: str | None = None
    sampler: SamplerSection = SamplerSection()
    converge: ConvergeSection = ConvergeSection()
    densities: DensitiesSection = DensitiesSection()
    times: TimesSection = TimesSection()
    events: EventsSection = EventsSection()

    @field_validator("tolerance")
    @classmethod
    def _validate_tolerance(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"tolerance must be positive, got {value}")
        return value

    def resolve(self) -> "ResolvedRun":
        """Build the model objects, rescaled to units of Gamma when `normalize_gamma` is set."""
        atom = self.model.params() if isinstance(self.model, AtomModelSpec) else None
        if atom is not None:
            model = tla_model(atom)
        else:
            model = make_model(self.model.H, self.model.L1, self.model.L2)
        pulse = self.pulse
        grid = self.grid
        rate = 1.0
        if self.normalize_gamma:
            rate = model.decay_rate()
            if not rate > 0:
                raise RunConfigurationError("normalize_gamma needs a coupled system")
            model = model.rescaled(rate)
            pulse = pulse.scaled(rate)
            grid = grid.scaled(rate)
            atom = atom.scaled(rate) if atom is not None else None
            LOGGER.debug(f"rates normalized by Gamma = {rate}")
        return ResolvedRun(
            config=self,
            model=model,
            atom=atom,
            atom_state=self.state.atom_state() if atom is not None else None,
            initial=self.state.initial(model.dim),
            pulse=pulse,
            grid=grid,
            time_unit=rate,
        )


class ResolvedRun:
    """Model objects of a `RunConfig`, times in the (possibly normalized) unit."""

    def __init__(self, config, model, atom, atom_state, initial, pulse, grid, time_unit):
        """Constructor.

        Args:
            config (RunConfig): the source document.
            model (SystemModel): the system.
            atom (AtomParams | None): atom parameters when the model is a two-level atom.
            atom_state (AtomState | None): the atom's initial state.
            initial (np.ndarray | DensityMatrix): initial state for the generic engines.
            pulse (Pulse): the input pulse.
            grid (GridSpec): evaluation times.
            time_unit (float): factor converting configured times to the run's unit.
        """
        self.config = config
        self.model: SystemModel = model
        self.atom = atom
        self.atom_state = atom_state
        self.initial = initial
        self.pulse = pulse
        self.grid = grid
        self.time_unit = time_unit

    def record(self, events, horizon: float):
        """A detection record with configured times converted to the run's unit."""
        unit = self.time_unit
        return make_record([(t * unit, side) for t, side in events], horizon * unit)


def load_config(path: str | Path, **overrides) -> RunConfig:
    """Read and validate a configuration document.

    Args:
        path (str | Path): JSON file.
        overrides: top level keys replacing those of the document (None values are ignored).

    Raises:
        RunConfigurationError: if the file cannot be read or does not validate.

    Returns:
        RunConfig: the configuration.
    """
    try:
        with open(Path(path).expanduser(), encoding="utf-8") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise RunConfigurationError(f"cannot read configuration {path}: {e}") from e
    if not isinstance(document, dict):
        raise RunConfigurationError("the configuration must be a JSON object")
    document.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise RunConfigurationError(f"invalid configuration {path}: {e}") from e
