"""Various utilities."""

from ._error import (
    PhotonqInternalError,
    ModelConfigurationError,
    NumericalError,
    EnumerationBudgetError,
    ConsistencyError,
    RunConfigurationError,
)
from ._logging import LOGGER
from ._parallel import worker_count, parallel_map
from ._io import write_csv, write_json
from . import _const as const

__all__ = (
    "PhotonqInternalError",
    "ModelConfigurationError",
    "NumericalError",
    "EnumerationBudgetError",
    "ConsistencyError",
    "RunConfigurationError",
    "LOGGER",
    "worker_count",
    "parallel_map",
    "write_csv",
    "write_json",
    "const",
)
