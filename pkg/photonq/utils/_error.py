class PhotonqInternalError(Exception):
    pass


class ModelConfigurationError(ValueError):
    """Invalid model, pulse, state, record or parameter value."""


class NumericalError(ArithmeticError):
    """A numerical kernel failed to meet its accuracy contract."""


class EnumerationBudgetError(RuntimeError):
    pass


class ConsistencyError(Exception):
    """Two independent evaluations of the same quantity disagree beyond tolerance."""


class RunConfigurationError(ValueError):
    pass
