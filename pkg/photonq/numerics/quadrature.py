"""Adaptive one dimensional quadrature of complex valued integrands."""

import warnings
from collections.abc import Callable, Iterable

from pydantic import BaseModel, ConfigDict, field_validator
from scipy.integrate import IntegrationWarning, quad

from ..utils import LOGGER, ModelConfigurationError, NumericalError

__all__ = ("QuadratureSpec", "integrate_1d", "DEFAULT_SPEC", "ODE_SPEC")


class QuadratureSpec(BaseModel):
    """Accuracy contract shared by the quadrature and ODE kernels.

    `integrate_1d` logs results whose error estimate exceeds `target(value)` and raises once
    it exceeds `fail_factor * target(value)`. The default factor of 10 absorbs the combined
    estimate of the real and imaginary parts, set it to 1 for a strict contract.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 200
    fail_factor: float = 10.0

    @field_validator("abs_tol", "rel_tol")
    @classmethod
    def _validate_tolerance(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"tolerances must be positive, got {value}")
        return value

    @field_validator("max_subdivisions")
    @classmethod
    def _validate_subdivisions(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {value}")
        return value

    @field_validator("fail_factor")
    @classmethod
    def _validate_fail_factor(cls, value: float) -> float:
        if not value >= 1:
            raise ValueError(f"fail_factor must be >= 1, got {value}")
        return value

    def target(self, value: complex) -> float:
        """Error bound the contract allows for an integral of size `value`."""
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadratureSpec()
# the engines integrate smooth linear systems and need headroom below DEFAULT_SPEC
ODE_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11)


def integrate_1d(
    f: Callable[[float], complex],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    points: Iterable[float] = (),
) -> complex:
    """Integrate a complex valued function of one real variable over [a, b].

    Args:
        f (Callable[[float], complex]): integrand, piecewise smooth on [a, b].
        a (float): lower limit.
        b (float): upper limit, must satisfy `a <= b`.
        spec (QuadratureSpec | None, optional): accuracy contract. Defaults to `DEFAULT_SPEC`.
        points (Iterable[float], optional): known kinks or discontinuities of `f`. Defaults to ().

    Raises:
        ModelConfigurationError: if `b < a`.
        NumericalError: if the error estimate exceeds `spec.fail_factor` times the target.

    Returns:
        complex: the integral.
    """
    spec = spec if spec is not None else DEFAULT_SPEC
    if b < a:
        raise ModelConfigurationError(f"integration limits out of order: [{a}, {b}]")
    if a == b:
        return 0j
    inner = sorted({float(p) for p in points if a < p < b}) or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, error = quad(
            f,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            points=inner,
            complex_func=True,
        )
    # real and imaginary parts carry separate error estimates
    error = abs(error)
    if error > spec.fail_factor * spec.target(value):
        raise NumericalError(
            f"quadrature on [{a}, {b}] did not converge: estimate {value}, error {error}"
        )
    if error > spec.target(value):
        LOGGER.debug(f"quadrature on [{a}, {b}] is close to tolerance: error {error:.3g}")
    return complex(value)
