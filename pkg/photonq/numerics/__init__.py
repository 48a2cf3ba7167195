"""Numerical kernels: matrix exponential, quadrature and linear ODE integration."""

from .expm import matrix_exponential, Propagator, is_normal
from .quadrature import QuadratureSpec, integrate_1d, DEFAULT_SPEC, ODE_SPEC
from .ode import DenseSolution, solve_ode, solve_linear_ode

__all__ = (
    "matrix_exponential",
    "Propagator",
    "is_normal",
    "QuadratureSpec",
    "integrate_1d",
    "DEFAULT_SPEC",
    "ODE_SPEC",
    "DenseSolution",
    "solve_ode",
    "solve_linear_ode",
)
