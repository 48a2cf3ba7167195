"""Adaptive Runge-Kutta integration of (linear) ODE systems with complex state."""

from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..utils import ModelConfigurationError, NumericalError
from .quadrature import ODE_SPEC, QuadratureSpec

__all__ = ("DenseSolution", "solve_ode", "solve_linear_ode")


@dataclass(frozen=True)
class DenseSolution:
    """Piecewise continuous extension of an ODE solution.

    Segments are split at the breakpoints passed to `solve_ode`, so that discontinuities
    of the right hand side never fall inside an integration step.
    """

    knots: np.ndarray
    segments: tuple
    final: np.ndarray

    @property
    def t_start(self) -> float:  # noqa
        return float(self.knots[0])

    @property
    def t_end(self) -> float:  # noqa
        return float(self.knots[-1])

    def __call__(self, t: float | np.ndarray) -> np.ndarray:
        """Evaluate the solution.

        Args:
            t (float | np.ndarray): time(s) inside the integrated interval.

        Returns:
            np.ndarray: array of shape (n_components,) for scalar `t`, otherwise (n_components, len(t)).
        """
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if not self.segments:
            out = np.repeat(self.final[:, None], len(t), axis=1)
            return out[:, 0] if scalar else out
        # a little slack for round-off at the interval ends
        slack = 1e-12 * max(1.0, abs(self.t_end))
        if np.any(t < self.t_start - slack) or np.any(t > self.t_end + slack):
            raise ModelConfigurationError(
                f"time outside of solution range [{self.t_start}, {self.t_end}]"
            )
        index = np.searchsorted(self.knots, t, side="right") - 1
        index = np.clip(index, 0, len(self.segments) - 1)
        out = np.empty((self.final.shape[0], len(t)), dtype=complex)
        for k in np.unique(index):
            mask = index == k
            out[:, mask] = self.segments[k](t[mask])
        return out[:, 0] if scalar else out


def solve_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t0: float,
    t1: float,
    spec: QuadratureSpec | None = None,
    breakpoints: Iterable[float] = (),
    dense: bool = False,
) -> DenseSolution:
    """Integrate y' = rhs(t, y) from t0 to t1 with an embedded Runge-Kutta scheme (DOP853).

    Args:
        rhs (Callable[[float, np.ndarray], np.ndarray]): right hand side.
        y0 (np.ndarray): initial (complex) state.
        t0 (float): initial time.
        t1 (float): final time, `t1 >= t0`.
        spec (QuadratureSpec | None, optional): tolerances. Defaults to `ODE_SPEC`.
        breakpoints (Iterable[float], optional): times at which `rhs` may be discontinuous. Defaults to ().
        dense (bool, optional): whether to keep a continuous extension. Defaults to False.

    Raises:
        ModelConfigurationError: if `t1 < t0`.
        NumericalError: if the integrator fails (e.g. step size underflow).

    Returns:
        DenseSolution: the solution, `final` holds y(t1).
    """
    spec = spec if spec is not None else ODE_SPEC
    if t1 < t0:
        raise ModelConfigurationError(f"integration interval out of order: [{t0}, {t1}]")
    y = np.array(y0, dtype=complex)
    knots = [float(t0), *sorted({float(b) for b in breakpoints if t0 < b < t1})]
    if t1 > t0:
        knots.append(float(t1))
    segments = []
    for a, b in zip(knots[:-1], knots[1:]):
        result = solve_ivp(
            rhs,
            (a, b),
            y,
            method="DOP853",
            rtol=spec.rel_tol,
            atol=spec.abs_tol,
            dense_output=dense,
        )
        if not result.success:
            raise NumericalError(f"ODE integration failed on [{a}, {b}]: {result.message}")
        y = result.y[:, -1]
        if dense:
            segments.append(result.sol)
    return DenseSolution(knots=np.array(knots), segments=tuple(segments), final=y)


def solve_linear_ode(
    A: np.ndarray | Callable[[float], np.ndarray],
    f: Callable[[float], np.ndarray] | None,
    v0: np.ndarray,
    t0: float,
    t1: float,
    spec: QuadratureSpec | None = None,
    breakpoints: Iterable[float] = (),
) -> np.ndarray:
    """Solve v' = A(t) v + f(t) on [t0, t1].

    Args:
        A (np.ndarray | Callable[[float], np.ndarray]): constant matrix or matrix valued function.
        f (Callable[[float], np.ndarray] | None): inhomogeneity, None for a homogeneous system.
        v0 (np.ndarray): initial vector.
        t0 (float): initial time.
        t1 (float): final time.
        spec (QuadratureSpec | None, optional): tolerances. Defaults to `ODE_SPEC`.
        breakpoints (Iterable[float], optional): discontinuities of `A` or `f`. Defaults to ().

    Returns:
        np.ndarray: v(t1).
    """
    if callable(A):
        matrix = A
    else:
        constant = np.asarray(A, dtype=complex)

        def matrix(_t):
            return constant

    if f is None:

        def rhs(t, y):
            return matrix(t) @ y

    else:

        def rhs(t, y):
            return matrix(t) @ y + f(t)

    return solve_ode(rhs, v0, t0, t1, spec=spec, breakpoints=breakpoints).final
