"""Count-resolved probabilities from a hierarchy of linear ODEs.

For every side pattern p (chronological tuple of sides) let X_p(t) be the integral, over
the ordered count times of p, of the stacked dyad v v^dagger with v = (alpha, beta). Then

    dX_p/dt = M(t) X_p + X_p M(t)^dagger + J_s(t) X_q(t) J_s(t)^dagger,

where p = q + (s,), M(t) is the stacked no-count generator and J_s(t) the stacked jump
rule. The probability of p up to t is tail(t) tr X_p^aa + tr X_p^bb. This evaluates the
nested time-ordered integrals of exclusive densities without nesting quadratures.
"""

from collections.abc import Iterable
from itertools import product

import numpy as np
import pandas as pd

from ..model import DensityMatrix, Pulse, Side, SystemModel, as_density, pattern_of
from ..numerics import ODE_SPEC, DenseSolution, QuadratureSpec, solve_ode
from ..utils import LOGGER, ModelConfigurationError
from .evolution import no_count_generator
from .jump import jump_rule

__all__ = (
    "side_patterns",
    "CountHierarchy",
    "event_probabilities",
    "total_probability",
    "apriori_continuous",
)

# the hierarchy grows as 2^m_max
MAX_COUNTS = 6


def side_patterns(m_max: int) -> list[tuple[Side, ...]]:
    """All chronological side tuples with at most `m_max` counts, ordered by length."""
    patterns = []
    for m in range(m_max + 1):
        patterns.extend(product((Side.RIGHT, Side.LEFT), repeat=m))
    return patterns


class CountHierarchy:
    """Solution of the count-resolved dyad hierarchy on [0, t_end]."""

    def __init__(
        self,
        model: SystemModel,
        pulse: Pulse,
        initial: np.ndarray | DensityMatrix,
        t_end: float,
        m_max: int = 2,
        grid: Iterable[float] = (),
        spec: QuadratureSpec | None = None,
    ):
        """Constructor, integrates the hierarchy eagerly.

        Args:
            model (SystemModel): the system.
            pulse (Pulse): the input pulse.
            initial (np.ndarray | DensityMatrix): initial system state.
            t_end (float): last time of interest.
            m_max (int, optional): largest number of counts. Defaults to 2.
            grid (Iterable[float], optional): extra restart points of the integrator. Defaults to ().
            spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.
        """
        if not 0 <= m_max <= MAX_COUNTS:
            raise ModelConfigurationError(f"m_max must be in [0, {MAX_COUNTS}], got {m_max}")
        if t_end < 0:
            raise ModelConfigurationError(f"t_end must be nonnegative, got {t_end}")
        self.model = model
        self.pulse = pulse
        self.m_max = m_max
        self.patterns = side_patterns(m_max)
        d = model.dim
        self._d = d
        index = {p: k for k, p in enumerate(self.patterns)}
        parents = np.array([index[p[:-1]] if p else -1 for p in self.patterns])
        sides = [p[-1] if p else None for p in self.patterns]
        right = np.array([s == Side.RIGHT for s in sides])
        left = np.array([s == Side.LEFT for s in sides])

        G = no_count_generator(model)
        absorb = model.L1.conj().T
        right_rule = jump_rule(model, Side.RIGHT)
        J_left = jump_rule(model, Side.LEFT).matrix(0.0)
        n = len(self.patterns)
        shape = (n, 2 * d, 2 * d)

        def rhs(t, y):
            X = y.reshape(shape)
            xi = complex(pulse.amplitude(t))
            M = np.zeros((2 * d, 2 * d), dtype=complex)
            M[:d, :d] = G
            M[d:, d:] = G
            M[d:, :d] = -xi * absorb
            MX = np.einsum("ij,pjk->pik", M, X)
            dX = MX + MX.conj().transpose(0, 2, 1)
            if n > 1:
                J_right = right_rule.matrix(xi)
                parent = X[parents[right]]
                dX[right] += J_right @ parent @ J_right.conj().T
                parent = X[parents[left]]
                dX[left] += J_left @ parent @ J_left.conj().T
            return dX.reshape(-1)

        X0 = np.zeros(shape, dtype=complex)
        X0[0, :d, :d] = as_density(initial)
        LOGGER.debug(f"count hierarchy: {n} patterns, d={d}, t_end={t_end:.4g}")
        self._solution: DenseSolution = solve_ode(
            rhs,
            X0.reshape(-1),
            0.0,
            t_end,
            spec=spec if spec is not None else ODE_SPEC,
            breakpoints=tuple(pulse.breakpoints) + tuple(grid),
            dense=True,
        )
        self._shape = shape

    @property
    def t_end(self) -> float:  # noqa
        return self._solution.t_end

    def dyads(self, t: float) -> np.ndarray:
        """The stacked dyads X_p(t), shape (n_patterns, 2d, 2d)."""
        return self._solution(t).reshape(self._shape)

    def probabilities(self, t: float) -> dict[str, float]:
        """Probability of every side pattern (labels latest count first) up to time `t`."""
        d = self._d
        X = self.dyads(t)
        tail = float(self.pulse.tail(t))
        traces = tail * np.einsum("pii->p", X[:, :d, :d]) + np.einsum("pii->p", X[:, d:, d:])
        return {pattern_of(p): float(v.real) for p, v in zip(self.patterns, traces)}

    def state(self, t: float) -> np.ndarray:
        """Record averaged state sum_p tail X_p^aa + X_p^bb at time `t`."""
        d = self._d
        X = self.dyads(t)
        sigma = float(self.pulse.tail(t)) * X[:, :d, :d].sum(axis=0) + X[:, d:, d:].sum(axis=0)
        return (sigma + sigma.conj().T) / 2


def event_probabilities(
    model: SystemModel,
    pulse: Pulse,
    initial: np.ndarray | DensityMatrix,
    times: Iterable[float],
    m_max: int = 2,
    spec: QuadratureSpec | None = None,
) -> pd.DataFrame:
    """Probability of each side pattern with at most `m_max` counts at every time of `times`.

    Returns:
        pd.DataFrame: column `t`, one column per pattern (`none`, `R`, `L`, `RR`, `LR`, ...) and `total`.
    """
    times = np.asarray(list(times), dtype=float)
    if times.size == 0:
        raise ModelConfigurationError("no evaluation times given")
    hierarchy = CountHierarchy(model, pulse, initial, float(np.max(times)), m_max, spec=spec)
    rows = []
    for t in times:
        row = {"t": t, **hierarchy.probabilities(t)}
        row["total"] = sum(v for k, v in row.items() if k != "t")
        rows.append(row)
    return pd.DataFrame(rows)


def total_probability(
    model: SystemModel,
    pulse: Pulse,
    initial: np.ndarray | DensityMatrix,
    t: float,
    m_max: int = 2,
    grid: Iterable[float] = (),
    spec: QuadratureSpec | None = None,
) -> float:
    """No-count probability plus the probabilities of all records with 1..m_max counts up to `t`.

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        initial (np.ndarray | DensityMatrix): initial system state.
        t (float): horizon.
        m_max (int, optional): largest number of counts, at least 1. Defaults to 2.
        grid (Iterable[float], optional): restart points of the integrator. Defaults to ().
        spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.

    Returns:
        float: the accumulated probability (one when no records are missing).
    """
    if m_max < 1:
        raise ModelConfigurationError(f"m_max must be at least 1, got {m_max}")
    hierarchy = CountHierarchy(model, pulse, initial, t, m_max, grid=grid, spec=spec)
    return float(sum(hierarchy.probabilities(t).values()))


def apriori_continuous(
    model: SystemModel,
    pulse: Pulse,
    initial: np.ndarray | DensityMatrix,
    t: float,
    m_max: int = 2,
    grid: Iterable[float] = (),
    spec: QuadratureSpec | None = None,
) -> DensityMatrix:
    """Record averaged state at `t`, summed over records with at most `m_max` counts.

    Returns:
        DensityMatrix: unnormalized state whose trace is `total_probability`.
    """
    hierarchy = CountHierarchy(model, pulse, initial, t, m_max, grid=grid, spec=spec)
    return DensityMatrix.from_entries(hierarchy.state(t), normalized=False)
