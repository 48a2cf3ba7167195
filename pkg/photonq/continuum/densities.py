"""Exclusive probability densities of detection records."""

from collections.abc import Iterable

import numpy as np
import pandas as pd

from ..model import (
    DensityMatrix,
    DetectionRecord,
    Pulse,
    Side,
    SystemModel,
    initial_pair,
    pair_weight,
    pattern_of,
    pure_components,
)
from ..numerics import ODE_SPEC, Propagator, QuadratureSpec, solve_ode
from ..utils import ModelConfigurationError, parallel_map
from .evolution import conditional_pair, evolve_no_count, no_count_generator
from .jump import jump_rule

__all__ = ("exclusive_density", "no_count_prob", "density_grid")


def exclusive_density(
    model: SystemModel,
    pulse: Pulse,
    record: DetectionRecord,
    initial: np.ndarray | DensityMatrix,
    spec: QuadratureSpec | None = None,
) -> float:
    """Joint density of exactly the counts of `record` on [0, horizon].

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        record (DetectionRecord): at least one count.
        initial (np.ndarray | DensityMatrix): initial system state.
        spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.

    Raises:
        ModelConfigurationError: for an empty record (use `no_count_prob`).

    Returns:
        float: |alpha|^2 tail(horizon) + |beta|^2 averaged over the initial state.
    """
    if record.n_counts == 0:
        raise ModelConfigurationError("an exclusive density needs at least one count")
    return sum(
        p * pair_weight(conditional_pair(model, pulse, record, psi, spec))
        for p, psi in pure_components(initial)
    )


def no_count_prob(
    model: SystemModel,
    pulse: Pulse,
    t: float,
    initial: np.ndarray | DensityMatrix,
    spec: QuadratureSpec | None = None,
) -> float:
    """Probability of no count on [0, t]."""
    if t < 0:
        raise ModelConfigurationError(f"time must be nonnegative, got {t}")
    propagator = Propagator(no_count_generator(model))
    total = 0.0
    for p, psi in pure_components(initial):
        pair = evolve_no_count(model, pulse, initial_pair(psi), 0.0, t, spec, propagator)
        total += p * pair_weight(pair)
    return float(total)


def _stacked_generator(model: SystemModel, pulse: Pulse):
    G = no_count_generator(model)
    absorb = model.L1.conj().T
    d = model.dim

    def generator(t):
        M = np.zeros((2 * d, 2 * d), dtype=complex)
        M[:d, :d] = G
        M[d:, d:] = G
        M[d:, :d] = -complex(pulse.amplitude(t)) * absorb
        return M

    return generator


def _segment_maps(model, pulse, nodes, spec):
    generator = _stacked_generator(model, pulse)
    size = 2 * model.dim

    def segment(k):
        def rhs(t, y):
            return (generator(t) @ y.reshape(size, size)).reshape(-1)

        start = np.eye(size, dtype=complex).reshape(-1)
        solution = solve_ode(
            rhs, start, nodes[k], nodes[k + 1], spec=spec, breakpoints=pulse.breakpoints
        )
        return solution.final.reshape(size, size)

    return parallel_map(segment, range(len(nodes) - 1))


def density_grid(
    model: SystemModel,
    pulse: Pulse,
    initial: np.ndarray | DensityMatrix,
    times: Iterable[float],
    horizon: float,
    max_counts: int = 2,
    spec: QuadratureSpec | None = None,
) -> pd.DataFrame:
    """Exclusive one and two count densities on all ordered points of a time grid.

    The stacked no-count maps between neighbouring grid points are integrated once and
    shared by every record.

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        initial (np.ndarray | DensityMatrix): initial system state.
        times (Iterable[float]): count times, points outside of (0, horizon] are dropped.
        horizon (float): end of the observation window.
        max_counts (int, optional): 1 or 2. Defaults to 2.
        spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.

    Returns:
        pd.DataFrame: columns `t_prime`, `t_second` (NaN for one count), `side_pattern`, `density`.
    """
    if max_counts not in (1, 2):
        raise ModelConfigurationError(f"max_counts must be 1 or 2, got {max_counts}")
    spec = spec if spec is not None else ODE_SPEC
    counts = sorted({float(t) for t in times if 0 < t <= horizon})
    nodes = np.array(sorted({0.0, float(horizon), *counts}))
    node_of = {t: int(np.searchsorted(nodes, t)) for t in counts}
    maps = _segment_maps(model, pulse, nodes, spec)
    d = model.dim
    n = len(nodes)

    # backward weight forms: Q[k] gives the final weight of a stacked vector at nodes[k]
    Q = np.empty((n, 2 * d, 2 * d), dtype=complex)
    Q[-1] = np.diag(np.concatenate([np.full(d, float(pulse.tail(horizon))), np.ones(d)]))
    for k in range(n - 2, -1, -1):
        Q[k] = maps[k].conj().T @ Q[k + 1] @ maps[k]

    rules = {side: jump_rule(model, side) for side in (Side.RIGHT, Side.LEFT)}
    jumps = {
        side: [rule.matrix(complex(pulse.amplitude(t))) for t in nodes]
        for side, rule in rules.items()
    }
    one = {}
    two = {}
    for p, psi in pure_components(initial):
        u = np.concatenate([psi, np.zeros(d, dtype=complex)])
        forward = [u]
        for k in range(n - 1):
            forward.append(maps[k] @ forward[-1])
        for t in counts:
            k = node_of[t]
            for side in rules:
                v = jumps[side][k] @ forward[k]
                key = (t, side)
                one[key] = one.get(key, 0.0) + p * float(np.real(v.conj() @ Q[k] @ v))
                if max_counts == 1:
                    continue
                w = v
                for k2 in range(k, n - 1):
                    w = maps[k2] @ w
                    t2 = float(nodes[k2 + 1])
                    if t2 not in node_of:
                        continue
                    for side2 in rules:
                        x = jumps[side2][k2 + 1] @ w
                        key2 = (t, t2, side, side2)
                        value = p * float(np.real(x.conj() @ Q[k2 + 1] @ x))
                        two[key2] = two.get(key2, 0.0) + value

    rows = [
        {"t_prime": t, "t_second": np.nan, "side_pattern": side.value, "density": value}
        for (t, side), value in one.items()
    ]
    rows += [
        {
            "t_prime": t,
            "t_second": t2,
            "side_pattern": pattern_of((side, side2)),
            "density": value,
        }
        for (t, t2, side, side2), value in two.items()
    ]
    return pd.DataFrame(rows, columns=["t_prime", "t_second", "side_pattern", "density"])
