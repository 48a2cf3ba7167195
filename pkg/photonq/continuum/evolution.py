"""No-count evolution of conditional pairs and the pair of a detection record."""

import numpy as np

from ..model import (
    ConditionalPair,
    DetectionRecord,
    Pulse,
    SystemModel,
    effective_generator,
    initial_pair,
)
from ..numerics import ODE_SPEC, Propagator, QuadratureSpec, solve_linear_ode
from ..utils import ModelConfigurationError
from .jump import apply_jump

__all__ = ("evolve_no_count", "conditional_pair", "no_count_generator")


def no_count_generator(model: SystemModel) -> np.ndarray:
    """-iG, the generator of the no-count propagator exp(-iGt)."""
    return effective_generator(model).propagator_generator()


def evolve_no_count(
    model: SystemModel,
    pulse: Pulse,
    pair: ConditionalPair,
    t0: float,
    t1: float,
    spec: QuadratureSpec | None = None,
    propagator: Propagator | None = None,
) -> ConditionalPair:
    """Evolve a pair over [t0, t1] without counts.

    alpha follows exp(-iG(t - t0)); beta solves beta' = -iG beta - xi(t) L1^dagger alpha(t),
    the photon being absorbed out of the alpha branch.

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        pair (ConditionalPair): pair at `t0`.
        t0 (float): start time.
        t1 (float): end time, `t1 >= t0`.
        spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.
        propagator (Propagator | None, optional): precomputed exp(-iGt). Defaults to None.

    Raises:
        ModelConfigurationError: if `t1 < t0`.
        NumericalError: if the ODE integration fails.

    Returns:
        ConditionalPair: pair at `t1`, with tail weight of the pulse at `t1`.
    """
    if t1 < t0:
        raise ModelConfigurationError(f"cannot evolve backwards from {t0} to {t1}")
    spec = spec if spec is not None else ODE_SPEC
    propagator = propagator if propagator is not None else Propagator(no_count_generator(model))
    alpha0 = pair.alpha
    absorb = model.L1.conj().T

    def source(t):
        return -complex(pulse.amplitude(t)) * (absorb @ propagator.apply(t - t0, alpha0))

    beta = solve_linear_ode(
        propagator.generator,
        source,
        pair.beta,
        t0,
        t1,
        spec=spec,
        breakpoints=pulse.breakpoints,
    )
    return ConditionalPair(
        alpha=propagator.apply(t1 - t0, alpha0),
        beta=beta,
        tail_weight=float(pulse.tail(t1)),
    )


def conditional_pair(
    model: SystemModel,
    pulse: Pulse,
    record: DetectionRecord,
    psi0: np.ndarray,
    spec: QuadratureSpec | None = None,
) -> ConditionalPair:
    """The pair at the record horizon, conditioned on the counts of `record`.

    Counts are applied by their jump rule with the pulse amplitude at the count time,
    no-count evolution fills the gaps.

    Args:
        model (SystemModel): the system.
        pulse (Pulse): the input pulse.
        record (DetectionRecord): counts on [0, horizon].
        psi0 (np.ndarray): initial unit state vector.
        spec (QuadratureSpec | None, optional): ODE tolerances. Defaults to `ODE_SPEC`.

    Returns:
        ConditionalPair: the conditional pair, densities with respect to the count times.
    """
    propagator = Propagator(no_count_generator(model))
    pair = initial_pair(psi0)
    t = 0.0
    for event in record.events:
        pair = evolve_no_count(model, pulse, pair, t, event.time, spec, propagator)
        pair = apply_jump(model, pair, event.side, complex(pulse.amplitude(event.time)))
        t = event.time
    return evolve_no_count(model, pulse, pair, t, record.horizon, spec, propagator)
