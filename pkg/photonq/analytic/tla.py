"""Closed form photon counting statistics of a two-level atom driven by an arbitrary pulse.

All statistics reduce to a handful of running integrals of the pulse. With
a = Gamma / 2 - i delta0 and k(s) = int_0^s exp(-a (s - u)) xi(u) du (the amplitude
absorbed by the atom), the one and two count probabilities are sums of products of

    A = int exp(-Gamma s)           B = int exp(-conj(a) s) (xi + gamma1 k)
    C = int |xi + gamma1 k|^2        D = int |k|^2
    E = int exp(-conj(a) s) k       R = int |xi - gamma1 k|^2

taken from 0 to the relevant time, with k at that time. These integrals and the two count
probabilities are integrated once per (atom, pulse) as one ODE with dense output, up to
the pulse horizon plus 40 decay times.
"""

from collections.abc import Callable
from functools import lru_cache

import numpy as np

from ..model import Pulse
from ..numerics import ODE_SPEC, DenseSolution, solve_ode
from ..utils import LOGGER, ConsistencyError, ModelConfigurationError
from ..utils._const import DECAY_HORIZON
from .atom import AtomParams, AtomState

__all__ = (
    "PATTERNS",
    "TlaCumulants",
    "tla_cumulants",
    "p_zero",
    "one_count_density",
    "two_count_density",
    "event_probs",
    "event_prob",
    "mean_counts",
    "first_count",
    "delay_time",
    "second_count",
)

PATTERNS = ("none", "R", "L", "RR", "LR", "RL", "LL")
TWO_COUNT_PATTERNS = ("RR", "LR", "RL", "LL")
CONSISTENCY_TOL = 1e-6

# state layout of the cumulant ODE
_K, _A, _B, _C, _D, _E, _R = range(7)
_P2 = {"RR": 7, "LR": 8, "RL": 9, "LL": 10}
_Z0G, _Z0E, _F1G, _F1E, _M1G, _M1E, _M2 = range(11, 18)
_SIZE = 18


class TlaCumulants:
    """Running pulse integrals of one (atom, pulse) configuration.

    Times beyond `t_end` are clamped to it, all statistics have converged there.
    """

    def __init__(self, params: AtomParams, pulse: Pulse):
        """Constructor, integrates the cumulant ODE eagerly.

        Args:
            params (AtomParams): the atom.
            pulse (Pulse): the input pulse.
        """
        self.params = params
        self.pulse = pulse
        g1, g2, gamma = params.gamma1, params.gamma2, params.gamma
        self.a = 0.5 * gamma - 1j * params.delta0
        self.t_end = pulse.horizon + (DECAY_HORIZON / gamma if gamma > 0 else 0.0)
        a = self.a

        def rhs(s, y):
            xi = complex(pulse.amplitude(s))
            tail = float(pulse.tail(s))
            k = y[_K]
            ea = np.exp(-a * s)
            eb = np.exp(-np.conj(a) * s)
            eg = np.exp(-gamma * s)
            w = xi + g1 * k
            z = xi - g1 * k
            dy = np.empty(_SIZE, dtype=complex)
            dy[_K] = xi - a * k
            dy[_A] = eg
            dy[_B] = eb * w
            dy[_C] = abs(w) ** 2
            dy[_D] = abs(k) ** 2
            dy[_E] = eb * k
            dy[_R] = abs(z) ** 2
            rates = _two_count_rates(g1, g2, eg, ea, k, z, y)
            for pattern, index in _P2.items():
                dy[index] = rates[pattern]
            p0_ground = tail + g1 * abs(k) ** 2
            p0_excited = eg * tail
            p1_ground = abs(xi) ** 2 - 2 * g1 * (np.conj(k) * xi).real + gamma * g1 * abs(k) ** 2
            p1_excited = eg * (gamma * tail + abs(xi) ** 2)
            dy[_Z0G] = p0_ground
            dy[_Z0E] = p0_excited
            dy[_F1G] = p1_ground
            dy[_F1E] = p1_excited
            dy[_M1G] = s * p1_ground
            dy[_M1E] = s * p1_excited
            dy[_M2] = s * sum(rates.values())
            return dy

        LOGGER.debug(f"tla cumulants: {params}, {pulse}, t_end={self.t_end:.4g}")
        self._solution: DenseSolution = solve_ode(
            rhs,
            np.zeros(_SIZE, dtype=complex),
            0.0,
            self.t_end,
            spec=ODE_SPEC,
            breakpoints=pulse.breakpoints,
            dense=True,
        )

    def clamp(self, t) -> np.ndarray:
        """Times clamped to [0, t_end].

        Raises:
            ModelConfigurationError: for negative times.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ModelConfigurationError("times must be nonnegative")
        return np.minimum(t, self.t_end)

    def __call__(self, t) -> np.ndarray:
        """The cumulant state at (clamped) time(s) `t`, components along the first axis."""
        return self._solution(self.clamp(t))

    def kernel(self, t):
        """xi, tail and k at (clamped) time(s) `t`."""
        t = self.clamp(t)
        return self.pulse.amplitude(t), self.pulse.tail(t), self._solution(t)[_K]

    def phase(self, s, r):
        """exp(-Gamma r / 2 - i delta0 s), the weight pairing an amplitude at s with a decay up to r."""
        return np.exp(-0.5 * self.params.gamma * r - 1j * self.params.delta0 * s)


def _two_count_rates(g1, g2, eg, ea, k, z, y) -> dict[str, complex]:
    # d/dt of the two count probabilities of the excited atom, the second count at t
    A, B, C, D, E = y[_A], y[_B], y[_C], y[_D], y[_E]
    return {
        "RR": g1 * (eg * C + 2 * (ea * np.conj(z) * B).real + abs(z) ** 2 * A),
        "LR": g2 * (eg * C - 2 * g1 * (ea * np.conj(k) * B).real + g1**2 * abs(k) ** 2 * A),
        "RL": g2 * (abs(z) ** 2 * A + 2 * g1 * (ea * np.conj(z) * E).real + g1**2 * eg * D),
        "LL": g1 * g2**2 * (abs(k) ** 2 * A - 2 * (ea * np.conj(k) * E).real + eg * D),
    }


@lru_cache(maxsize=64)
def tla_cumulants(params: AtomParams, pulse: Pulse) -> TlaCumulants:
    """Cached `TlaCumulants` of a configuration."""
    return TlaCumulants(params, pulse)


def _scalar(value):
    value = np.real(value)
    return float(value) if np.ndim(value) == 0 else value


def p_zero(params: AtomParams, state: AtomState, pulse: Pulse, t):
    """Probability of no count on [0, t], vectorized over `t`.

    rho_ee exp(-Gamma t) tail(t) + rho_gg (tail(t) + gamma1 |k(t)|^2), coherences do not enter.
    """
    cumulants = tla_cumulants(params, pulse)
    t = cumulants.clamp(t)
    _, tail, k = cumulants.kernel(t)
    excited = np.exp(-params.gamma * t) * tail
    ground = tail + params.gamma1 * np.abs(k) ** 2
    return _scalar(state.rho_ee * excited + state.rho_gg * ground)


def one_count_density(
    params: AtomParams, state: AtomState, pulse: Pulse, side: str, t_prime: float, t: float
) -> float:
    """Density of exactly one count, at `t_prime` on `side`, during [0, t].

    Raises:
        ModelConfigurationError: if `t_prime` is not in (0, t] or `side` is not R or L.
    """
    if not 0 < t_prime <= t:
        raise ModelConfigurationError(f"need 0 < t' <= t, got t'={t_prime}, t={t}")
    cumulants = tla_cumulants(params, pulse)
    g1, g2, gamma = params.gamma1, params.gamma2, params.gamma
    xi1, _, k1 = cumulants.kernel(t_prime)
    _, tail, kt = cumulants.kernel(t)
    phase = cumulants.phase
    decay = np.exp(-gamma * t_prime)
    if side == "R":
        ground = abs(xi1 - g1 * k1) ** 2
        w1 = xi1 + g1 * k1
        excited = g1 * decay * tail + abs(phase(t_prime, t) * w1 - g1 * phase(t, t_prime) * kt) ** 2
    elif side == "L":
        ground = g1 * g2 * abs(k1) ** 2
        excited = g2 * (
            decay * tail + g1 * abs(phase(t, t_prime) * kt - phase(t_prime, t) * k1) ** 2
        )
    else:
        raise ModelConfigurationError(f"side must be R or L, got {side!r}")
    return float(state.rho_gg * ground + state.rho_ee * excited)


def two_count_density(
    params: AtomParams,
    state: AtomState,
    pulse: Pulse,
    sides: str,
    t_prime: float,
    t_second: float,
    t: float | None = None,
) -> float:
    """Density of exactly two counts at `t_prime` < `t_second` during [0, t].

    After the second count the atom is in its ground state and the photon has left, so the
    density does not depend on t >= t_second. Only the excited population contributes.

    Args:
        params (AtomParams): the atom.
        state (AtomState): initial state.
        pulse (Pulse): the input pulse.
        sides (str): pattern, latest count first ("RR", "LR", "RL", "LL") or "all" for their sum.
        t_prime (float): first count.
        t_second (float): second count.
        t (float | None, optional): horizon, at least `t_second`. Defaults to `t_second`.

    Raises:
        ModelConfigurationError: on an ordering violation or unknown pattern.

    Returns:
        float: the density.
    """
    t = t_second if t is None else t
    if not 0 < t_prime < t_second <= t:
        raise ModelConfigurationError(
            f"need 0 < t' < t'' <= t, got t'={t_prime}, t''={t_second}, t={t}"
        )
    if sides == "all":
        return sum(
            two_count_density(params, state, pulse, p, t_prime, t_second, t)
            for p in TWO_COUNT_PATTERNS
        )
    cumulants = tla_cumulants(params, pulse)
    g1, g2 = params.gamma1, params.gamma2
    xi1, _, k1 = cumulants.kernel(t_prime)
    xi2, _, k2 = cumulants.kernel(t_second)
    first = cumulants.phase(t_prime, t_second)
    second = cumulants.phase(t_second, t_prime)
    w1 = xi1 + g1 * k1
    z2 = xi2 - g1 * k2
    if sides == "RR":
        value = g1 * abs(first * w1 + second * z2) ** 2
    elif sides == "LR":
        value = g2 * abs(first * w1 - g1 * second * k2) ** 2
    elif sides == "RL":
        value = g2 * abs(second * z2 + g1 * first * k1) ** 2
    elif sides == "LL":
        value = g1 * g2**2 * abs(second * k2 - first * k1) ** 2
    else:
        raise ModelConfigurationError(f"unknown two count pattern {sides!r}")
    return float(state.rho_ee * value)


def event_probs(params: AtomParams, state: AtomState, pulse: Pulse, t) -> dict:
    """Probabilities of all records with at most two counts up to `t`, keyed by `PATTERNS`."""
    cumulants = tla_cumulants(params, pulse)
    g1, g2, gamma = params.gamma1, params.gamma2, params.gamma
    t = cumulants.clamp(t)
    y = cumulants(t)
    _, tail, k = cumulants.kernel(t)
    eg = np.exp(-gamma * t)
    ea_ck = np.exp(-cumulants.a * t) * np.conj(k)
    A = y[_A].real
    right_excited = (
        g1 * tail * A + eg * y[_C].real - 2 * g1 * (ea_ck * y[_B]).real + g1**2 * np.abs(k) ** 2 * A
    )
    left_excited = g2 * (
        tail * A + g1 * (eg * y[_D].real - 2 * (ea_ck * y[_E]).real + np.abs(k) ** 2 * A)
    )
    result = {
        "none": p_zero(params, state, pulse, t),
        "R": _scalar(state.rho_gg * y[_R] + state.rho_ee * right_excited),
        "L": _scalar(state.rho_gg * g1 * g2 * y[_D] + state.rho_ee * left_excited),
    }
    for pattern, index in _P2.items():
        result[pattern] = _scalar(state.rho_ee * y[index])
    return result


def event_prob(params: AtomParams, state: AtomState, pulse: Pulse, pattern: str, t):
    """Probability of the records of one pattern (`none`, R, L, RR, LR, RL, LL) up to `t`.

    Raises:
        ModelConfigurationError: on an unknown pattern.
    """
    if pattern not in PATTERNS:
        raise ModelConfigurationError(f"unknown pattern {pattern!r}, expected one of {PATTERNS}")
    return event_probs(params, state, pulse, t)[pattern]


def mean_counts(params: AtomParams, state: AtomState, pulse: Pulse, t):
    """Mean numbers of right and left counts up to `t`."""
    p = event_probs(params, state, pulse, t)
    right = p["R"] + p["LR"] + p["RL"] + 2 * p["RR"]
    left = p["L"] + p["LR"] + p["RL"] + 2 * p["LL"]
    return right, left


def first_count(
    params: AtomParams, state: AtomState, pulse: Pulse
) -> tuple[Callable, float]:
    """Density of the time of the first count and its mean.

    The mean is cross-checked against the integral of the no-count probability, and the
    density against the decrease of the no-count probability.

    Raises:
        ConsistencyError: if a cross-check misses its tolerance of 1e-6.

    Returns:
        tuple[Callable, float]: p1 (vectorized over t) and tau1.
    """
    cumulants = tla_cumulants(params, pulse)
    g1, gamma = params.gamma1, params.gamma
    rho_gg, rho_ee = state.rho_gg, state.rho_ee

    def p1(t):
        t = cumulants.clamp(t)
        xi, tail, k = cumulants.kernel(t)
        excited = np.exp(-gamma * t) * (gamma * tail + np.abs(xi) ** 2)
        ground = (
            np.abs(xi) ** 2 - 2 * g1 * (np.conj(k) * xi).real + gamma * g1 * np.abs(k) ** 2
        )
        return _scalar(rho_ee * excited + rho_gg * ground)

    T = cumulants.t_end
    y = cumulants(T)
    tau1 = float((rho_gg * y[_M1G] + rho_ee * y[_M1E]).real)
    survival = float((rho_gg * y[_Z0G] + rho_ee * y[_Z0E]).real) - T * p_zero(
        params, state, pulse, T
    )
    if abs(tau1 - survival) > CONSISTENCY_TOL:
        raise ConsistencyError(
            f"mean first count time {tau1} disagrees with the no-count integral {survival}"
        )
    checkpoints = np.linspace(0.0, T, 17)
    cumulative = cumulants(checkpoints)
    accumulated = (rho_gg * cumulative[_F1G] + rho_ee * cumulative[_F1E]).real
    deviation = np.max(np.abs(1.0 - accumulated - p_zero(params, state, pulse, checkpoints)))
    if deviation > CONSISTENCY_TOL:
        raise ConsistencyError(
            f"first count density does not match the no-count probability ({deviation:.3g})"
        )
    return p1, tau1


def delay_time(params: AtomParams, pulse: Pulse) -> float:
    """Mean free arrival time of the pulse minus the mean first count time, atom in |g>.

    Negative when the atom delays the photon.
    """
    _, tau1 = first_count(params, AtomState.ground(), pulse)
    return pulse.first_moment() - tau1


def second_count(
    params: AtomParams, pulse: Pulse, state: AtomState | None = None
) -> tuple[Callable, float]:
    """Density of the time of the second count and its mean, atom starting in |e>.

    Args:
        params (AtomParams): atom parameters.
        pulse (Pulse): incident pulse.
        state (AtomState | None, optional): initial state, checked to be excited.
            Defaults to the excited state.

    Raises:
        ModelConfigurationError: if `state` is not the excited state.
        ConsistencyError: if the two count probability does not reach one within 1e-6.

    Returns:
        tuple[Callable, float]: p2 (vectorized over t) and tau2.
    """
    if state is not None and not state.is_excited():
        raise ModelConfigurationError(
            f"the second count time needs an excited atom, got rho_ee={state.rho_ee}"
        )
    cumulants = tla_cumulants(params, pulse)
    g1, g2, gamma = params.gamma1, params.gamma2, params.gamma

    def p2(t):
        t = cumulants.clamp(t)
        y = cumulants(t)
        xi, _, k = cumulants.kernel(t)
        rates = _two_count_rates(
            g1, g2, np.exp(-gamma * t), np.exp(-cumulants.a * t), k, xi - g1 * k, y
        )
        return _scalar(sum(rates.values()))

    y = cumulants(cumulants.t_end)
    total = float(sum(y[index] for index in _P2.values()).real)
    if abs(total - 1.0) > CONSISTENCY_TOL:
        raise ConsistencyError(f"two count probability of the excited atom is {total}, expected 1")
    return p2, float(y[_M2].real)
