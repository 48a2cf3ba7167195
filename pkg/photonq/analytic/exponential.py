"""Exact statistics of the two-level atom for the decaying exponential pulse."""

from typing import NamedTuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..model import ExponentialPulse
from ..utils import ModelConfigurationError
from .atom import AtomParams, AtomState

__all__ = (
    "ExpPulseParams",
    "MeanTimes",
    "exp_pulse",
    "p_zero_exp",
    "longtime_event_probs",
    "longtime_mean_counts",
    "limit_regimes",
    "mean_times_exp",
)

# relative distance from Omega = Gamma, delta0 = 0 below which the series branch is used
RESONANCE_TOL = 1e-6
# below this value of x^2 + y^2 the interference term is evaluated by its series
_SERIES_RADIUS = 1e-3
REGIME_RATIO = 1e-2


class ExpPulseParams(BaseModel):
    """Decay rate `omega` of the pulse sqrt(omega) exp(-omega t / 2)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    omega: float

    @field_validator("omega")
    @classmethod
    def _validate_omega(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"omega must be positive, got {value}")
        return value

    def pulse(self) -> ExponentialPulse:  # noqa
        return ExponentialPulse(omega=self.omega)


class MeanTimes(NamedTuple):
    """Mean first count time and, for an excited atom, mean second count time."""

    tau1: float
    tau2: float | None


def _omega(omega: float) -> float:
    try:
        return ExpPulseParams(omega=omega).omega
    except ValidationError as e:
        raise ModelConfigurationError(f"invalid exponential pulse: {e}") from e


def exp_pulse(omega: float) -> ExponentialPulse:
    """The normalized pulse sqrt(omega) exp(-omega t / 2), tail exp(-omega t).

    Raises:
        ModelConfigurationError: if `omega` is not positive.
    """
    return ExponentialPulse(omega=_omega(omega))


def _series(x, y):
    # 2 (cosh x - cos y) / (x^2 + y^2) near its removable singularity at the origin
    return 1 + (x**2 - y**2) / 12 + (x**4 - x**2 * y**2 + y**4) / 360


def p_zero_exp(params: AtomParams, state: AtomState, omega: float, t):
    """No-count probability up to `t` for the exponential pulse, vectorized over `t`.

    rho_ee exp(-(Gamma + Omega) t) + rho_gg [exp(-Omega t) + 4 Omega gamma1 / ((Gamma - Omega)^2
    + 4 delta0^2) (exp(-Omega t) + exp(-Gamma t) - 2 exp(-(Gamma + Omega) t / 2) cos(delta0 t))].
    Close to Omega = Gamma, delta0 = 0 (or for small t) the interference term is evaluated as
    Omega gamma1 t^2 exp(-(Gamma + Omega) t / 2) S(x, y), x = (Gamma - Omega) t / 2, y = delta0 t,
    with S the series of 2 (cosh x - cos y) / (x^2 + y^2). At resonance it becomes
    exp(-Gamma t) Gamma gamma1 t^2.
    """
    omega = _omega(omega)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ModelConfigurationError("times must be nonnegative")
    gamma, g1, delta0 = params.gamma, params.gamma1, params.delta0
    x = 0.5 * (gamma - omega) * t
    y = delta0 * t
    near = abs(gamma - omega) + abs(delta0) < RESONANCE_TOL * max(gamma, omega)
    series = omega * g1 * t**2 * np.exp(-0.5 * (gamma + omega) * t) * _series(x, y)
    if near:
        interference = series
    else:
        lorentz = (gamma - omega) ** 2 + 4 * delta0**2
        direct = (4 * omega * g1 / lorentz) * (
            np.exp(-omega * t) + np.exp(-gamma * t) - 2 * np.exp(-0.5 * (gamma + omega) * t) * np.cos(y)
        )
        interference = np.where(x**2 + y**2 < _SERIES_RADIUS, series, direct)
    value = state.rho_ee * np.exp(-(gamma + omega) * t) + state.rho_gg * (
        np.exp(-omega * t) + interference
    )
    return float(value) if np.ndim(value) == 0 else value


def longtime_event_probs(params: AtomParams, omega: float, state: AtomState) -> dict[str, float]:
    """Probabilities of the six count patterns after all photons have been detected.

    Raises:
        ModelConfigurationError: if the atom is decoupled (Gamma = 0).

    Returns:
        dict[str, float]: keys R, L, RR, LR, RL, LL.
    """
    omega = _omega(omega)
    g1, g2, gamma = params.gamma1, params.gamma2, params.gamma
    if not gamma > 0:
        raise ModelConfigurationError("long time limits need a coupled atom (Gamma > 0)")
    d2 = 4 * params.delta0**2
    s = gamma + omega
    lorentz = gamma * (d2 + s**2)
    reflected = 4 * g1 * g2 * s / lorentz
    rr = g1 * (d2 + gamma**2 - 4 * gamma * g1 + 6 * gamma * omega + 4 * g1**2 - 4 * g1 * omega + omega**2)
    lr = (
        g2 * (d2 * omega + 4 * g1**2 * omega - 4 * g1 * omega**2 + omega**3)
        + gamma * g2 * (4 * g1**2 - 4 * g1 * omega + 2 * omega**2)
        + gamma**2 * g2 * omega
    )
    rl = g2 * (
        d2 * gamma
        + gamma**3
        - 4 * gamma**2 * g1
        + 2 * gamma**2 * omega
        + 4 * gamma * g1**2
        - 4 * gamma * g1 * omega
        + gamma * omega**2
        + 4 * g1**2 * omega
    )
    return {
        "R": (1 - reflected) * state.rho_gg,
        "L": reflected * state.rho_gg,
        "RR": rr / lorentz * state.rho_ee,
        "LR": lr / (s * lorentz) * state.rho_ee,
        "RL": rl / (s * lorentz) * state.rho_ee,
        "LL": 4 * g1 * g2**2 / lorentz * state.rho_ee,
    }


def longtime_mean_counts(
    params: AtomParams, omega: float, state: AtomState
) -> tuple[float, float]:
    """Mean numbers of right and left counts after all photons have been detected."""
    p = longtime_event_probs(params, omega, state)
    right = p["R"] + p["LR"] + p["RL"] + 2 * p["RR"]
    left = p["L"] + p["LR"] + p["RL"] + 2 * p["LL"]
    return right, left


def _regime(gamma: float, omega: float) -> str:
    if gamma / omega <= REGIME_RATIO:
        return "transmission"
    if omega / gamma <= REGIME_RATIO:
        return "reflection"
    return "intermediate"


def limit_regimes(params: AtomParams, omega: float) -> pd.DataFrame:
    """Long time limits for the atom starting in |g> and in |e>, labelled by regime.

    The regime is `transmission` for Gamma / Omega <= 1e-2 (short pulses pass the atom),
    `reflection` for Omega / Gamma <= 1e-2 and `intermediate` otherwise.

    Returns:
        pd.DataFrame: one row per initial state with the six limits, N_R, N_L, `ratio`
        (Gamma / Omega) and `regime`.
    """
    omega = _omega(omega)
    rows = []
    for label, state in (("ground", AtomState.ground()), ("excited", AtomState.excited())):
        probs = longtime_event_probs(params, omega, state)
        right, left = longtime_mean_counts(params, omega, state)
        rows.append(
            {
                "state": label,
                **{f"P_{pattern}": value for pattern, value in probs.items()},
                "N_R": right,
                "N_L": left,
                "ratio": params.gamma / omega,
                "regime": _regime(params.gamma, omega),
            }
        )
    return pd.DataFrame(rows)


def mean_times_exp(
    params: AtomParams, omega: float, state: AtomState, require_second: bool = False
) -> MeanTimes:
    """Mean first and second count times for the exponential pulse.

    tau1 = rho_ee / (Gamma + Omega) + rho_gg (1 / Omega + 4 gamma1 (Gamma + Omega) /
    (Gamma (4 delta0^2 + (Gamma + Omega)^2))). tau2 is defined for an excited atom only.

    Args:
        params (AtomParams): the atom.
        omega (float): pulse rate.
        state (AtomState): initial state.
        require_second (bool, optional): raise instead of returning no tau2. Defaults to False.

    Raises:
        ModelConfigurationError: if the atom is decoupled, or tau2 is required for an atom not
        starting in |e>.

    Returns:
        MeanTimes: tau1 and tau2 (None unless rho_ee = 1).
    """
    omega = _omega(omega)
    g1, gamma = params.gamma1, params.gamma
    if not gamma > 0:
        raise ModelConfigurationError("mean count times need a coupled atom (Gamma > 0)")
    d2 = 4 * params.delta0**2
    s = gamma + omega
    lorentz = d2 + s**2
    tau1 = state.rho_ee / s + state.rho_gg * (1 / omega + 4 * g1 * s / (gamma * lorentz))
    if not state.is_excited():
        if require_second:
            raise ModelConfigurationError("the second count time needs rho_ee = 1")
        return MeanTimes(tau1=tau1, tau2=None)
    numerator = (
        d2 * (gamma**2 + gamma * omega + omega**2)
        + gamma**4
        + 3 * gamma**3 * omega
        + 4 * gamma**2 * omega**2
        + 4 * g1 * gamma**2 * omega
        + 3 * gamma * omega**3
        - 4 * g1 * omega**3
        + omega**4
    )
    tau2 = numerator / (gamma * omega * s * lorentz)
    return MeanTimes(tau1=tau1, tau2=tau2)
