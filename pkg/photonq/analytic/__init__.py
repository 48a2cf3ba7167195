"""Closed form statistics of a two-level atom, for arbitrary and exponential pulses."""

from .atom import AtomParams, AtomState, tla_model, SIGMA_MINUS
from .tla import (
    PATTERNS,
    TlaCumulants,
    tla_cumulants,
    p_zero,
    one_count_density,
    two_count_density,
    event_probs,
    event_prob,
    mean_counts,
    first_count,
    delay_time,
    second_count,
)
from .exponential import (
    ExpPulseParams,
    MeanTimes,
    exp_pulse,
    p_zero_exp,
    longtime_event_probs,
    longtime_mean_counts,
    limit_regimes,
    mean_times_exp,
)

__all__ = (
    "AtomParams",
    "AtomState",
    "tla_model",
    "SIGMA_MINUS",
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
    "ExpPulseParams",
    "MeanTimes",
    "exp_pulse",
    "p_zero_exp",
    "longtime_event_probs",
    "longtime_mean_counts",
    "limit_regimes",
    "mean_times_exp",
)
