"""Domain types shared by all engines: system models, pulses, conditional pairs, records and states."""

from .system import SystemModel, EffectiveGenerator, make_model, effective_generator
from .pulse import (
    Pulse,
    ExponentialPulse,
    GaussianPulse,
    FlatPulse,
    TablePulse,
    PulseSpec,
    DiscretePulse,
    discretize_pulse,
    check_normalization,
)
from .pair import ConditionalPair, pair_weight, initial_pair
from .record import Side, CountEvent, DetectionRecord, make_record, pattern_of
from .state import DensityMatrix, unit_vector, pure_components, as_density

__all__ = (
    "SystemModel",
    "EffectiveGenerator",
    "make_model",
    "effective_generator",
    "Pulse",
    "ExponentialPulse",
    "GaussianPulse",
    "FlatPulse",
    "TablePulse",
    "PulseSpec",
    "DiscretePulse",
    "discretize_pulse",
    "check_normalization",
    "ConditionalPair",
    "pair_weight",
    "initial_pair",
    "Side",
    "CountEvent",
    "DetectionRecord",
    "make_record",
    "pattern_of",
    "DensityMatrix",
    "unit_vector",
    "pure_components",
    "as_density",
)
