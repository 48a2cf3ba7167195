"""Seeded Monte Carlo sampling of the discrete two-detector counting process."""

from .sampler import (
    SamplerConfig,
    SampleBatch,
    PatternEstimate,
    MonteCarloEstimate,
    sample_record,
    sample_records,
    estimate,
    records_to_dataframe,
    ESTIMATED_PATTERNS,
)

__all__ = (
    "SamplerConfig",
    "SampleBatch",
    "PatternEstimate",
    "MonteCarloEstimate",
    "sample_record",
    "sample_records",
    "estimate",
    "records_to_dataframe",
    "ESTIMATED_PATTERNS",
)
