"""Discrete collision model: collision unitaries, recurrences, record enumeration."""

from .blocks import (
    BlockMode,
    VBlocks,
    LABELS,
    label_index,
    exact_collision_unitary,
    first_order_blocks,
    blocks_from_unitary,
    collision_blocks,
)
from .recurrence import DiscreteOutcome, step, step_matrix, outcome_distribution
from .enumeration import (
    WeightedRecord,
    EnumerationResult,
    enumerate_records,
    apriori_discrete,
    record_count,
    count_weights,
)
from .convergence import discrete_pair, convergence_table

__all__ = (
    "BlockMode",
    "VBlocks",
    "LABELS",
    "label_index",
    "exact_collision_unitary",
    "first_order_blocks",
    "blocks_from_unitary",
    "collision_blocks",
    "DiscreteOutcome",
    "step",
    "step_matrix",
    "outcome_distribution",
    "WeightedRecord",
    "EnumerationResult",
    "enumerate_records",
    "apriori_discrete",
    "record_count",
    "count_weights",
    "discrete_pair",
    "convergence_table",
)
