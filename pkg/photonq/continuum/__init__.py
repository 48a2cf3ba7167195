"""Continuous time limit: jump rules, conditional pairs, exclusive densities and normalization."""

from .jump import JumpRule, jump_rule, apply_jump
from .evolution import evolve_no_count, conditional_pair, no_count_generator
from .densities import exclusive_density, no_count_prob, density_grid
from .hierarchy import (
    side_patterns,
    CountHierarchy,
    event_probabilities,
    total_probability,
    apriori_continuous,
)

__all__ = (
    "JumpRule",
    "jump_rule",
    "apply_jump",
    "evolve_no_count",
    "conditional_pair",
    "no_count_generator",
    "exclusive_density",
    "no_count_prob",
    "density_grid",
    "side_patterns",
    "CountHierarchy",
    "event_probabilities",
    "total_probability",
    "apriori_continuous",
)
