"""Decomposition-based multi-modal multi-objective optimization."""

from mmopt.core import (
    ConfigurationError,
    ContractError,
    DomainError,
    Problem,
    Solution,
    dominates,
    euclidean_distance,
    make_stream,
    nondominated_filter,
)
from mmopt.problems import make_problem, sample_reference_set

__all__ = [
    "ConfigurationError",
    "ContractError",
    "DomainError",
    "Problem",
    "Solution",
    "dominates",
    "euclidean_distance",
    "make_problem",
    "make_stream",
    "nondominated_filter",
    "sample_reference_set",
]
