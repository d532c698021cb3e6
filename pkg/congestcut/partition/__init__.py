# flake8: noqa F401, F403
from .dnc import (
    SubProblem,
    Sweep,
    SweepResult,
    bit_halves,
    compare_fraghw_to_superhighway,
    dnc_same_superhighway,
    dnc_two_superhighways,
    pair_subproblem,
    solve_subproblems,
)
from .monotone import (
    PartitionJob,
    PartitionResult,
    argmin_columns,
    check_monotonicity,
    highway_order,
    partition_highway,
    partition_nonhighway,
)

__all__ = [
    "SubProblem",
    "Sweep",
    "SweepResult",
    "bit_halves",
    "compare_fraghw_to_superhighway",
    "dnc_same_superhighway",
    "dnc_two_superhighways",
    "pair_subproblem",
    "solve_subproblems",
    "PartitionJob",
    "PartitionResult",
    "argmin_columns",
    "check_monotonicity",
    "highway_order",
    "partition_highway",
    "partition_nonhighway",
]
