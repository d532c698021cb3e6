# flake8: noqa F401, F403
from .mincut import MinCutResult, bfs_spanning_tree, central_cut_edges, min_cut
from .packing import (
    TreePacking,
    greedy_tree_packing,
    karger_sample,
    sampling_probability,
    trees_count,
)
from .pipeline import (
    TreeRunResult,
    mark_cut_edges,
    min_1respecting,
    min_2respecting,
    nh_cross_stage,
    nh_highway_stage,
)

__all__ = [
    "MinCutResult",
    "bfs_spanning_tree",
    "central_cut_edges",
    "min_cut",
    "TreePacking",
    "greedy_tree_packing",
    "karger_sample",
    "sampling_probability",
    "trees_count",
    "TreeRunResult",
    "mark_cut_edges",
    "min_1respecting",
    "min_2respecting",
    "nh_cross_stage",
    "nh_highway_stage",
]
