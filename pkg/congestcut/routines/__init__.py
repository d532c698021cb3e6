# flake8: noqa F401, F403
from .batch import (
    AggregateSpec,
    BatchResult,
    Direction,
    Value,
    add,
    decode_value,
    encode_value,
    keep_left,
    max_opt,
    min_opt,
    pipelined_batch,
)
from .bfs import BfsTree, build_bfs_tree
from .cover_routing import (
    Entry,
    TreeConvergecast,
    compute_cov_all,
    non_tree_neighbours,
    route_cover_aggregate,
    run_convergecast,
    split_entries,
)
from .gather import chunk_item, exchange, gather_broadcast
from .highways import (
    broadcast_highway_extremes,
    broadcast_min_cov_edges,
    global_min,
    global_minima,
    global_sums,
    globalize,
)
from .scope import TreeScope

__all__ = [
    "AggregateSpec",
    "BatchResult",
    "Direction",
    "Value",
    "add",
    "decode_value",
    "encode_value",
    "keep_left",
    "max_opt",
    "min_opt",
    "pipelined_batch",
    "BfsTree",
    "build_bfs_tree",
    "Entry",
    "TreeConvergecast",
    "compute_cov_all",
    "non_tree_neighbours",
    "route_cover_aggregate",
    "run_convergecast",
    "split_entries",
    "chunk_item",
    "exchange",
    "gather_broadcast",
    "broadcast_highway_extremes",
    "broadcast_min_cov_edges",
    "global_min",
    "global_minima",
    "global_sums",
    "globalize",
    "TreeScope",
]
