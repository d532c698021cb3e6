# flake8: noqa F401, F403
from .highway import (
    HighwayJob,
    compare_highways,
    compare_same_fragment_highway,
    highway_no_edge,
)
from .nonhighway import (
    NhHighwayJob,
    Row,
    compare_nh_cross_fragment,
    compare_nh_highway,
    compare_nh_local,
    cov_pieces_nh_highway,
    nh_highway_no_edge,
)
from .pieces import (
    Link,
    Target,
    cross_values,
    decoupled_minima,
    extremal_edge_sums,
    find_connecting_edges,
    find_fragment_links,
    fragment_edge_lists,
    fragment_edge_sums,
    highway_end,
    local_sums,
    pair_extras,
    ship_targets,
)

__all__ = [
    "HighwayJob",
    "compare_highways",
    "compare_same_fragment_highway",
    "highway_no_edge",
    "NhHighwayJob",
    "Row",
    "compare_nh_cross_fragment",
    "compare_nh_highway",
    "compare_nh_local",
    "cov_pieces_nh_highway",
    "nh_highway_no_edge",
    "Link",
    "Target",
    "cross_values",
    "decoupled_minima",
    "extremal_edge_sums",
    "find_connecting_edges",
    "find_fragment_links",
    "fragment_edge_lists",
    "fragment_edge_sums",
    "highway_end",
    "local_sums",
    "pair_extras",
    "ship_targets",
]
