# flake8: noqa F401, F403
from .cover import (
    CoverTable,
    CutCandidate,
    CutKind,
    best_candidate,
    cov_oracle,
    covers,
    crosses_cut,
    cut_value,
)
from .lca import (
    LcaLabel,
    LcaLabeling,
    build_lca_labels,
    in_subtree,
    is_ancestor,
    lca_from_labels,
)
from .weighted import (
    Edge,
    RootedSpanningTree,
    WeightedGraph,
    edge_key,
    read_graph,
    read_tree,
    write_graph,
    write_tree,
)

__all__ = [
    "CoverTable",
    "CutCandidate",
    "CutKind",
    "best_candidate",
    "cov_oracle",
    "covers",
    "crosses_cut",
    "cut_value",
    "LcaLabel",
    "LcaLabeling",
    "build_lca_labels",
    "in_subtree",
    "is_ancestor",
    "lca_from_labels",
    "Edge",
    "RootedSpanningTree",
    "WeightedGraph",
    "edge_key",
    "read_graph",
    "read_tree",
    "write_graph",
    "write_tree",
]
