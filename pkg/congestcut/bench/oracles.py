"""Reference answers: exhaustive 2-respecting cuts and Stoer-Wagner."""

from itertools import combinations

import networkx as nx

from congestcut.exceptions import InvalidGraph, SizeCap
from congestcut.graph.cover import CutCandidate, cov_oracle
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


def brute_force_2respecting(
    graph: WeightedGraph, tree: RootedSpanningTree, cap: int = 80
) -> CutCandidate:
    """Minimum over every single tree edge and every pair of tree edges.

    Args:
        graph: the input graph
        tree: a spanning tree of it
        cap: largest accepted number of vertices

    Returns:
        the smallest candidate by (value, edges)

    Raises:
        SizeCap: graph.n > cap.
        InvalidGraph: the tree has no edge.
    """
    if graph.n > cap:
        raise SizeCap(f"exhaustive 2-respecting oracle capped at n={cap}, got {graph.n}")
    table = cov_oracle(tree, graph)
    edges = table.tree_edges
    if not edges:
        raise InvalidGraph("a single vertex has no cut")
    cands = [CutCandidate.one(e, table.cut(e)) for e in edges]
    cands += [CutCandidate.two(e, f, table.cut(e, f)) for e, f in combinations(edges, 2)]
    return min(cands, key=lambda c: c.sort_key)


def stoer_wagner(graph: WeightedGraph) -> tuple[int, tuple[list[int], list[int]]]:
    """Global minimum cut value and one optimal partition."""
    value, (left, right) = nx.stoer_wagner(graph.to_networkx(), weight="weight")
    return int(value), (sorted(left), sorted(right))
