"""Greedy tree packing and Karger sampling.

The packing reduces the minimum cut to 2-respecting cuts: each tree is a
minimum spanning tree under the relative loads L(e) / w(e) left by its
predecessors, and the minimum cut 2-respects a constant fraction of the
trees once the graph is sampled down to a polylogarithmic cut value.
"""

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from congestcut.config import DriverConfig
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph, edge_key
from congestcut.mathutils import log2_power

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


@dataclass
class TreePacking:
    """Packed trees and the load each graph edge ended up with."""

    trees: list[RootedSpanningTree] = field(default_factory=list)
    loads: dict[tuple[int, int], int] = field(default_factory=dict)
    """(u, v) -> number of trees holding the edge"""

    def __len__(self) -> int:
        return len(self.trees)


def trees_count(n: int, config: DriverConfig) -> int:
    """Number of trees to pack: max(3, ceil(log2^2.2 n)) unless configured.

    >>> trees_count(16, DriverConfig())
    22
    >>> trees_count(16, DriverConfig(trees_k=5))
    5
    """
    if config.trees_k is not None:
        return config.trees_k
    return max(3, log2_power(n, 2.2))


def greedy_tree_packing(
    graph: WeightedGraph, k: int, weights: Mapping[tuple[int, int], int] | None = None
) -> TreePacking:
    """Pack k trees greedily, each a minimum spanning tree under the current loads.

    Args:
        graph: the input graph
        k: number of trees
        weights: multiplicities to pack with, the graph weights by default;
            edges of multiplicity zero stay usable at a prohibitive load so
            that every tree spans the graph

    Returns:
        the packing, trees rooted at vertex 0
    """
    mult = {(u, v): w for u, v, w in graph.edges} if weights is None else dict(weights)
    loads = {(u, v): 0 for u, v, _ in graph.edges}
    packing = TreePacking(loads=loads)
    heavy = float(k + 1)
    for i in range(k):
        g = nx.Graph()
        g.add_nodes_from(range(graph.n))
        for (u, v), load in loads.items():
            w = mult.get((u, v), 0)
            g.add_edge(u, v, load=load / w if w > 0 else heavy)
        mst = nx.minimum_spanning_tree(g, weight="load", algorithm="kruskal")
        edges = [edge_key(u, v) for u, v in mst.edges()]
        for e in edges:
            loads[e] += 1
        packing.trees.append(RootedSpanningTree.from_graph_edges(edges, graph.n, 0))
        LOGGER.debug("tree %d packed, max load %d", i, max(loads.values(), default=0))
    return packing


def sampling_probability(n: int, opt: int, c: float) -> float:
    """p = min(1, c ln^1.1 n / OPT); 1 when OPT is below c ln^1.1 n.

    >>> sampling_probability(16, 1, 12.0)
    1.0
    """
    threshold = c * math.log(max(2, n)) ** 1.1
    if opt <= threshold:
        return 1.0
    return min(1.0, threshold / opt)


def karger_sample(
    graph: WeightedGraph, p: float, rng: np.random.Generator
) -> dict[tuple[int, int], int]:
    """Keep every unit of weight independently with probability p.

    Args:
        graph: the input graph
        p: sampling probability
        rng: random stream of the run

    Returns:
        (u, v) -> sampled multiplicity, Binomial(w, p); the weights
        themselves when p == 1
    """
    if p >= 1.0:
        return {(u, v): w for u, v, w in graph.edges}
    ws = np.array([w for _, _, w in graph.edges], dtype=np.int64)
    counts = rng.binomial(ws, p)
    return {(u, v): int(c) for (u, v, _), c in zip(graph.edges, counts)}
