"""Minimum cut: sample, pack trees, take the best 2-respecting cut of each."""

import logging
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import numpy as np

from congestcut.bench.oracles import brute_force_2respecting, stoer_wagner
from congestcut.config import PipelineConfig
from congestcut.driver.packing import (
    greedy_tree_packing,
    karger_sample,
    sampling_probability,
    trees_count,
)
from congestcut.driver.pipeline import min_2respecting
from congestcut.graph.cover import CutCandidate, crosses_cut
from congestcut.graph.lca import build_lca_labels
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph
from congestcut.mathutils import ceil_log2, ceil_sqrt
from congestcut.sim.metrics import OracleStep, SimMetrics

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


@dataclass
class MinCutResult:
    """The minimum cut found over all packed trees."""

    candidate: CutCandidate
    tree_index: int
    """index of the first tree reaching the value"""

    tree: RootedSpanningTree
    cut_edges: dict[int, list[int]] = field(default_factory=dict)
    """vertex -> neighbours across the cut"""

    metrics: SimMetrics = field(default_factory=SimMetrics)
    trees: int = 1
    probability: float = 1.0
    """Karger sampling probability used for the packing"""

    stats: dict[str, int] = field(default_factory=dict)

    @property
    def value(self) -> int:
        return self.candidate.value

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.candidate.value,
            "kind": str(self.candidate.kind),
            "edges": list(self.candidate.edges),
            "tree_index": self.tree_index,
            "rounds_pure": self.metrics.rounds_pure,
            "rounds_charged": self.metrics.rounds_charged,
            "metrics": self.metrics.to_dict(),
        }


def bfs_spanning_tree(graph: WeightedGraph, root: int = 0) -> RootedSpanningTree:
    edges = nx.bfs_tree(graph.to_networkx(), root).edges()
    return RootedSpanningTree.from_graph_edges(edges, graph.n, root)


def central_cut_edges(
    graph: WeightedGraph, tree: RootedSpanningTree, cand: CutCandidate
) -> dict[int, list[int]]:
    """Crossing neighbours of every vertex, computed from the whole graph."""
    labels = build_lca_labels(tree)
    out: dict[int, list[int]] = {v: [] for v in range(graph.n)}
    for u, v, _ in graph.edges:
        if crosses_cut(labels, (u, v), cand):
            out[u].append(v)
            out[v].append(u)
    return {v: sorted(ys) for v, ys in out.items()}


def packing_charge(graph: WeightedGraph, k: int) -> int:
    """Rounds a distributed packing of k trees is charged: k (sqrt(n) + D) log n."""
    diameter = nx.diameter(graph.to_networkx()) if graph.n > 1 else 0
    return k * (ceil_sqrt(graph.n) + diameter) * max(1, ceil_log2(graph.n))


def min_cut(graph: WeightedGraph, config: PipelineConfig | None = None) -> MinCutResult:
    """Minimum cut of a connected graph, correct with high probability.

    Small graphs are answered exhaustively on a BFS tree. Otherwise the
    graph is sampled down to a polylogarithmic cut value with a central
    estimate of the minimum cut, k trees are packed greedily on the sample
    and the 2-respecting pipeline runs on every tree of the original graph.

    Args:
        graph: connected input graph
        config: run parameters, defaults when omitted

    Returns:
        the best candidate, ties broken by (value, tree index, edges)
    """
    config = config or PipelineConfig()
    dcfg = config.driver
    graph.validate()

    if graph.n <= dcfg.brute_force_cap:
        tree = bfs_spanning_tree(graph)
        cand = brute_force_2respecting(graph, tree, cap=dcfg.brute_force_cap)
        LOGGER.info("n=%d answered exhaustively: %s", graph.n, cand)
        return MinCutResult(cand, 0, tree, central_cut_edges(graph, tree, cand))

    opt, _ = stoer_wagner(graph)
    p = sampling_probability(graph.n, opt, dcfg.c_sample)
    rng = np.random.default_rng(np.random.SeedSequence(config.sim.seed).spawn(graph.n + 1)[-1])
    weights = karger_sample(graph, p, rng)
    k = trees_count(graph.n, dcfg)
    packing = greedy_tree_packing(graph, k, weights)
    LOGGER.debug("estimate %d, sampling probability %.4f, %d trees", opt, p, k)

    metrics = SimMetrics()
    metrics.oracle_steps.append(OracleStep("min-cut-estimate", packing_charge(graph, 1)))
    metrics.oracle_steps.append(OracleStep("tree-packing", packing_charge(graph, k)))
    best: tuple[tuple[int, int, tuple[int, ...]], MinCutResult] | None = None
    stats: dict[str, int] = {"fragments": 0, "layers": 0, "max_intpot": 0}
    for i, tree in enumerate(packing.trees):
        run = min_2respecting(graph, tree, config)
        metrics.merge(run.metrics)
        stats["fragments"] = max(stats["fragments"], run.stats.fragments)
        stats["layers"] = max(stats["layers"], run.stats.layers)
        stats["max_intpot"] = max(stats["max_intpot"], run.stats.max_intpot)
        key = (run.candidate.value, i, run.candidate.edges)
        if best is None or key < best[0]:
            best = (key, MinCutResult(run.candidate, i, tree, run.cut_edges))
    assert best is not None
    result = best[1]
    result.metrics = metrics
    result.trees = k
    result.probability = p
    result.stats = stats
    LOGGER.info("min cut %d from tree %d of %d", result.value, result.tree_index, k)
    return result
