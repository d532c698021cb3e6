"""Random connected weighted graphs for the harness.

Every generator is a pure function of (n, weight range, density, rng); the
rng is the only source of randomness, so a seed fixes the graph.
"""

import logging
from collections.abc import Callable
from enum import StrEnum
from pathlib import Path

import networkx as nx
import numpy as np

from congestcut.exceptions import InvalidGraph
from congestcut.graph.weighted import WeightedGraph, read_graph

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

MAX_ATTEMPTS = 100


class Generator(StrEnum):
    ERDOS_RENYI = "erdos-renyi"
    CYCLE_CHORDS = "cycle+chords"
    TWO_CLIQUE_BRIDGE = "two-clique-bridge"
    CATERPILLAR = "caterpillar"
    FILE = "file"


def _weighted(
    g: nx.Graph, weights: tuple[int, int], rng: np.random.Generator
) -> WeightedGraph:
    lo, hi = weights
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    ws = rng.integers(lo, hi + 1, size=len(edges))
    return WeightedGraph(g.number_of_nodes(), ((u, v, int(w)) for (u, v), w in zip(edges, ws)))


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> nx.Graph:
    """G(n, p), redrawn until connected.

    Raises:
        InvalidGraph: no connected draw in `MAX_ATTEMPTS` tries.
    """
    for _ in range(MAX_ATTEMPTS):
        g = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
        if nx.is_connected(g):
            return g
    raise InvalidGraph(f"no connected G({n}, {p}) in {MAX_ATTEMPTS} attempts")


def cycle_chords(n: int, p: float, rng: np.random.Generator) -> nx.Graph:
    """A cycle with every other vertex pair added with probability p."""
    g = nx.cycle_graph(n)
    for u in range(n):
        for v in range(u + 2, n):
            if (u, v) != (0, n - 1) and rng.random() < p:
                g.add_edge(u, v)
    return g


def two_clique_bridge(n: int, p: float, rng: np.random.Generator) -> nx.Graph:
    """Two cliques of sizes floor(n/2) and ceil(n/2) joined by one edge."""
    half = n // 2
    g = nx.complete_graph(half)
    g.add_edges_from((half + u, half + v) for u, v in nx.complete_graph(n - half).edges())
    g.add_edge(int(rng.integers(half)), half + int(rng.integers(n - half)))
    return g


def caterpillar(n: int, p: float, rng: np.random.Generator) -> nx.Graph:
    """A path spine with one leg per spine vertex, plus random chords."""
    spine = (n + 1) // 2
    g = nx.path_graph(spine)
    for i in range(spine, n):
        g.add_edge(i - spine, i)
    for u in range(n):
        for v in range(u + 1, n):
            if not g.has_edge(u, v) and rng.random() < p / 4:
                g.add_edge(u, v)
    return g


GENERATORS: dict[Generator, Callable[[int, float, np.random.Generator], nx.Graph]] = {
    Generator.ERDOS_RENYI: erdos_renyi,
    Generator.CYCLE_CHORDS: cycle_chords,
    Generator.TWO_CLIQUE_BRIDGE: two_clique_bridge,
    Generator.CATERPILLAR: caterpillar,
}


def generate(
    kind: Generator | str,
    n: int,
    weights: tuple[int, int],
    seed: int,
    p: float = 0.2,
    path: Path | str | None = None,
) -> WeightedGraph:
    """One connected weighted graph, a pure function of the arguments.

    Args:
        kind: generator name
        n: number of vertices, ignored for `file`
        weights: inclusive weight range
        seed: seed of the graph's random stream
        p: edge density of the random parts
        path: graph file of the `file` generator

    Raises:
        InvalidGraph: unknown generator, missing path or invalid result.
    """
    try:
        kind = Generator(kind)
    except ValueError as ex:
        raise InvalidGraph(f"unknown generator {kind!r}") from ex
    if kind is Generator.FILE:
        if path is None:
            raise InvalidGraph("the file generator needs a path")
        graph = read_graph(path)
    else:
        if n < 2:
            raise InvalidGraph(f"generators need n >= 2, got {n}")
        rng = np.random.default_rng(seed)
        graph = _weighted(GENERATORS[kind](n, p, rng), weights, rng)
    graph.validate()
    LOGGER.debug("%s graph: n=%d m=%d (seed %d)", kind, graph.n, graph.m, seed)
    return graph
