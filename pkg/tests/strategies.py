"""Hypothesis strategies and small fixed graphs shared by the tests."""

import numpy as np
from hypothesis import strategies as st

from congestcut.compare.pieces import (
    Link,
    find_connecting_edges,
    find_fragment_links,
    fragment_edge_sums,
)
from congestcut.config import PipelineConfig
from congestcut.context import TreeContext
from congestcut.decomp.fragments import fragment_decompose
from congestcut.decomp.layering import build_layering
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph
from congestcut.interest.paths import build_interest
from congestcut.routines.highways import broadcast_highway_extremes, broadcast_min_cov_edges

EXACT = {"interest": {"mode": "exact"}}


@st.composite
def trees(draw, min_n: int = 2, max_n: int = 40) -> RootedSpanningTree:
    """Random rooted trees on 0..n-1 with a random root."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    parent = {perm[i]: perm[draw(st.integers(0, i - 1))] for i in range(1, n)}
    return RootedSpanningTree(perm[0], parent)


@st.composite
def graphs_with_tree(
    draw, min_n: int = 2, max_n: int = 12, max_w: int = 16
) -> tuple[WeightedGraph, RootedSpanningTree]:
    """A random connected graph together with one of its spanning trees."""
    tree = draw(trees(min_n, max_n))
    n = tree.n
    pairs = {(min(c, p), max(c, p)) for c, p in tree.parents.items()}
    others = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pairs]
    extra = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
    edges = sorted(pairs) + sorted(extra)
    weights = draw(st.lists(st.integers(1, max_w), min_size=len(edges), max_size=len(edges)))
    return WeightedGraph(n, [(u, v, w) for (u, v), w in zip(edges, weights)]), tree


def cycle(n: int, w: int = 1) -> WeightedGraph:
    return WeightedGraph(n, [(i, (i + 1) % n, w) for i in range(n)])


def path_tree(n: int) -> RootedSpanningTree:
    """0 - 1 - ... - (n-1), rooted at 0."""
    return RootedSpanningTree(0, {i: i - 1 for i in range(1, n)})


def dumbbell() -> WeightedGraph:
    """Two unit K4 on 0..3 and 4..7 joined by the edge (3, 4)."""
    edges = [(u, v, 1) for u in range(4) for v in range(u + 1, 4)]
    edges += [(u + 4, v + 4, 1) for u in range(4) for v in range(u + 1, 4)]
    return WeightedGraph(8, edges + [(3, 4, 1)])


def prepared(
    graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig | None = None
) -> TreeContext:
    """A tree context past BFS and label exchange."""
    ctx = TreeContext(graph, tree, config or PipelineConfig.from_mapping(EXACT))
    ctx.prepare()
    return ctx


def decomposed(
    graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig | None = None
) -> TreeContext:
    """A prepared context with its fragment decomposition and cover values."""
    ctx = prepared(graph, tree, config)
    if len(tree.tree_edges) >= 2:
        fragment_decompose(ctx)
    ctx.compute_cov()
    return ctx


def layered(
    graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig | None = None
) -> TreeContext:
    """A decomposed context with highway tables and layers built."""
    ctx = decomposed(graph, tree, config)
    decomp = ctx.decomposition
    broadcast_highway_extremes(ctx.network, ctx.bfs)
    broadcast_min_cov_edges(ctx.network, ctx.bfs, decomp.highway_scope)
    build_layering(ctx, decomp)
    return ctx


def binary_tree(n: int) -> tuple[WeightedGraph, RootedSpanningTree]:
    """Heap-ordered binary tree with one weight-2 chord from the last vertex to the root."""
    tree = RootedSpanningTree(0, {v: (v - 1) // 2 for v in range(1, n)})
    edges = [(c, p, 1) for c, p in tree.parents.items()]
    return WeightedGraph(n, edges + [(n - 1, 0, 2)]), tree


def chorded_path(n: int, k: int) -> WeightedGraph:
    """Path 0 - ... - (n-1) of weight-2 edges plus chords (i, i + k) of weights 1 to 3."""
    edges = [(i, i + 1, 2) for i in range(n - 1)]
    return WeightedGraph(n, edges + [(i, i + k, 1 + i % 3) for i in range(n - k)])


def random_tree_graph(
    n: int, span: int, extra: int, seed: int
) -> tuple[WeightedGraph, RootedSpanningTree]:
    """Vertex i hangs below one of the `span` vertices before it; `extra` random
    non-tree edges are added."""
    rng = np.random.default_rng(seed)
    parent = {i: int(rng.integers(max(0, i - span), i)) for i in range(1, n)}
    tree = RootedSpanningTree(0, parent)
    pairs = {(p, c) for c, p in parent.items()}
    for _ in range(extra):
        u, v = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((u, v))
    weights = rng.integers(1, 5, len(pairs))
    return WeightedGraph(n, [(u, v, int(w)) for (u, v), w in zip(sorted(pairs), weights)]), tree


@st.composite
def large_graphs_with_tree(
    draw, min_n: int = 1000, max_n: int = 1400
) -> tuple[WeightedGraph, RootedSpanningTree]:
    """Large graphs whose trees range from path-like to bushy."""
    n = draw(st.integers(min_n, max_n))
    span = draw(st.sampled_from([1, 2, 8, n]))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree_graph(n, span, 2 * n, seed)


def staged(
    graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig | None = None
) -> tuple[TreeContext, dict[tuple[int, int], Link], dict[tuple[int, int], Link]]:
    """A layered context with interest sets, Y tables and links.

    Returns:
        the context, the fragment links and the bough links
    """
    ctx = layered(graph, tree, config)
    build_interest(ctx)
    fragment_edge_sums(ctx)
    return ctx, find_fragment_links(ctx), find_connecting_edges(ctx)


def several_fragments() -> list[tuple[WeightedGraph, RootedSpanningTree]]:
    """Fixed graphs whose trees split into several fragments."""
    return [
        (chorded_path(60, 5), path_tree(60)),
        (cycle(48, 2), path_tree(48)),
        random_tree_graph(160, 3, 120, 7),
        random_tree_graph(200, 12, 200, 11),
    ]


SEVERAL_IDS = ["chords", "cycle", "deep", "branchy"]
