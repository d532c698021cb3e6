"""Weighted graphs and rooted spanning trees.

Vertices are the integers `0 .. n-1`. A tree edge is identified by its child
endpoint: the edge `{c, p(c)}` is simply `c`.
"""

from collections import namedtuple
from collections.abc import Iterable, Iterator, Mapping
from functools import cached_property
from pathlib import Path

import networkx as nx

from congestcut.exceptions import InvalidGraph

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


Edge = namedtuple("Edge", "u v w")
Edge.__doc__ = """Undirected weighted edge, normalized so that u < v.

Args:
    u: smaller endpoint.
    v: larger endpoint.
    w: positive integer weight.
"""


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Canonical (smaller, larger) pair of an undirected edge.

    >>> edge_key(5, 2)
    (2, 5)
    """
    return (u, v) if u < v else (v, u)


class WeightedGraph:
    """Simple connected graph with positive integer weights."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]]) -> None:
        self._n = n
        self._edges = tuple(
            sorted(Edge(*edge_key(u, v), int(w)) for u, v, w in edges)
        )
        self._adjacency: list[dict[int, int]] = [{} for _ in range(n)]
        for u, v, w in self._edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InvalidGraph(f"self-loop at vertex {u}")
            if v in self._adjacency[u]:
                raise InvalidGraph(f"parallel edge ({u}, {v})")
            self._adjacency[u][v] = w
            self._adjacency[v][u] = w

    @property
    def n(self) -> int:
        """Number of vertices."""
        return self._n

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """All edges, sorted by (u, v)."""
        return self._edges

    def neighbours(self, v: int) -> Mapping[int, int]:
        """Neighbour -> weight map of vertex v."""
        return self._adjacency[v]

    def weight(self, u: int, v: int) -> int:
        """Weight of edge {u, v}; KeyError when absent."""
        return self._adjacency[u][v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u]

    @property
    def total_weight(self) -> int:
        return sum(e.w for e in self._edges)

    def validate(self) -> None:
        """Check connectivity and the weight cap 1 <= w <= n^4.

        Raises:
            InvalidGraph: on any violated invariant.
        """
        if self._n < 1:
            raise InvalidGraph("a graph needs at least one vertex")
        cap = self._n**4
        for u, v, w in self._edges:
            if not 1 <= w <= max(1, cap):
                raise InvalidGraph(f"weight {w} of edge ({u}, {v}) outside [1, {cap}]")
        if self._n > 1 and not nx.is_connected(self.to_networkx()):
            raise InvalidGraph("graph is not connected")

    def to_networkx(self) -> nx.Graph:
        """Copy as a networkx graph with a `weight` edge attribute."""
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_weighted_edges_from(self._edges)
        return g

    @staticmethod
    def from_networkx(g: nx.Graph, weight: str = "weight") -> "WeightedGraph":
        """Build from a networkx graph whose nodes are 0 .. n-1."""
        return WeightedGraph(
            g.number_of_nodes(),
            ((u, v, d.get(weight, 1)) for u, v, d in g.edges(data=True)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self._n}, m={self.m})"


class RootedSpanningTree:
    """Spanning tree of a graph, rooted and oriented child -> parent."""

    def __init__(self, root: int, parent: Mapping[int, int]) -> None:
        self._root = root
        self._parent = dict(parent)
        self._parent.pop(root, None)
        n = len(self._parent) + 1
        self._children: list[list[int]] = [[] for _ in range(n)]
        for c, p in self._parent.items():
            if not (0 <= c < n and 0 <= p < n):
                raise InvalidGraph(f"tree edge ({c}, {p}) outside 0..{n - 1}")
            self._children[p].append(c)
        for ch in self._children:
            ch.sort()
        self._depth = self._compute_depths(n)

    def _compute_depths(self, n: int) -> list[int]:
        depth = [-1] * n
        depth[self._root] = 0
        order = [self._root]
        for v in order:
            for c in self._children[v]:
                depth[c] = depth[v] + 1
                order.append(c)
        if len(order) != n:
            raise InvalidGraph("parent map is not a tree spanning 0..n-1 from the root")
        self._order = tuple(order)
        return depth

    @property
    def root(self) -> int:
        return self._root

    @property
    def n(self) -> int:
        return len(self._depth)

    def parent(self, v: int) -> int | None:
        """Parent of v, None for the root."""
        return self._parent.get(v)

    @property
    def parents(self) -> Mapping[int, int]:
        """child -> parent map (the root is absent)."""
        return self._parent

    def children(self, v: int) -> list[int]:
        """Children of v in ascending order."""
        return self._children[v]

    def depth(self, v: int) -> int:
        return self._depth[v]

    @property
    def height(self) -> int:
        return max(self._depth)

    @property
    def order(self) -> tuple[int, ...]:
        """Vertices in breadth-first order from the root."""
        return self._order

    @property
    def tree_edges(self) -> list[int]:
        """Tree edges as child vertices, ascending."""
        return sorted(self._parent)

    def is_tree_edge(self, u: int, v: int) -> bool:
        return self._parent.get(u) == v or self._parent.get(v) == u

    def path_to_root(self, v: int) -> Iterator[int]:
        """Tree edges (child ids) from v up to the root."""
        while v != self._root:
            yield v
            v = self._parent[v]

    @cached_property
    def _intervals(self) -> tuple[list[int], list[int]]:
        tin = [0] * self.n
        tout = [0] * self.n
        clock = 0
        stack: list[tuple[int, bool]] = [(self._root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                tout[v] = clock
                continue
            tin[v] = clock
            clock += 1
            stack.append((v, True))
            for c in reversed(self._children[v]):
                stack.append((c, False))
        return tin, tout

    def is_ancestor(self, a: int, b: int) -> bool:
        """True if a is an ancestor of b (or a == b)."""
        tin, tout = self._intervals
        return tin[a] <= tin[b] < tout[a]

    def subtree(self, v: int) -> list[int]:
        """Vertices of the subtree rooted at v."""
        out = [v]
        for u in out:
            out.extend(self._children[u])
        return out

    def edge_weight(self, graph: WeightedGraph, c: int) -> int:
        """Weight of tree edge c in graph."""
        return graph.weight(c, self._parent[c])

    def validate(self, graph: WeightedGraph) -> None:
        """Check that the tree spans `graph` and uses only its edges.

        Raises:
            InvalidGraph: a tree edge is missing from the graph or sizes differ.
        """
        if self.n != graph.n:
            raise InvalidGraph(f"tree spans {self.n} vertices, graph has {graph.n}")
        for c, p in self._parent.items():
            if not graph.has_edge(c, p):
                raise InvalidGraph(f"tree edge ({c}, {p}) is not a graph edge")

    @staticmethod
    def from_parents(root: int, parent: Mapping[int, int]) -> "RootedSpanningTree":
        return RootedSpanningTree(root, parent)

    @staticmethod
    def from_graph_edges(
        edges: Iterable[tuple[int, int]], n: int, root: int = 0
    ) -> "RootedSpanningTree":
        """Orient an undirected edge set spanning 0..n-1 away from `root`.

        Raises:
            InvalidGraph: the edges do not form a spanning tree.
        """
        adjacency: list[list[int]] = [[] for _ in range(n)]
        count = 0
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
            count += 1
        if count != n - 1:
            raise InvalidGraph(f"a spanning tree of {n} vertices needs {n - 1} edges")
        parent: dict[int, int] = {}
        seen = {root}
        order = [root]
        for v in order:
            for u in sorted(adjacency[v]):
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    order.append(u)
        if len(seen) != n:
            raise InvalidGraph("edges do not span the vertex set")
        return RootedSpanningTree(root, parent)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedSpanningTree):
            return NotImplemented
        return self._root == other._root and self._parent == other._parent

    def __repr__(self) -> str:
        return f"RootedSpanningTree(root={self._root}, n={self.n})"


def _tokens(path: Path) -> list[list[str]]:
    lines = [ln.split() for ln in Path(path).read_text().splitlines()]
    return [ln for ln in lines if ln and not ln[0].startswith("#")]


def read_graph(path: Path | str) -> WeightedGraph:
    """Read the "n m" header followed by m "u v w" lines.

    Raises:
        InvalidGraph: malformed file or a graph violating the invariants.
    """
    rows = _tokens(Path(path))
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(u), int(v), int(w)) for u, v, w in rows[1:]]
    except (IndexError, ValueError) as ex:
        raise InvalidGraph(f"malformed graph file {path}: {ex}") from ex
    if len(edges) != m:
        raise InvalidGraph(f"graph file {path} announces {m} edges, has {len(edges)}")
    g = WeightedGraph(n, edges)
    g.validate()
    return g


def write_graph(graph: WeightedGraph, path: Path | str) -> None:
    lines = [f"{graph.n} {graph.m}"] + [f"{u} {v} {w}" for u, v, w in graph.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_tree(path: Path | str) -> RootedSpanningTree:
    """Read a "root" line followed by n-1 "child parent" lines."""
    rows = _tokens(Path(path))
    try:
        root = int(rows[0][0])
        parent = {int(c): int(p) for c, p in rows[1:]}
    except (IndexError, ValueError) as ex:
        raise InvalidGraph(f"malformed tree file {path}: {ex}") from ex
    return RootedSpanningTree(root, parent)


def write_tree(tree: RootedSpanningTree, path: Path | str) -> None:
    lines = [str(tree.root)] + [f"{c} {p}" for c, p in sorted(tree.parents.items())]
    Path(path).write_text("\n".join(lines) + "\n")
