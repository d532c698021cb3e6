"""Cover predicates, cut candidates and the centralized cover-value oracle.

A graph edge x covers the tree edge e when e lies on the tree path between
the endpoints of x, equivalently when exactly one endpoint of x is in the
subtree below e. Every cut value in the package is derived from

    Cut(e) = Cov(e)
    Cut(e, f) = Cov(e) + Cov(f) - 2 Cov(e, f)
"""

from dataclasses import dataclass
from enum import StrEnum
from itertools import combinations

from congestcut.graph.lca import LcaLabeling, in_subtree
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


class CutKind(StrEnum):
    ONE_RESPECTING = "one-respecting"
    TWO_RESPECTING = "two-respecting"


@dataclass(frozen=True)
class CutCandidate:
    """A cut defined by one or two tree edges, with its value."""

    kind: CutKind
    """one- or two-respecting"""

    edges: tuple[int, ...]
    """tree edges (child ids), ascending"""

    value: int
    """total weight of the crossing edges"""

    @staticmethod
    def one(e: int, value: int) -> "CutCandidate":
        return CutCandidate(CutKind.ONE_RESPECTING, (e,), value)

    @staticmethod
    def two(e: int, f: int, value: int) -> "CutCandidate":
        """Two-respecting candidate; (e, e) is kept as the empty cut."""
        return CutCandidate(CutKind.TWO_RESPECTING, tuple(sorted((e, f))), value)

    @property
    def is_empty(self) -> bool:
        """True for a pair with equal edges, which no edge crosses."""
        return self.kind is CutKind.TWO_RESPECTING and self.edges[0] == self.edges[1]

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Order used whenever candidates are compared: value, then edges."""
        return self.value, self.edges

    def to_dict(self) -> dict:
        return {"kind": str(self.kind), "edges": list(self.edges), "value": self.value}


def best_candidate(*cands: CutCandidate | None) -> CutCandidate | None:
    """Smallest candidate by `sort_key`, ignoring None."""
    present = [c for c in cands if c is not None]
    return min(present, key=lambda c: c.sort_key) if present else None


def covers(labels: LcaLabeling, x: tuple[int, int], e: int) -> bool:
    """True if the edge x = (u, v) covers the tree edge with child e.

    Args:
        labels: LCA labels of the tree
        x: any graph edge, as a pair of endpoints
        e: tree edge, as its child vertex

    Returns:
        whether exactly one endpoint of x lies in the subtree below e
    """
    c = labels[e]
    return in_subtree(labels[x[0]], c) != in_subtree(labels[x[1]], c)


def crosses_cut(labels: LcaLabeling, x: tuple[int, int], cand: CutCandidate) -> bool:
    """True if the edge x crosses the cut defined by `cand`.

    A two-respecting cut is crossed by x iff x covers exactly one of its
    tree edges; a pair with equal edges is never crossed.
    """
    if cand.kind is CutKind.ONE_RESPECTING:
        return covers(labels, x, cand.edges[0])
    e, f = cand.edges
    return covers(labels, x, e) != covers(labels, x, f)


class CoverTable:
    """Exhaustive single and pairwise cover values of one tree."""

    def __init__(self, tree: RootedSpanningTree, graph: WeightedGraph) -> None:
        self._cov: dict[int, int] = {e: 0 for e in tree.tree_edges}
        self._pair: dict[tuple[int, int], int] = {}
        for u, v, w in graph.edges:
            path = _tree_path(tree, u, v)
            for e in path:
                self._cov[e] += w
            for e, f in combinations(sorted(path), 2):
                self._pair[(e, f)] = self._pair.get((e, f), 0) + w

    def cov(self, e: int) -> int:
        """Cov(e), the weight of every edge covering e, e included."""
        return self._cov[e]

    def pair(self, e: int, f: int) -> int:
        """Cov(e, f); Cov(e, e) = Cov(e)."""
        if e == f:
            return self._cov[e]
        return self._pair.get((e, f) if e < f else (f, e), 0)

    def cut(self, e: int, f: int | None = None) -> int:
        """Value of the cut respecting e (and f)."""
        if f is None or f == e:
            return self._cov[e]
        return self._cov[e] + self._cov[f] - 2 * self.pair(e, f)

    @property
    def tree_edges(self) -> list[int]:
        return sorted(self._cov)


def _tree_path(tree: RootedSpanningTree, u: int, v: int) -> set[int]:
    up = set(tree.path_to_root(u))
    vp = set(tree.path_to_root(v))
    return up ^ vp


def cov_oracle(tree: RootedSpanningTree, graph: WeightedGraph) -> CoverTable:
    """Reference Cov(e) and Cov(e, f) by enumerating every tree path."""
    return CoverTable(tree, graph)


def cut_value(
    graph: WeightedGraph, tree: RootedSpanningTree, edges: tuple[int, ...]
) -> int:
    """Crossing weight of the cut defined by removing `edges` from the tree.

    A vertex lies on the root side iff an even number of the removed edges
    sits on its root path.
    """
    removed = set(edges)
    side = [0] * graph.n
    for v in tree.order:
        p = tree.parent(v)
        if p is not None:
            side[v] = side[p] ^ (1 if v in removed else 0)
    return sum(w for u, v, w in graph.edges if side[u] != side[v])
