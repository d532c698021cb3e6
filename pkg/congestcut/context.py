"""Per-tree state shared by the stages of the 2-respecting pipeline.

A `TreeContext` owns the simulated network of one spanning tree and the
harness-side views of what the vertices have learned so far. Stage code reads
vertex knowledge through the helpers here, which only look at the slots of
the vertex asked about.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Any

from congestcut.config import PipelineConfig
from congestcut.graph.cover import CutCandidate, CutKind, best_candidate
from congestcut.graph.lca import LcaLabel, LcaLabeling, build_lca_labels, decode_label, encode_label
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph
from congestcut.mathutils import ceil_log2, ceil_sqrt
from congestcut.routines.bfs import BfsTree, build_bfs_tree
from congestcut.routines.cover_routing import compute_cov_all
from congestcut.routines.gather import exchange
from congestcut.routines.highways import global_min
from congestcut.sim.engine import Network

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

EdgeRef = namedtuple("EdgeRef", "child pre size cov")
EdgeRef.__doc__ = """What a vertex needs to know about a tree edge to test coverage.

Args:
    child: child vertex, the edge id.
    pre: preorder number of the child.
    size: subtree size of the child.
    cov: cover value of the edge.
"""


def encode_candidate(cand: CutCandidate) -> tuple[int, int, int, int]:
    """Comparable wire form (value, kind, e1, e2); a single edge repeats itself."""
    kind = 0 if cand.kind is CutKind.ONE_RESPECTING else 1
    e1 = cand.edges[0]
    e2 = cand.edges[-1]
    return cand.value, kind, e1, e2


def decode_candidate(words: tuple[int, ...]) -> CutCandidate:
    value, kind, e1, e2 = words
    if kind == 0:
        return CutCandidate.one(e1, value)
    return CutCandidate.two(e1, e2, value)


@dataclass
class StageStats:
    """Counters reported with every tree run."""

    candidates: int = 0
    fragments: int = 0
    layers: int = 0
    max_intpot: int = 0
    pairs: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


class TreeContext:
    """Network, tree and accumulated knowledge of one pipeline run."""

    def __init__(
        self, graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig
    ) -> None:
        self.graph = graph
        self.tree = tree
        self.config = config
        self.network = Network(graph, config.sim)
        self.labels: LcaLabeling = build_lca_labels(tree)
        self.bfs: BfsTree | None = None
        self.cov: dict[int, int] = {}
        self.decomposition: Any = None
        self.layering: Any = None
        self.interest: Any = None
        self.stats = StageStats()
        self._non_tree: dict[int, list[tuple[int, int]]] = {}

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def root(self) -> int:
        """Root of the BFS tree, whose slots hold the globally known tables."""
        assert self.bfs is not None
        return self.bfs.root

    def slots(self, v: int) -> dict[str, Any]:
        return self.network.slots(v)

    def charge(self) -> int:
        """Analytic cost of a delegated O~(sqrt(n) + D) step."""
        height = self.bfs.height if self.bfs else self.n
        return (ceil_sqrt(self.n) + height) * max(1, ceil_log2(self.n))

    def prepare(self) -> None:
        """BFS tree, tree and label injection, label exchange."""
        net = self.network
        self.bfs = build_bfs_tree(net, 0)
        tree = self.tree
        net.inject_oracle(
            "spanning-tree",
            lambda: {
                v: {"tree_parent": tree.parent(v), "tree_children": tree.children(v)}
                for v in range(self.n)
            },
            self.charge(),
        )
        labels = self.labels
        net.inject_oracle(
            "lca-labels",
            lambda: {v: {"label": labels[v]} for v in range(self.n)},
            self.charge(),
        )
        received = exchange(
            net,
            lambda v: {u: [encode_label(labels[v])] for u in self.graph.neighbours(v)},
            "label-exchange",
        )
        for v, per_nbr in received.items():
            self.slots(v)["nbr_labels"] = {
                u: decode_label(items[0])[0] for u, items in per_nbr.items()
            }
            self.slots(v)["candidates"] = None

    def compute_cov(self) -> dict[int, int]:
        """Cover values of every tree edge; runs after the fragment decomposition."""
        self.cov = compute_cov_all(self.network)
        return self.cov

    def label(self, v: int) -> LcaLabel:
        return self.slots(v)["label"]

    def nbr_label(self, v: int, y: int) -> LcaLabel:
        return self.slots(v)["nbr_labels"][y]

    def non_tree(self, v: int) -> list[tuple[int, int]]:
        """(neighbour, weight) of the non-tree edges at v."""
        if v not in self._non_tree:
            s = self.slots(v)
            tree_nbrs = set(s["tree_children"])
            if s["tree_parent"] is not None:
                tree_nbrs.add(s["tree_parent"])
            self._non_tree[v] = [
                (y, w) for y, w in sorted(self.graph.neighbours(v).items()) if y not in tree_nbrs
            ]
        return self._non_tree[v]

    def covers_at(self, v: int, y: int, ref: EdgeRef | tuple) -> bool:
        """True if the edge (v, y) covers the tree edge `ref`, judged at v."""
        pre, size = ref[1], ref[2]
        a = pre <= self.label(v).pre < pre + size
        b = pre <= self.nbr_label(v, y).pre < pre + size
        return a != b

    def record(self, v: int, cand: CutCandidate) -> None:
        """Vertex v keeps the better of its recorded candidate and `cand`."""
        if cand.is_empty:
            return
        s = self.slots(v)
        s["candidates"] = best_candidate(s.get("candidates"), cand)
        self.stats.candidates += 1

    def best_recorded(self, phase: str = "best-candidate") -> CutCandidate | None:
        """Globalize the best recorded candidate over the BFS tree."""

        def local(v: int) -> tuple[int, ...] | None:
            cand = self.slots(v).get("candidates")
            return encode_candidate(cand) if cand is not None else None

        best = global_min(self.network, self.bfs, local, phase)  # type: ignore[arg-type]
        return decode_candidate(best) if best is not None else None  # type: ignore[arg-type]
