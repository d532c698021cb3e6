"""Distributed BFS tree, the backbone of every global broadcast.

The root floods its depth; a vertex adopts the smallest-id sender of the
first depth messages it hears as its parent, announces its own depth to the
other neighbours and sends JOIN to the parent. JOINs arrive two rounds after
the announcement, so every vertex halts two rounds after announcing.
"""

import logging

from congestcut.graph.weighted import RootedSpanningTree
from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Message, Network, NodeContext, NodeProgram

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

_DEPTH, _JOIN = 0, 1


class BfsProgram(NodeProgram):
    """One vertex of the BFS flood."""

    def __init__(self, ctx: NodeContext, root: int) -> None:
        super().__init__(ctx)
        self._is_root = ctx.vertex == root
        self.parent: int | None = None
        self.depth: int | None = 0 if self._is_root else None
        self.children: list[int] = []
        self._announced: int | None = None

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        for sender, msg in inbox.items():
            if msg[0] == _JOIN:
                self.children.append(sender)
        if self._announced is not None:
            if rnd >= self._announced + 2:
                self.halt()
            return {}
        if self._is_root:
            self._announced = rnd
            if not self.ctx.neighbours:
                self.halt()
            return {u: (_DEPTH, 0) for u in self.ctx.neighbours}
        heard = {s: m[1] for s, m in inbox.items() if m[0] == _DEPTH}
        if not heard:
            self.sleeping = True
            return {}
        self.sleeping = False
        self.parent = min(heard)
        self.depth = heard[self.parent] + 1
        self._announced = rnd
        out: dict[int, Message] = {
            u: (_DEPTH, self.depth) for u in self.ctx.neighbours if u != self.parent
        }
        out[self.parent] = (_JOIN,)
        return out

    @property
    def output(self) -> tuple[int | None, list[int], int | None]:
        return self.parent, sorted(self.children), self.depth


class BfsTree:
    """BFS tree known distributively: each vertex holds its parent and children."""

    def __init__(self, root: int, parent: dict[int, int], depth: list[int]) -> None:
        self.tree = RootedSpanningTree.from_parents(root, parent)
        self.depth = depth
        self.scope = TreeScope.whole_tree(self.tree)

    @property
    def root(self) -> int:
        return self.tree.root

    @property
    def height(self) -> int:
        return max(self.depth)


def build_bfs_tree(network: Network, root: int = 0) -> BfsTree:
    """Flood from `root` and store bfs_parent, bfs_children, bfs_depth slots.

    Args:
        network: the network; the graph must be connected
        root: the vertex starting the flood

    Returns:
        the BFS tree
    """
    outputs = network.run("bfs", lambda ctx: BfsProgram(ctx, root))
    parent: dict[int, int] = {}
    depth = [0] * network.n
    for v, (p, children, d) in outputs.items():
        slots = network.slots(v)
        slots["bfs_parent"] = p
        slots["bfs_children"] = children
        slots["bfs_depth"] = d
        if p is not None:
            parent[v] = p
        depth[v] = d if d is not None else 0
    LOGGER.debug("BFS tree of height %d", max(depth))
    return BfsTree(root, parent, depth)
