"""Bough layerings of the non-highway forests and of the skeleton tree.

A leaf edge has layer 1. An inner edge takes the largest layer among the
edges directly below it, plus one when that largest layer occurs twice. The
maximal runs of equal-layer edges are the boughs; boughs of one layer are
pairwise orthogonal and there are at most ceil(log2 n) + 1 layers.

The non-highway layering is one leaf-up batch per fragment forest; the
skeleton layering needs no communication since every vertex holds the
skeleton.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from congestcut.context import TreeContext
from congestcut.decomp.fragments import FragmentDecomposition
from congestcut.decomp.skeleton import Skeleton
from congestcut.exceptions import DecompositionInvariantViolation
from congestcut.graph.weighted import RootedSpanningTree
from congestcut.mathutils import ceil_log2
from congestcut.routines.batch import AggregateSpec, Direction, Value, pipelined_batch
from congestcut.routines.gather import exchange
from congestcut.routines.scope import TreeScope

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


def layer_rule(child_layers: Iterable[int]) -> int:
    """Layer of an edge given the layers of the edges directly below it.

    >>> layer_rule([]), layer_rule([1]), layer_rule([1, 1]), layer_rule([2, 1, 1])
    (1, 1, 2, 2)
    """
    layers = sorted(child_layers, reverse=True)
    if not layers:
        return 1
    if len(layers) > 1 and layers[0] == layers[1]:
        return layers[0] + 1
    return layers[0]


def _top_combine(a: Value, b: Value) -> Value:
    """(max layer, occurrences of it capped at 2)."""
    if a is None:
        return b
    if b is None:
        return a
    if a[0] == b[0]:  # type: ignore[index]
        return (a[0], min(2, a[1] + b[1]))  # type: ignore[index]
    return a if a[0] > b[0] else b  # type: ignore[index,operator]


def _lift_layer(acc: Value) -> int:
    if acc is None:
        return 1
    top, count = acc  # type: ignore[misc]
    return top + 1 if count >= 2 else top


@dataclass(frozen=True)
class Bough:
    """A maximal run of equal-layer edges, listed top to bottom."""

    key: int
    """child vertex of the top edge for non-highway boughs, top fragment id
    for skeleton boughs"""

    layer: int
    edges: tuple[int, ...]
    """child vertices (non-highway) or fragment ids (skeleton), top to bottom"""

    fragment: int | None = None
    """owning fragment of a non-highway bough"""

    @property
    def highway(self) -> bool:
        return self.fragment is None

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class Layering:
    """Layers of every non-highway edge and of every fragment highway."""

    nonhighway_layer: dict[int, int] = field(default_factory=dict)
    skeleton_layer: dict[int, int] = field(default_factory=dict)
    nh_boughs: dict[int, Bough] = field(default_factory=dict)
    skeleton_boughs: dict[int, Bough] = field(default_factory=dict)
    bough_of_edge: dict[int, int] = field(default_factory=dict)
    bough_of_fragment: dict[int, int] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        """Number of layers, L."""
        return max(
            list(self.nonhighway_layer.values()) + list(self.skeleton_layer.values()),
            default=0,
        )

    def check_invariants(self, n: int) -> None:
        """Raises DecompositionInvariantViolation if L > ceil(log2 n) + 1."""
        bound = ceil_log2(max(1, n)) + 1
        if self.depth > bound:
            raise DecompositionInvariantViolation(f"{self.depth} layers exceed {bound}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "nonhighway": {str(c): ly for c, ly in sorted(self.nonhighway_layer.items())},
            "skeleton": {str(f): ly for f, ly in sorted(self.skeleton_layer.items())},
        }


def layer_skeleton(skeleton: Skeleton) -> dict[int, int]:
    """Layer of every fragment highway, computed from the skeleton alone."""
    layers: dict[int, int] = {}
    pending = sorted(skeleton.fragments, key=lambda f: -skeleton.entry(f).root_depth)
    for fid in pending:
        below = [layers[g] for g in skeleton.rooted_at(fid)]
        layers[fid] = layer_rule(below)
    return layers


def skeleton_boughs(skeleton: Skeleton, layers: Mapping[int, int]) -> dict[int, Bough]:
    """Maximal same-layer skeleton paths, keyed by their top fragment."""
    boughs: dict[int, Bough] = {}
    for fid in skeleton.fragments:
        parent = skeleton.parent(fid)
        if parent is not None and layers[parent] == layers[fid]:
            continue
        path = [fid]
        while True:
            nxt = [g for g in skeleton.rooted_at(path[-1]) if layers[g] == layers[fid]]
            if not nxt:
                break
            path.append(nxt[0])
        boughs[fid] = Bough(fid, layers[fid], tuple(path))
    return boughs


def layer_nonhighways(
    ctx: TreeContext, decomp: FragmentDecomposition
) -> tuple[dict[int, int], dict[int, Bough]]:
    """Layer of every non-highway edge, one leaf-up batch over all fragments.

    Every non-highway edge's child stores `nh_layer` and `bough` (the child
    of its bough's top edge).

    Returns:
        (child -> layer, bough key -> Bough)
    """
    net = ctx.network
    tree = ctx.tree
    forest = TreeScope(
        {
            fid: {c: tree.parent(c) for c in frag.nonhighway}  # type: ignore[misc]
            for fid, frag in decomp.fragments.items()
        }
    )
    acc = pipelined_batch(
        net,
        forest,
        [
            AggregateSpec(
                Direction.UP,
                _top_combine,
                None,
                None,
                lambda v, a: (_lift_layer(a), 1),
                "nh-layer",
            )
        ],
        "nh-layering",
    )
    layers: dict[int, int] = {}
    for fid in forest.keys:
        for c in forest.edges(fid):
            layers[c] = _lift_layer(acc.get(0, c, fid))
            net.slots(c)["nh_layer"] = layers[c]

    # a child learns whether its parent edge continues its bough
    told = exchange(
        net,
        lambda v: {
            c: [(net.slots(v).get("nh_layer", 0) if not net.slots(v).get("highway") else 0,)]
            for c in net.slots(v)["tree_children"]
        },
        "nh-layer-exchange",
    )

    def bough_top(v: int, key: int) -> Value:
        s = net.slots(v)
        if v not in layers:
            return None
        above = told[v][s["tree_parent"]][0][0]
        return None if above == layers[v] else v

    tops = pipelined_batch(
        net,
        forest,
        [AggregateSpec(Direction.DOWN, lambda a, b: b if b is not None else a, None, bough_top)],
        "nh-boughs",
    )
    members: dict[int, list[int]] = {}
    owner: dict[int, int] = {}
    for fid in forest.keys:
        for c in forest.edges(fid):
            top = tops.get(0, c, fid)
            net.slots(c)["bough"] = top
            members.setdefault(top, []).append(c)  # type: ignore[arg-type]
            owner[top] = fid  # type: ignore[index]
    boughs = {
        top: Bough(top, layers[top], tuple(sorted(cs, key=tree.depth)), owner[top])
        for top, cs in members.items()
    }
    return layers, boughs


def maximal_bough_paths(layering: Layering, i: int) -> list[Bough]:
    """All boughs of layer i, non-highway first, each group by key."""
    nh = [b for _, b in sorted(layering.nh_boughs.items()) if b.layer == i]
    hw = [b for _, b in sorted(layering.skeleton_boughs.items()) if b.layer == i]
    return nh + hw


def build_layering(ctx: TreeContext, decomp: FragmentDecomposition) -> Layering:
    """Both layerings and their boughs; stores `hw_layer` at every vertex."""
    nh_layers, nh_boughs = layer_nonhighways(ctx, decomp)
    sk_layers = layer_skeleton(decomp.skeleton)
    sk_boughs = skeleton_boughs(decomp.skeleton, sk_layers)
    layering = Layering(nh_layers, sk_layers, nh_boughs, sk_boughs)
    for key, b in nh_boughs.items():
        for c in b.edges:
            layering.bough_of_edge[c] = key
    for key, b in sk_boughs.items():
        for fid in b.edges:
            layering.bough_of_fragment[fid] = key
    for v in range(ctx.n):
        ctx.slots(v)["hw_layer"] = sk_layers
    layering.check_invariants(ctx.n)
    ctx.layering = layering
    ctx.stats.layers = layering.depth
    LOGGER.debug(
        "%d layers, %d non-highway boughs, %d skeleton boughs",
        layering.depth,
        len(nh_boughs),
        len(sk_boughs),
    )
    return layering


def bough_subtree_scope(tree: RootedSpanningTree, boughs: Mapping[int, Bough]) -> TreeScope:
    """The subtree below the top edge of every non-highway bough.

    Keyed by bough and rooted at the top edge's child; boughs of one layer
    give disjoint trees.
    """
    parents: dict[int, dict[int, int]] = {}
    members: dict[int, list[int]] = {}
    for key, b in boughs.items():
        top = b.edges[0]
        below = (c for c in tree.subtree(top) if c != top)
        parents[key] = {c: tree.parent(c) for c in below}  # type: ignore[misc]
        members[key] = [top]
    return TreeScope(parents, members=members)
