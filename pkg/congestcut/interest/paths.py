"""Potentially-interesting root paths of edges, boughs and fragment highways.

A root path is named by a `PathId`: with the skeleton, every vertex expands it
into the chain of fragments whose highways the path uses. An edge keeps the
deepest bottoms b that cover a third of its samples, plus its own root path.
A bough or a highway unions the sets of its edges.

Chains are cut where they join the owner's own root path, so that every
remaining segment either lies on the owner's root path, below the owner's
highway, or on a different root-to-leaf path altogether.
"""

import json
import logging
import math
from collections import namedtuple
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations_with_replacement
from typing import Any

from congestcut.context import TreeContext
from congestcut.decomp.layering import bough_subtree_scope, maximal_bough_paths
from congestcut.decomp.skeleton import PathId, Skeleton
from congestcut.exceptions import InterestBoundExceeded
from congestcut.graph.lca import LcaLabel, in_subtree, is_ancestor, lca_from_labels
from congestcut.interest.sampling import (
    edge_infos,
    exact_bottoms,
    qualifying_count,
    sample_covset,
    sampling_enabled,
)
from congestcut.routines.gather import gather_broadcast

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


class Relation(StrEnum):
    """Where a segment lies relative to the path owning it."""

    ABOVE = "above"
    BELOW = "below"
    ORTHOGONAL = "orthogonal"


Segment = namedtuple("Segment", "fragments relation")
Segment.__doc__ = """Consecutive fragments of one interesting root path.

Args:
    fragments: fragment ids, bottom-up.
    relation: position relative to the owner.
"""


def build_intpot_edge(
    edge: LcaLabel,
    samples: Sequence[tuple[LcaLabel, LcaLabel]],
    self_wins: int,
    lca_label: Callable[[LcaLabel, LcaLabel], LcaLabel],
    skeleton: Skeleton,
    divisor: int = 3,
) -> tuple[PathId, ...]:
    """Root paths a tree edge is potentially interested in.

    Candidate bottoms are the LCAs of pairs of sample endpoints, a sample
    with itself included: far endpoints for bottoms off the edge's subtree,
    near endpoints for bottoms strictly inside it. A bottom qualifies when
    at least ceil(S / divisor) samples reach into its subtree, S counting
    the self-won repetitions too; only the deepest qualifying bottoms are
    kept.

    Args:
        edge: label of the edge's child vertex
        samples: labels of the endpoints of each sampled covering edge
        self_wins: repetitions won by the edge's own weight
        lca_label: label of the LCA of two labelled vertices
        skeleton: the skeleton tree
        divisor: threshold divisor

    Returns:
        the sorted path ids, always including the edge's own root path
    """
    own = skeleton.fragment_of_vertex(edge)
    if not samples:
        return (own,)
    threshold = qualifying_count(len(samples) + self_wins, divisor)
    near: list[LcaLabel] = []
    far: list[LcaLabel] = []
    for a, b in samples:
        inside, outside = (a, b) if in_subtree(a, edge) else (b, a)
        near.append(inside)
        far.append(outside)

    candidates: dict[int, LcaLabel] = {}
    for a, b in combinations_with_replacement(sorted({x.pre: x for x in far}.values()), 2):
        lb = lca_label(a, b)
        if not is_ancestor(lb, edge):
            candidates[lb.pre] = lb
    for a, b in combinations_with_replacement(sorted({x.pre: x for x in near}.values()), 2):
        lb = lca_label(a, b)
        if lb.pre != edge.pre:
            candidates[lb.pre] = lb

    def reach(b: LcaLabel) -> int:
        pool = near if in_subtree(b, edge) else far
        return sum(1 for x in pool if is_ancestor(b, x))

    qualifying = [b for b in candidates.values() if reach(b) >= threshold]
    deepest = [
        b
        for b in qualifying
        if not any(q.pre != b.pre and is_ancestor(b, q) for q in qualifying)
    ]
    return tuple(sorted({own} | {skeleton.fragment_of_vertex(b) for b in deepest}))


def interest_segments(
    skeleton: Skeleton, owner: int, paths: Iterable[PathId], highway: bool
) -> list[Segment]:
    """Fragment segments of a path set, relative to the owner's fragment.

    The owner's strict ancestors form the ABOVE segment. Every other chain
    stops before its first fragment on the owner's chain; a chain stopping
    at the owner itself lies below a highway owner and beside a non-highway
    one.

    Args:
        skeleton: the skeleton tree
        owner: fragment of the owning path
        paths: its potentially-interesting root paths
        highway: True if the owner is the fragment's highway
    """
    owner_chain = skeleton.chain(owner)
    on_owner = set(owner_chain)
    out: list[Segment] = []
    if len(owner_chain) > 1:
        out.append(Segment(owner_chain[1:], Relation.ABOVE))
    for pid in sorted(set(paths)):
        if pid.fragment not in skeleton:
            continue
        frags: list[int] = []
        stop = None
        for f in skeleton.chain(pid.fragment):
            if f in on_owner:
                stop = f
                break
            frags.append(f)
        if not frags:
            continue
        relation = Relation.BELOW if highway and stop == owner else Relation.ORTHOGONAL
        seg = Segment(tuple(frags), relation)
        if seg not in out:
            out.append(seg)
    return out


def nh_owner_fragments(skeleton: Skeleton, paths: Iterable[PathId], owner: int) -> list[int]:
    """Fragments other than `owner` that may hold the non-highway start of a path."""
    found: set[int] = set()
    for pid in paths:
        if pid.nh:
            found.update(skeleton.nh_owners(pid))
    found.discard(owner)
    return sorted(found)


@dataclass
class InterestSet:
    """IntPot of every tree edge, non-highway bough and fragment highway."""

    per_edge: dict[int, tuple[PathId, ...]] = field(default_factory=dict)
    per_bough: dict[int, tuple[PathId, ...]] = field(default_factory=dict)
    per_fragment: dict[int, tuple[PathId, ...]] = field(default_factory=dict)

    @property
    def max_size(self) -> int:
        sizes = [len(p) for p in self.per_edge.values()]
        sizes += [len(p) for p in self.per_bough.values()]
        sizes += [len(p) for p in self.per_fragment.values()]
        return max(sizes, default=0)

    def to_dict(self) -> dict[str, Any]:
        def dump(table: Mapping[int, tuple[PathId, ...]]) -> dict[str, list[list[int]]]:
            return {str(k): [[p.fragment, int(p.nh)] for p in v] for k, v in sorted(table.items())}

        return {
            "edges": dump(self.per_edge),
            "boughs": dump(self.per_bough),
            "fragments": dump(self.per_fragment),
        }


def interest_to_json(interest: InterestSet, indent: int | None = 2) -> str:
    return json.dumps(interest.to_dict(), indent=indent)


def _decode_paths(items: Iterable[tuple[int, ...]]) -> tuple[PathId, ...]:
    return tuple(sorted({PathId(f, bool(nh)) for f, nh in items}))


def edge_interest(ctx: TreeContext) -> dict[int, tuple[PathId, ...]]:
    """IntPot(e) of every tree edge, in its `intpot` slot."""
    skeleton = ctx.decomposition.skeleton
    labels = ctx.labels
    out: dict[int, tuple[PathId, ...]] = {}
    if sampling_enabled(ctx):
        samples = sample_covset(ctx)
        divisor = ctx.config.interest.threshold_divisor

        def lca_label(a: LcaLabel, b: LcaLabel) -> LcaLabel:
            return labels[labels.vertex_of(lca_from_labels(a, b)[0])]

        for c, s in samples.items():
            known = ctx.slots(c)["sample_labels"]
            pairs = [(known[a], known[b]) for a, b in s.samples]
            out[c] = build_intpot_edge(
                ctx.label(c), pairs, s.self_wins, lca_label, skeleton, divisor
            )
    else:
        for c, bottoms in exact_bottoms(ctx).items():
            own = skeleton.fragment_of_vertex(ctx.label(c))
            found = {skeleton.fragment_of_vertex(labels[b]) for b in bottoms}
            out[c] = tuple(sorted(found | {own}))
    for c, paths in out.items():
        ctx.slots(c)["intpot"] = paths
    return out


def lift_to_paths(
    ctx: TreeContext, per_edge: Mapping[int, tuple[PathId, ...]]
) -> tuple[dict[int, tuple[PathId, ...]], dict[int, tuple[PathId, ...]]]:
    """Union the edge sets over every bough and every fragment highway.

    Every vertex below a bough's top edge learns the bough's set
    (`intpot_bough`, by bough key); every vertex of a fragment learns its
    highway's set (`intpot_fragment`, by fragment).

    Returns:
        (bough key -> paths, fragment -> paths)
    """
    net = ctx.network
    decomp = ctx.decomposition
    layering = ctx.layering

    def encode(c: int) -> list[tuple[int, int]]:
        return [(p.fragment, int(p.nh)) for p in per_edge[c]]

    bough_scope = bough_subtree_scope(ctx.tree, layering.nh_boughs)
    got = gather_broadcast(
        net,
        bough_scope,
        lambda v, key: encode(v) if net.slots(v).get("bough") == key else [],
        phase="intpot-boughs",
    )
    per_bough: dict[int, tuple[PathId, ...]] = {}
    for (v, key), items in got.items():
        paths = _decode_paths(items)
        net.slots(v).setdefault("intpot_bough", {})[key] = paths
        if v == key:
            per_bough[key] = paths

    hw_scope = decomp.fragment_scope
    got = gather_broadcast(
        net,
        hw_scope,
        lambda v, key: encode(v)
        if hw_scope.parent(key, v) is not None and net.slots(v)["highway"]
        else [],
        phase="intpot-highways",
    )
    per_fragment: dict[int, tuple[PathId, ...]] = {}
    for (v, key), items in got.items():
        paths = _decode_paths(items)
        net.slots(v).setdefault("intpot_fragment", {})[key] = paths
        per_fragment[key] = paths
    return per_bough, per_fragment


def family_hits(
    ctx: TreeContext, segments: Iterable[Segment], layer: int
) -> set[int]:
    """Skeleton boughs of one layer met by a set of segments."""
    layering = ctx.layering
    hits: set[int] = set()
    for seg in segments:
        for f in seg.fragments:
            if layering.skeleton_layer[f] == layer:
                hits.add(layering.bough_of_fragment[f])
    return hits


def audit_counting_lemma(ctx: TreeContext, interest: InterestSet) -> int:
    """Check that no path is interested in too many boughs of one layer.

    Returns:
        the largest count met

    Raises:
        InterestBoundExceeded: a count above c_b * log2 n.
    """
    skeleton = ctx.decomposition.skeleton
    layering = ctx.layering
    bound = ctx.config.interest.c_b * max(1.0, math.log2(ctx.n))
    owners: list[tuple[str, int, int, tuple[PathId, ...], bool]] = []
    for key, paths in interest.per_bough.items():
        owners.append(("bough", key, layering.nh_boughs[key].fragment, paths, False))
    for fid, paths in interest.per_fragment.items():
        owners.append(("highway", fid, fid, paths, True))
    worst = 0
    for kind, key, owner, paths, highway in owners:
        segments = interest_segments(skeleton, owner, paths, highway)
        for layer in range(1, layering.depth + 1):
            if not maximal_bough_paths(layering, layer):
                continue
            count = len(family_hits(ctx, segments, layer))
            worst = max(worst, count)
            if count > bound:
                raise InterestBoundExceeded(
                    f"{kind} {key} is interested in {count} boughs of layer {layer}, "
                    f"bound {bound:.1f}"
                )
    return worst


def build_interest(ctx: TreeContext) -> InterestSet:
    """IntPot of every edge, bough and highway; audited and stored on `ctx`."""
    edge_infos(ctx)
    per_edge = edge_interest(ctx)
    per_bough, per_fragment = lift_to_paths(ctx, per_edge)
    interest = InterestSet(per_edge, per_bough, per_fragment)
    worst = audit_counting_lemma(ctx, interest)
    ctx.interest = interest
    ctx.stats.max_intpot = interest.max_size
    ctx.stats.extra["max_family_hits"] = worst
    LOGGER.debug(
        "interest sets: largest %d paths, at most %d boughs per layer",
        interest.max_size,
        worst,
    )
    return interest
