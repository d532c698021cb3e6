"""The minimum 2-respecting cut of one spanning tree.

Stages run in order on one simulated network; every stage records its
candidates at the vertices that evaluate them and the global minimum is
taken once at the end. Afterwards every vertex marks which of its incident
edges cross the winning cut.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from congestcut.compare import (
    Link,
    NhHighwayJob,
    compare_nh_cross_fragment,
    compare_nh_highway,
    compare_nh_local,
    compare_same_fragment_highway,
    find_connecting_edges,
    find_fragment_links,
    fragment_edge_lists,
    fragment_edge_sums,
    nh_highway_no_edge,
)
from congestcut.config import PipelineConfig
from congestcut.context import StageStats, TreeContext
from congestcut.decomp import build_layering, fragment_decompose
from congestcut.graph.cover import CutCandidate
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph
from congestcut.interest import (
    Relation,
    build_interest,
    interest_segments,
    nh_owner_fragments,
    pair_superhighways,
)
from congestcut.partition import (
    PartitionJob,
    dnc_same_superhighway,
    dnc_two_superhighways,
    partition_nonhighway,
)
from congestcut.routines.highways import (
    broadcast_highway_extremes,
    broadcast_min_cov_edges,
    global_min,
    globalize,
)
from congestcut.sim.metrics import SimMetrics

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


@dataclass
class TreeRunResult:
    """Outcome of the pipeline on one tree."""

    candidate: CutCandidate
    cut_edges: dict[int, list[int]] = field(default_factory=dict)
    """vertex -> neighbours across the cut"""

    metrics: SimMetrics = field(default_factory=SimMetrics)
    stats: StageStats = field(default_factory=StageStats)

    def to_dict(self) -> dict[str, Any]:
        return {
            "candidate": self.candidate.to_dict(),
            "metrics": self.metrics.to_dict(),
            "fragments": self.stats.fragments,
            "layers": self.stats.layers,
            "max_intpot": self.stats.max_intpot,
        }


def min_1respecting(ctx: TreeContext) -> CutCandidate:
    """Minimum Cov(e) over the tree edges, ties to the lowest edge id.

    Needs the cover values; every vertex learns the result.
    """
    tree = ctx.tree
    for c in tree.tree_edges:
        ctx.record(c, CutCandidate.one(c, ctx.cov[c]))
    best = global_min(
        ctx.network,
        ctx.bfs,  # type: ignore[arg-type]
        lambda v: None if tree.parent(v) is None else (ctx.slots(v)["cov"], v),
        "one-respecting",
    )
    value, c = best  # type: ignore[misc]
    return CutCandidate.one(c, value)


def nh_cross_stage(ctx: TreeContext, bough_links: Mapping[tuple[int, int], Link]) -> int:
    """Non-highway pairs in different fragments joined by a connecting edge.

    Returns:
        number of values computed
    """
    skeleton = ctx.decomposition.skeleton
    jobs: dict[int, tuple[int, int, Link]] = {}
    for key, bough in sorted(ctx.layering.nh_boughs.items()):
        paths = ctx.interest.per_bough.get(key, ())
        for b in nh_owner_fragments(skeleton, paths, bough.fragment):
            link = bough_links.get((key, b))
            if link is not None:
                jobs[len(jobs)] = (key, b, link)
    rows = compare_nh_cross_fragment(ctx, jobs)
    return sum(len(r) for r in rows.values())


def nh_partition_jobs(
    ctx: TreeContext, bough_links: Mapping[tuple[int, int], Link]
) -> dict[int, PartitionJob]:
    """Every non-highway bough with the linked highways its interest set reaches.

    A partner is read bottom-up when its highway lies above the bough.
    """
    skeleton = ctx.decomposition.skeleton
    jobs: dict[int, PartitionJob] = {}
    for key, bough in sorted(ctx.layering.nh_boughs.items()):
        a = bough.fragment
        partners: list[tuple[int, bool]] = []
        seen: set[int] = set()
        paths = ctx.interest.per_bough.get(key, ())
        for seg in interest_segments(skeleton, a, paths, False):
            for b in seg.fragments:
                if b != a and b not in seen and (key, b) in bough_links:
                    seen.add(b)
                    partners.append((b, seg.relation is Relation.ABOVE))
        if partners:
            jobs[len(jobs)] = PartitionJob(key, bough.edges, tuple(partners))
    return jobs


def nh_highway_stage(ctx: TreeContext, bough_links: Mapping[tuple[int, int], Link]) -> int:
    """Non-highway bough edges against the highways of other fragments.

    Fragments without a connecting edge are settled in closed form; the
    linked partners a bough is interested in split its edges first.

    Returns:
        number of linked comparisons
    """
    decomp = ctx.decomposition
    no_edge = {
        (key, b)
        for key, bough in ctx.layering.nh_boughs.items()
        for b in decomp.fragments
        if b != bough.fragment and (key, b) not in bough_links
    }
    partition_jobs = nh_partition_jobs(ctx, bough_links)
    nh_highway_no_edge(ctx, no_edge)
    parts = partition_nonhighway(ctx, partition_jobs)
    jobs: dict[int, NhHighwayJob] = {}
    for j, pjob in partition_jobs.items():
        for b, _ in pjob.partners:
            if b in parts[j].parts:
                jobs[len(jobs)] = NhHighwayJob(
                    pjob.owner, b, parts[j].subset(b), bough_links[(pjob.owner, b)]
                )
    compare_nh_highway(ctx, jobs)
    return len(jobs)


def mark_cut_edges(ctx: TreeContext, cand: CutCandidate) -> dict[int, list[int]]:
    """Every vertex learns which of its incident edges cross the cut.

    The cut edges' intervals are made global, then each vertex compares the
    parity of cut edges above itself and above each neighbour.

    Returns:
        vertex -> crossing neighbours, also stored as the `cut_edges` slot
    """
    net = ctx.network
    wanted = set(cand.edges)
    refs = globalize(
        net,
        ctx.bfs,  # type: ignore[arg-type]
        lambda v: [(v, ctx.label(v).pre, ctx.label(v).size)] if v in wanted else [],
        "cut-edges",
    )

    def side(pre: int) -> int:
        return sum(1 for _, p, s in refs if p <= pre < p + s) % 2

    out: dict[int, list[int]] = {}
    for v in range(ctx.n):
        mine = side(ctx.label(v).pre)
        crossing = sorted(
            y for y in ctx.graph.neighbours(v) if side(ctx.nbr_label(v, y).pre) != mine
        )
        ctx.slots(v)["cut_edges"] = crossing
        out[v] = crossing
    return out


def min_2respecting(
    graph: WeightedGraph, tree: RootedSpanningTree, config: PipelineConfig | None = None
) -> TreeRunResult:
    """Minimum over every cut that 1- or 2-respects `tree`.

    Args:
        graph: connected input graph
        tree: spanning tree of `graph`
        config: run parameters, defaults when omitted

    Returns:
        the winning candidate, the crossing edges per vertex, the metrics of
        the run and its stage counters
    """
    ctx = TreeContext(graph, tree, config or PipelineConfig())
    ctx.prepare()
    decomp = fragment_decompose(ctx) if len(tree.tree_edges) >= 2 else None
    ctx.compute_cov()
    one = min_1respecting(ctx)
    LOGGER.debug("1-respecting minimum %s", one)

    if decomp is not None:
        net = ctx.network
        broadcast_highway_extremes(net, ctx.bfs)  # type: ignore[arg-type]
        broadcast_min_cov_edges(net, ctx.bfs, decomp.highway_scope)  # type: ignore[arg-type]
        build_layering(ctx, decomp)
        build_interest(ctx)
        pairing = pair_superhighways(ctx)
        ctx.stats.pairs = len(pairing)

        edges = fragment_edge_lists(ctx)
        compare_nh_local(ctx, edges)
        compare_same_fragment_highway(ctx, edges)

        fragment_edge_sums(ctx)
        links = find_fragment_links(ctx)
        bough_links = find_connecting_edges(ctx)

        nh_cross_stage(ctx, bough_links)
        nh_highway_stage(ctx, bough_links)
        dnc_same_superhighway(ctx, links)
        dnc_two_superhighways(ctx, pairing, links)

    best = ctx.best_recorded()
    assert best is not None
    cut_edges = mark_cut_edges(ctx, best)
    LOGGER.info(
        "tree run: %s in %d rounds (%d charged)",
        best,
        ctx.network.metrics.rounds_pure,
        ctx.network.metrics.rounds_charged,
    )
    return TreeRunResult(best, cut_edges, ctx.network.metrics, ctx.stats)
