"""Comparisons whose first edge is a non-highway edge.

A non-highway bough P' of fragment A evaluates its edges against

* the edges of A itself (one batch over the fragment trees),
* the non-highway edges of another fragment B reached over a connecting
  edge between T(P') and B,
* the highway of another fragment B, computed either in T(P') or in B,
  whichever side holds fewer of the compared edges; without a connecting
  edge the value collapses to Cov(e') - 2 Y_B(e') + min Cov over B.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from congestcut.compare.pieces import (
    Link,
    Target,
    cross_values,
    fragment_edge_lists,
    highway_extra_of,
    highway_length,
    local_sums,
    pack,
    ship_targets,
    strictly_below,
    target_of,
    unpack,
)
from congestcut.context import TreeContext
from congestcut.decomp.layering import bough_subtree_scope
from congestcut.exceptions import PreconditionUnmet
from congestcut.graph.cover import CutCandidate
from congestcut.routines.batch import AggregateSpec, Value, pipelined_batch
from congestcut.routines.gather import Item
from congestcut.routines.highways import globalize

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

Row = tuple[int, int, int, int]
"""(cut, e, f, vertex that holds the value)"""


@dataclass(frozen=True)
class NhHighwayJob:
    """Rows of a non-highway bough against the highway of one fragment."""

    bough: int
    fragment: int
    """fragment B whose highway is compared"""

    rows: tuple[int, ...]
    """children of the compared bough edges, top to bottom"""

    link: Link | None = None
    """an edge between T(P') and the interior of B"""


def compare_nh_local(
    ctx: TreeContext, edges: Mapping[int, tuple[Target, ...]] | None = None
) -> dict[tuple[int, int], int]:
    """Cut(e', e) for every non-highway e' and every e of its fragment not below it.

    Args:
        ctx: the tree context, fragments decomposed
        edges: fragment edge lists, gathered if not given

    Returns:
        (e', e) -> Cut, each value held at the child of e'
    """
    decomp = ctx.decomposition
    if edges is None:
        edges = fragment_edge_lists(ctx)
    jobs = [fid for fid in sorted(decomp.fragments) if decomp.fragments[fid].nonhighway]
    if not jobs:
        return {}
    rows = cross_values(
        ctx,
        decomp.fragment_scope,
        {fid: fid for fid in jobs},
        {fid: fid for fid in jobs},
        {fid: edges[fid] for fid in jobs},
        {fid: decomp.fragments[fid].nonhighway for fid in jobs},
        keep=lambda c, t: not strictly_below(ctx, c, t),
        phase="nh-local",
    )
    out = {(e, f): cut for lst in rows.values() for cut, e, f in lst}
    LOGGER.debug("%d local non-highway values", len(out))
    return out


def compare_nh_cross_fragment(
    ctx: TreeContext, jobs: Mapping[int, tuple[int, int, Link]]
) -> dict[int, list[Row]]:
    """Cut(e', e) for e' in a bough and the non-highway edges e of another fragment.

    The references of B's non-highway edges travel over the connecting edge
    and are spread over T(P'); one batch of sums there gives every value.

    Args:
        ctx: the tree context
        jobs: job -> (bough key, fragment B, connecting edge)

    Returns:
        job -> [(cut, e', e, e')]
    """
    if not jobs:
        return {}
    decomp = ctx.decomposition
    layering = ctx.layering
    net = ctx.network
    boughs = bough_subtree_scope(ctx.tree, layering.nh_boughs)
    src = decomp.fragment_scope.replicated({j: b for j, (_, b, _) in jobs.items()})
    dst = boughs.replicated({j: p for j, (p, _, _) in jobs.items()})

    def items(v: int, job: int) -> list[Item]:
        if src.parent(job, v) is None or net.slots(v)["highway"]:
            return []
        return [pack(target_of(ctx, v))]

    shipped = ship_targets(
        ctx, src, dst, {j: link for j, (_, _, link) in jobs.items()}, items, "nh-cross"
    )
    targets = {j: [unpack(t) for t in shipped.get(j, [])] for j in jobs}
    rows = cross_values(
        ctx,
        boughs,
        {j: p for j, (p, _, _) in jobs.items()},
        {j: layering.nh_boughs[p].fragment for j, (p, _, _) in jobs.items()},
        targets,
        {j: layering.nh_boughs[p].edges for j, (p, _, _) in jobs.items()},
        phase="nh-cross-values",
    )
    return {j: [(cut, e, f, e) for cut, e, f in lst] for j, lst in rows.items()}


def cov_pieces_nh_highway(
    ctx: TreeContext, jobs: Mapping[int, NhHighwayJob]
) -> tuple[dict[int, dict[tuple[int, int], tuple[int, int]]], dict[int, int]]:
    """Cov_F(e', f) and Cov^extr(e', B) for the rows of each job and f on B's highway.

    Cov_F counts the edges from T(e') into U(B) covering both edges,
    Cov^extr = Y_B(e') the edges covering e' and all of B's highway with
    their other endpoint outside U(B). Their sum is Cov(e', f). Without a
    connecting edge Cov_F is zero and nothing is sent.

    Returns:
        job -> {(e', f): (Cov_F, Cov^extr)}, held at e', and f -> Cov(f) for
        every shipped highway edge f
    """
    decomp = ctx.decomposition
    layering = ctx.layering
    out: dict[int, dict[tuple[int, int], tuple[int, int]]] = {}
    linked = {j: job for j, job in jobs.items() if job.link is not None}
    covs: dict[int, int] = {}
    for j, job in jobs.items():
        if job.link is None:
            out[j] = {
                (e, f): (0, highway_extra_of(ctx, e, job.fragment))
                for e in job.rows
                for f in decomp.fragments[job.fragment].highway
            }
    if not linked:
        return out, covs

    boughs = bough_subtree_scope(ctx.tree, layering.nh_boughs)
    src = decomp.fragment_scope.replicated({j: job.fragment for j, job in linked.items()})
    dst = boughs.replicated({j: job.bough for j, job in linked.items()})

    def items(v: int, j: int) -> list[Item]:
        if src.parent(j, v) is None or not ctx.slots(v)["highway"]:
            return []
        return [pack(target_of(ctx, v))]

    shipped = ship_targets(
        ctx,
        src,
        dst,
        {j: job.link for j, job in linked.items()},  # type: ignore[misc]
        items,
        "nh-highway-pieces",
    )
    targets = {j: [unpack(t) for t in shipped.get(j, [])] for j in linked}
    requests = [(j, i) for j in sorted(linked) for i in range(len(targets[j]))]
    if not requests:
        return out, covs
    sums = local_sums(
        ctx,
        boughs,
        {rk: linked[j].bough for rk, (j, _) in enumerate(requests)},
        {rk: layering.nh_boughs[linked[j].bough].fragment for rk, (j, _) in enumerate(requests)},
        lambda u, y, rk: ctx.covers_at(u, y, targets[requests[rk][0]][requests[rk][1]]),
        "nh-highway-pieces-sums",
        highway=False,
    )
    for rk, (j, i) in enumerate(requests):
        job, t = linked[j], targets[j][i]
        covs[t.child] = t.cov
        table = out.setdefault(j, {})
        for e in job.rows:
            extr = highway_extra_of(ctx, e, job.fragment)
            table[(e, t.child)] = (sums.value(e, rk, False) - extr, extr)
    return out, covs


def compare_nh_highway(ctx: TreeContext, jobs: Mapping[int, NhHighwayJob]) -> dict[int, list[Row]]:
    """Every Cut(e', f) of a job's rows against the highway of its fragment.

    A job whose rows outnumber B's highway pulls the highway into T(P');
    otherwise the rows travel to B and its highway edges evaluate.

    Raises:
        PreconditionUnmet: a job has no connecting edge.

    Returns:
        job -> [(cut, e', f, holder)]
    """
    decomp = ctx.decomposition
    layering = ctx.layering
    for j, job in jobs.items():
        if job.link is None:
            raise PreconditionUnmet(f"job {j}: bough {job.bough} has no edge to {job.fragment}")
    here = {
        j: job
        for j, job in jobs.items()
        if len(job.rows) > highway_length(decomp.skeleton, job.fragment)
    }
    there = {j: job for j, job in jobs.items() if j not in here}
    out: dict[int, list[Row]] = {}

    tables, covs = cov_pieces_nh_highway(ctx, here)
    for j, table in tables.items():
        rows = out.setdefault(j, [])
        for (e, f), (cov_f, extr) in table.items():
            cut = ctx.slots(e)["cov"] + covs[f] - 2 * (cov_f + extr)
            ctx.record(e, CutCandidate.two(e, f, cut))
            rows.append((cut, e, f, e))

    if there:
        boughs = bough_subtree_scope(ctx.tree, layering.nh_boughs)
        src = boughs.replicated({j: job.bough for j, job in there.items()})
        dst = decomp.fragment_scope.replicated({j: job.fragment for j, job in there.items()})
        wanted = {j: set(job.rows) for j, job in there.items()}

        def items(v: int, j: int) -> list[Item]:
            if v not in wanted[j]:
                return []
            return [pack(target_of(ctx, v, towards=there[j].fragment))]

        shipped = ship_targets(
            ctx,
            src,
            dst,
            {j: job.link for j, job in there.items()},  # type: ignore[misc]
            items,
            "nh-highway-rows",
        )
        got = cross_values(
            ctx,
            decomp.fragment_scope,
            {j: job.fragment for j, job in there.items()},
            {j: job.fragment for j, job in there.items()},
            {j: [unpack(t) for t in shipped.get(j, [])] for j in there},
            {j: decomp.fragments[job.fragment].highway for j, job in there.items()},
            phase="nh-highway-values",
        )
        for j, lst in got.items():
            out.setdefault(j, []).extend((cut, e, f, f) for cut, f, e in lst)
    return out


def nh_highway_no_edge(
    ctx: TreeContext, pairs: Iterable[tuple[int, int]]
) -> dict[tuple[int, int], tuple[int, int, int]]:
    """Best Cut(e', f) of a bough against a fragment highway it has no edge to.

    Cov(e', f) = Y_B(e') for every f of B, so the minimum pairs the best
    Cov(e') - 2 Y_B(e') with the minimum-cover highway edge of B.

    Args:
        pairs: (bough key, fragment B) without a connecting edge

    Returns:
        (bough, B) -> (cut, e', f), learned by every vertex
    """
    wanted = sorted(set(pairs))
    if not wanted:
        return {}
    net = ctx.network
    layering = ctx.layering
    boughs = bough_subtree_scope(ctx.tree, layering.nh_boughs)
    keyed = boughs.replicated({k: p for k, (p, _) in enumerate(wanted)})

    def value(v: int, k: int) -> Value:
        p, b = wanted[k]
        if net.slots(v).get("bough") != p:
            return None
        return (net.slots(v)["cov"] - 2 * highway_extra_of(ctx, v, b), v)

    mins = pipelined_batch(net, keyed, [AggregateSpec.minimum(value)], "nh-highway-no-edge")

    def items(v: int) -> list[Item]:
        out: list[Item] = []
        for k in keyed.memberships(v):
            best = mins.get(0, v, k)
            if v == wanted[k][0] and best is not None:
                out.append((k, best[0], best[1]))  # type: ignore[index]
        return out

    min_cov = ctx.slots(ctx.root)["min_cov_edges"]
    found: dict[tuple[int, int], tuple[int, int, int]] = {}
    got = globalize(net, ctx.bfs, items, "nh-highway-no-edge-globalize")  # type: ignore[arg-type]
    for k, val, e in got:
        f, cov_f = min_cov[wanted[k][1]]
        found[wanted[k]] = (val + cov_f, e, f)
        ctx.record(e, CutCandidate.two(e, f, val + cov_f))
    return found
