"""Monotone argmins and the partition of a short path against a super-highway.

Order the edges of a short path P' and of a super-highway both towards the
point where their root paths meet (or away from it, for the upper side of
nested paths). Along P' the column of the best partner then never moves
back, and neither does the best row along the columns. With the smallest
index winning ties, the best rows for the two extreme edges of each
highway P_i bound an interval of P' that holds the best row of every edge
of P_i, and consecutive intervals share at most their end rows.
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from congestcut.compare.pieces import (
    Target,
    cross_values,
    extremal_edge_sums,
    highway_end,
    pair_extras,
)
from congestcut.context import TreeContext
from congestcut.decomp.layering import bough_subtree_scope
from congestcut.graph.cover import CoverTable
from congestcut.routines.batch import AggregateSpec, Value, pipelined_batch
from congestcut.routines.scope import TreeScope

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

Partner = tuple[int, bool]
"""(fragment, True if its highway is read bottom-up)"""


def highway_order(ctx: TreeContext, fid: int, upward: bool) -> tuple[int, ...]:
    """Highway edges of a fragment, top-down or bottom-up."""
    hw = ctx.decomposition.fragments[fid].highway
    return tuple(reversed(hw)) if upward else tuple(hw)


def argmin_columns(table: CoverTable, rows: Sequence[int], cols: Sequence[int]) -> list[int]:
    """Index of the best column of each row, the smallest index on ties."""
    return [min(range(len(cols)), key=lambda j: (table.cut(e, cols[j]), j)) for e in rows]


def check_monotonicity(table: CoverTable, rows: Sequence[int], cols: Sequence[int]) -> bool:
    """True if the best column never moves back along the rows.

    Args:
        table: exact cover values
        rows: edges of the first path, closest to the meeting point first
        cols: edges of the second path, in the same sense
    """
    if not rows or not cols:
        return True
    best = argmin_columns(table, rows, cols)
    return all(a <= b for a, b in zip(best, best[1:]))


@dataclass
class PartitionResult:
    """Row interval of every partner highway."""

    rows: tuple[int, ...]
    parts: dict[int, tuple[int, int]] = field(default_factory=dict)
    """partner fragment -> (first, last) row index"""

    def subset(self, fid: int) -> tuple[int, ...]:
        lo, hi = self.parts[fid]
        return self.rows[lo : hi + 1]

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.parts.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": list(self.rows),
            "parts": {str(f): list(self.subset(f)) for f in sorted(self.parts)},
        }


@dataclass(frozen=True)
class PartitionJob:
    """Rows of one short path and the partner highways to split them for."""

    owner: int
    """bough key for a non-highway path, fragment id for a highway"""

    rows: tuple[int, ...]
    partners: tuple[Partner, ...]


def _best_rows(
    ctx: TreeContext,
    scope: TreeScope,
    bases: Mapping[int, int],
    values: Mapping[int, Sequence[tuple[int, int, int]]],
    positions: Mapping[int, Mapping[int, int]],
    phase: str,
) -> dict[int, int]:
    """Index of the best row of every request, smallest index on ties.

    One minimum over (cut, index) per request, then a broadcast so that all
    vertices of the path learn it.
    """
    held: dict[tuple[int, int], Value] = {}
    for rk, lst in values.items():
        for cut, e, _ in lst:
            held[(e, rk)] = (cut, positions[rk][e])
    keyed = scope.replicated(bases)
    mins = pipelined_batch(
        ctx.network, keyed, [AggregateSpec.minimum(lambda v, k: held.get((v, k)))], phase
    )
    pipelined_batch(
        ctx.network,
        keyed,
        [AggregateSpec.broadcast(lambda v, k: mins.get(0, v, k))],
        f"{phase}-broadcast",
    )
    out: dict[int, int] = {}
    for rk in bases:
        best = mins.get(0, keyed.roots(rk)[0], rk)
        if best is not None:
            out[rk] = best[1]  # type: ignore[index]
    return out


def _partition(
    ctx: TreeContext,
    scope: TreeScope,
    jobs: Mapping[int, PartitionJob],
    base_of: Mapping[int, int],
    fragment_of: Mapping[int, int],
    target: Callable[[int, int, bool], Target],
    extra_of: Callable[[int, int], int],
    phase: str,
) -> dict[int, PartitionResult]:
    requests: list[tuple[int, int, bool]] = [
        (j, fid, last)
        for j in sorted(jobs)
        for fid, _ in jobs[j].partners
        for last in (False, True)
    ]
    bases = {rk: base_of[j] for rk, (j, _, _) in enumerate(requests)}
    targets = {rk: [target(j, fid, last)] for rk, (j, fid, last) in enumerate(requests)}
    values = cross_values(
        ctx,
        scope,
        bases,
        {rk: fragment_of[j] for rk, (j, _, _) in enumerate(requests)},
        targets,
        {rk: jobs[j].rows for rk, (j, _, _) in enumerate(requests)},
        extras={rk: extra_of(j, fid) for rk, (j, fid, _) in enumerate(requests)},
        phase=phase,
    )
    index = {j: {e: i for i, e in enumerate(job.rows)} for j, job in jobs.items()}
    best = _best_rows(
        ctx,
        scope,
        bases,
        values,
        {rk: index[j] for rk, (j, _, _) in enumerate(requests)},
        f"{phase}-anchors",
    )
    out = {j: PartitionResult(job.rows) for j, job in jobs.items()}
    for rk, (j, fid, last) in enumerate(requests):
        if last and rk - 1 in best and rk in best:
            a, b = best[rk - 1], best[rk]
            out[j].parts[fid] = (min(a, b), max(a, b))
    for j, res in out.items():
        if res.size > len(res.rows) + 2 * len(res.parts):
            LOGGER.warning(
                "partition of %d holds %d rows for %d partners", j, res.size, len(res.parts)
            )
    return out


def _end(partner_upward: bool, last: bool) -> bool:
    """True if the bottom edge is the wanted end of a partner highway."""
    return partner_upward != last


def partition_nonhighway(
    ctx: TreeContext, jobs: Mapping[int, PartitionJob]
) -> dict[int, PartitionResult]:
    """Split the edges of non-highway boughs among partner highways.

    The best rows for the two extreme edges of each partner come from one
    batch of sums in T(P') and one minimum; every vertex there learns them.

    Args:
        jobs: job -> rows of a bough, top-down, with its partners

    Returns:
        job -> row intervals per partner
    """
    if not jobs:
        return {}
    layering = ctx.layering
    upward = {j: dict(job.partners) for j, job in jobs.items()}
    return _partition(
        ctx,
        bough_subtree_scope(ctx.tree, layering.nh_boughs),
        jobs,
        {j: job.owner for j, job in jobs.items()},
        {j: layering.nh_boughs[job.owner].fragment for j, job in jobs.items()},
        lambda j, fid, last: highway_end(ctx, fid, _end(upward[j][fid], last)),
        lambda j, fid: 0,
        "partition-nonhighway",
    )


def partition_highway(
    ctx: TreeContext, jobs: Mapping[int, PartitionJob]
) -> dict[int, PartitionResult]:
    """Split the highway edges of fragments among their linked active partners.

    The extreme partner edges carry their Y value towards the row fragment,
    learned globally, and X(A, B) completes each cover value.

    Args:
        jobs: job -> highway rows of fragment `owner` in sweep order, with
            partners

    Returns:
        job -> row intervals per partner
    """
    if not jobs:
        return {}
    ends: dict[tuple[int, int, bool], Target] = {}
    for j, job in jobs.items():
        for fid, up in job.partners:
            for last in (False, True):
                ends[(j, fid, last)] = highway_end(ctx, fid, _end(up, last))
    ys = extremal_edge_sums(ctx, {(t.child, jobs[j].owner) for (j, _, _), t in ends.items()})
    extras = pair_extras(
        ctx, {(job.owner, fid) for job in jobs.values() for fid, _ in job.partners}
    )
    return _partition(
        ctx,
        ctx.decomposition.fragment_scope,
        jobs,
        {j: job.owner for j, job in jobs.items()},
        {j: job.owner for j, job in jobs.items()},
        lambda j, fid, last: ends[(j, fid, last)]._replace(
            extra=ys[(ends[(j, fid, last)].child, jobs[j].owner)]
        ),
        lambda j, fid: extras[(jobs[j].owner, fid)],
        "partition-highway",
    )
