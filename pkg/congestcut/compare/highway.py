"""Comparisons of two highway edges."""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from congestcut.compare.nonhighway import Row
from congestcut.compare.pieces import (
    Link,
    Target,
    cross_values,
    decoupled_minima,
    fragment_edge_lists,
    pack,
    pair_extras,
    ship_targets,
    target_of,
    unpack,
)
from congestcut.context import TreeContext
from congestcut.exceptions import PreconditionUnmet
from congestcut.graph.cover import CutCandidate
from congestcut.routines.gather import Item

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class HighwayJob:
    """Highway edges of two fragments joined by an edge between their interiors."""

    row_fragment: int
    rows: tuple[int, ...]
    col_fragment: int
    cols: tuple[int, ...]
    link: Link | None = None


def above(ctx: TreeContext, c: int, t: Target) -> bool:
    """True if the target edge lies strictly above the edge with child c."""
    pre = ctx.label(c).pre
    return t.pre < pre < t.pre + t.size


def compare_same_fragment_highway(
    ctx: TreeContext, edges: Mapping[int, tuple[Target, ...]] | None = None
) -> dict[tuple[int, int], int]:
    """Cut(e, f) for every two highway edges of one fragment.

    The lower edge of each pair evaluates it; X(A, A) is the only global word.

    Returns:
        (lower, upper) -> Cut
    """
    decomp = ctx.decomposition
    if edges is None:
        edges = fragment_edge_lists(ctx)
    jobs = [fid for fid in sorted(decomp.fragments) if len(decomp.fragments[fid].highway) > 1]
    if not jobs:
        return {}
    extras = pair_extras(ctx, [(fid, fid) for fid in jobs])
    rows = cross_values(
        ctx,
        decomp.fragment_scope,
        {fid: fid for fid in jobs},
        {fid: fid for fid in jobs},
        {fid: [t for t in edges[fid] if t.highway] for fid in jobs},
        {fid: decomp.fragments[fid].highway for fid in jobs},
        extras={fid: extras[(fid, fid)] for fid in jobs},
        keep=lambda c, t: above(ctx, c, t),
        phase="same-fragment-highway",
    )
    return {(e, f): cut for lst in rows.values() for cut, e, f in lst}


def compare_highways(ctx: TreeContext, jobs: Mapping[int, HighwayJob]) -> dict[int, list[Row]]:
    """Every Cut(e, f) of a job's rows against its columns.

    The shorter side travels over the link and the other side's edges
    evaluate, each with the Y value of the travelling edge towards it.

    Raises:
        PreconditionUnmet: a job has no link.

    Returns:
        job -> [(cut, row edge, column edge, holder)]
    """
    if not jobs:
        return {}
    for j, job in jobs.items():
        if job.link is None:
            raise PreconditionUnmet(
                f"job {j}: fragments {job.row_fragment} and {job.col_fragment} share no edge"
            )
    decomp = ctx.decomposition
    extras = pair_extras(ctx, [(job.row_fragment, job.col_fragment) for job in jobs.values()])
    # (shipped fragment, shipped edges, computing fragment, evaluating edges, rows shipped)
    plan = {
        j: (
            (job.row_fragment, job.rows, job.col_fragment, job.cols, True)
            if len(job.rows) <= len(job.cols)
            else (job.col_fragment, job.cols, job.row_fragment, job.rows, False)
        )
        for j, job in jobs.items()
    }
    src = decomp.fragment_scope.replicated({j: p[0] for j, p in plan.items()})
    dst = decomp.fragment_scope.replicated({j: p[2] for j, p in plan.items()})
    shipped_sets = {j: set(p[1]) for j, p in plan.items()}

    def items(v: int, j: int) -> list[Item]:
        if v not in shipped_sets[j]:
            return []
        return [pack(target_of(ctx, v, towards=plan[j][2]))]

    shipped = ship_targets(
        ctx,
        src,
        dst,
        {j: job.link for j, job in jobs.items()},  # type: ignore[misc]
        items,
        "highway-targets",
    )
    got = cross_values(
        ctx,
        decomp.fragment_scope,
        {j: p[2] for j, p in plan.items()},
        {j: p[2] for j, p in plan.items()},
        {j: [unpack(t) for t in shipped.get(j, [])] for j in jobs},
        {j: p[3] for j, p in plan.items()},
        extras={j: extras[(job.row_fragment, job.col_fragment)] for j, job in jobs.items()},
        phase="highway-values",
    )
    out: dict[int, list[Row]] = {}
    for j, lst in got.items():
        rows_shipped = plan[j][4]
        out[j] = [(cut, t, c, c) if rows_shipped else (cut, c, t, c) for cut, c, t in lst]
    return out


def highway_no_edge(
    ctx: TreeContext, pairs: Iterable[tuple[int, int]]
) -> dict[tuple[int, int], tuple[int, int, int]]:
    """Best Cut(e, f) over two highways whose interiors share no edge.

    Cov(e, f) = Y_B(e) + Y_A(f) + X(A, B), so both sides minimise
    independently.

    Returns:
        (A, B) -> (cut, e in A, f in B), learned by every vertex
    """
    wanted = sorted(set(pairs))
    if not wanted:
        return {}
    minima = decoupled_minima(ctx, wanted + [(b, a) for a, b in wanted])
    extras = pair_extras(ctx, wanted)
    out: dict[tuple[int, int], tuple[int, int, int]] = {}
    for a, b in wanted:
        (va, e), (vb, f) = minima[(a, b)], minima[(b, a)]
        cut = va + vb - 2 * extras[(a, b)]
        ctx.record(e, CutCandidate.two(e, f, cut))
        out[(a, b)] = (cut, e, f)
    return out
