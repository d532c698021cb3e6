"""Divide and conquer over super-highways.

A sweep compares the highway of one fragment with a run of fragment
highways (the columns) and returns the best pair together with the column
block holding it. With both sides ordered as in `monotone`, the rows before
the swept fragment only need the columns up to that block and the rows
after it only the columns from that block on, so every level of the
recursion runs one sweep per open subproblem, all of them in the same
batches.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from congestcut.compare.highway import HighwayJob, compare_highways, highway_no_edge
from congestcut.compare.pieces import Link
from congestcut.context import TreeContext
from congestcut.exceptions import RecursionDepthExceeded
from congestcut.graph.cover import CutCandidate, best_candidate
from congestcut.interest.pairing import Layout, PairingSet
from congestcut.mathutils import ceil_log2
from congestcut.partition.monotone import PartitionJob, highway_order, partition_highway
from congestcut.routines.batch import Value
from congestcut.routines.highways import global_minima

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

SweepResult = tuple[int, int, int, int]
"""(cut, column block, row edge, column edge)"""


@dataclass(frozen=True)
class Sweep:
    """One fragment highway against a run of column fragments."""

    row: int
    row_upward: bool
    """True if the row edges are read bottom-up"""

    cols: tuple[int, ...]
    cols_upward: bool


@dataclass(frozen=True)
class SubProblem:
    """Row fragments against column fragments, both in sweep order."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    rows_upward: bool
    cols_upward: bool


def compare_fraghw_to_superhighway(
    ctx: TreeContext, sweeps: Sequence[Sweep], links: Mapping[tuple[int, int], Link]
) -> list[SweepResult | None]:
    """Best pair of every sweep, learned by every vertex.

    Columns without an edge to the row fragment are settled by the
    decoupled minima first. The others split the row edges among
    themselves and compare the parts over their links; the best value of
    each sweep is then one global minimum.

    Args:
        ctx: the tree context
        sweeps: the sweeps of one level
        links: (A, B) -> first edge between the interiors of A and B

    Returns:
        per sweep the best (cut, block, e, f), smallest block on ties; None
        for a sweep without columns
    """
    unlinked: dict[int, list[tuple[int, int]]] = {}
    linked: dict[int, list[int]] = {}
    for r, sweep in enumerate(sweeps):
        for j, b in enumerate(sweep.cols):
            if (sweep.row, b) in links:
                linked.setdefault(r, []).append(j)
            else:
                unlinked.setdefault(r, []).append((j, b))

    no_edge = highway_no_edge(
        ctx, {(sweeps[r].row, b) for r, lst in unlinked.items() for _, b in lst}
    )
    best: list[SweepResult | None] = [None] * len(sweeps)
    for r, lst in unlinked.items():
        for j, b in lst:
            cut, e, f = no_edge[(sweeps[r].row, b)]
            cand = (cut, j, e, f)
            if best[r] is None or cand < best[r]:  # type: ignore[operator]
                best[r] = cand

    parts = partition_highway(
        ctx,
        {
            r: PartitionJob(
                sweeps[r].row,
                highway_order(ctx, sweeps[r].row, sweeps[r].row_upward),
                tuple((sweeps[r].cols[j], sweeps[r].cols_upward) for j in js),
            )
            for r, js in linked.items()
        },
    )
    requests: list[tuple[int, int]] = []
    jobs: dict[int, HighwayJob] = {}
    for r, js in sorted(linked.items()):
        sweep = sweeps[r]
        for j in js:
            b = sweep.cols[j]
            if b not in parts[r].parts:
                continue
            jobs[len(requests)] = HighwayJob(
                sweep.row,
                parts[r].subset(b),
                b,
                highway_order(ctx, b, sweep.cols_upward),
                links[(sweep.row, b)],
            )
            requests.append((r, j))
    held: dict[int, dict[int, Value]] = {}
    for k, rows in compare_highways(ctx, jobs).items():
        r, j = requests[k]
        for cut, e, f, at in rows:
            mine = held.setdefault(at, {})
            cand = (cut, j, e, f)
            if mine.get(r) is None or cand < mine[r]:  # type: ignore[operator]
                mine[r] = cand
    if requests:
        found = global_minima(
            ctx.network,
            ctx.bfs,  # type: ignore[arg-type]
            lambda v: held.get(v, {}),
            len(sweeps),
            "sweep-minima",
        )
        for r, val in enumerate(found):
            if val is not None and (best[r] is None or val < best[r]):  # type: ignore[operator]
                best[r] = val  # type: ignore[assignment]
    return best


def solve_subproblems(
    ctx: TreeContext,
    problems: Sequence[SubProblem],
    links: Mapping[tuple[int, int], Link],
    phase: str = "dnc",
) -> list[CutCandidate | None]:
    """Best pair of every subproblem, all of them recursing level by level.

    Raises:
        RecursionDepthExceeded: a subproblem is still open after
            ceil(log2 rows) + 2 levels.
    """
    best: list[CutCandidate | None] = [None] * len(problems)
    limits = [ceil_log2(max(1, len(p.rows))) + 2 for p in problems]
    open_: list[tuple[int, SubProblem, int]] = [
        (i, p, 1) for i, p in enumerate(problems) if p.rows and p.cols
    ]
    level = 0
    while open_:
        level += 1
        sweeps = []
        for i, p, depth in open_:
            if depth > limits[i]:
                raise RecursionDepthExceeded(
                    f"{phase}: subproblem {i} open at depth {depth}, limit {limits[i]}"
                )
            mid = (len(p.rows) + 1) // 2 - 1
            sweeps.append(Sweep(p.rows[mid], p.rows_upward, p.cols, p.cols_upward))
        LOGGER.debug("%s level %d: %d sweeps", phase, level, len(sweeps))
        results = compare_fraghw_to_superhighway(ctx, sweeps, links)
        following: list[tuple[int, SubProblem, int]] = []
        for (i, p, depth), res in zip(open_, results):
            if res is None:
                continue
            cut, j, e, f = res
            best[i] = best_candidate(best[i], CutCandidate.two(e, f, cut))
            mid = (len(p.rows) + 1) // 2 - 1
            for sub in (
                SubProblem(p.rows[:mid], p.cols[: j + 1], p.rows_upward, p.cols_upward),
                SubProblem(p.rows[mid + 1 :], p.cols[j:], p.rows_upward, p.cols_upward),
            ):
                if sub.rows:
                    following.append((i, sub, depth + 1))
        open_ = following
    ctx.stats.extra[f"{phase}_levels"] = max(level, ctx.stats.extra.get(f"{phase}_levels", 0))
    return best


def pair_subproblem(pair_layout: Layout, first: Sequence[int], second: Sequence[int]) -> SubProblem:
    """Rows and columns of a super-highway pair, both closest to the other side first."""
    first_up = pair_layout is Layout.FIRST_ABOVE
    second_up = pair_layout is Layout.SECOND_ABOVE
    return SubProblem(
        tuple(reversed(first)) if first_up else tuple(first),
        tuple(reversed(second)) if second_up else tuple(second),
        first_up,
        second_up,
    )


def dnc_two_superhighways(
    ctx: TreeContext, pairing: PairingSet, links: Mapping[tuple[int, int], Link]
) -> CutCandidate | None:
    """Best pair over the active fragments of every super-highway pair."""
    problems = [
        pair_subproblem(p.layout, p.active_first, p.active_second) for p in pairing.pairs
    ]
    best = best_candidate(*solve_subproblems(ctx, problems, links, "dnc-pairs"))
    LOGGER.debug("%d super-highway pairs, best %s", len(problems), best)
    return best


def bit_halves(frags: Sequence[int], bit: int) -> Iterable[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Upper and lower halves of the groups that agree above `bit`.

    Positions whose `bit` is 0 go up, 1 down; a group with an empty side
    yields nothing.
    """
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for i, f in enumerate(frags):
        upper, lower = groups.setdefault(i >> (bit + 1), ([], []))
        (lower if (i >> bit) & 1 else upper).append(f)
    for _, (upper, lower) in sorted(groups.items()):
        if upper and lower:
            yield tuple(upper), tuple(lower)


def dnc_same_superhighway(
    ctx: TreeContext, links: Mapping[tuple[int, int], Link]
) -> CutCandidate | None:
    """Best pair of highway edges in different fragments of one super-highway.

    From the most significant bit of the fragment positions down, every
    super-highway compares the fragments whose positions differ first at
    that bit; all super-highways and groups of a bit run together.
    """
    boughs = [b.edges for _, b in sorted(ctx.layering.skeleton_boughs.items()) if len(b) > 1]
    if not boughs:
        return None
    best: CutCandidate | None = None
    for bit in range((max(len(b) for b in boughs) - 1).bit_length() - 1, -1, -1):
        problems = [
            SubProblem(tuple(reversed(upper)), lower, True, False)
            for frags in boughs
            for upper, lower in bit_halves(frags, bit)
        ]
        best = best_candidate(best, *solve_subproblems(ctx, problems, links, "dnc-same"))
    return best
