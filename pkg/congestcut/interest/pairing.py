"""Pairs of super-highways worth comparing, known to every vertex.

Each fragment reports the skeleton boughs its highway is interested in as
(fragment, bough, first, last) records, `first..last` being the positions
of the met fragments inside the bough. After one upcast and broadcast over
the BFS tree every vertex derives the same pairing locally: two boughs pair
when each holds a fragment interested in the other. A bough whose interior
holds the branching point of its partner is split there, so that the two
sides of every pair lie either on one root path or on different ones.
"""

import logging
import math
from collections import namedtuple
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from congestcut.context import TreeContext
from congestcut.decomp.layering import Bough
from congestcut.decomp.skeleton import Skeleton
from congestcut.exceptions import PairingInvariantViolation
from congestcut.interest.paths import interest_segments
from congestcut.routines.highways import globalize

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


PairRecord = namedtuple("PairRecord", "fragment bough first last")
PairRecord.__doc__ = """A fragment highway interested in part of a skeleton bough.

Args:
    fragment: the interested fragment.
    bough: key of the bough.
    first, last: positions (top-down) of the met fragments in the bough.
"""


class Layout(StrEnum):
    """How the two sides of a pair lie relative to each other."""

    ORTHOGONAL = "orthogonal"
    FIRST_ABOVE = "first_above"
    SECOND_ABOVE = "second_above"


@dataclass(frozen=True)
class SuperPair:
    """Two super-highway parts and their active fragments."""

    first: tuple[int, ...]
    """fragments, top to bottom"""

    second: tuple[int, ...]
    active_first: tuple[int, ...]
    """fragments of `first` interested in `second`, top to bottom"""

    active_second: tuple[int, ...]
    layout: Layout


@dataclass
class PairingSet:
    """The pairing R with its active annotations."""

    records: list[PairRecord] = field(default_factory=list)
    pairs: list[SuperPair] = field(default_factory=list)

    def appearances(self) -> dict[int, int]:
        """Number of pairs each fragment is active in."""
        count: dict[int, int] = {}
        for p in self.pairs:
            for f in p.active_first + p.active_second:
                count[f] = count.get(f, 0) + 1
        return count

    def __len__(self) -> int:
        return len(self.pairs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pairs": [
                {
                    "first": list(p.first),
                    "second": list(p.second),
                    "active_first": list(p.active_first),
                    "active_second": list(p.active_second),
                    "layout": str(p.layout),
                }
                for p in self.pairs
            ]
        }


def fragment_records(ctx: TreeContext, fid: int) -> list[PairRecord]:
    """Records of one fragment highway from its IntPot set."""
    skeleton = ctx.decomposition.skeleton
    layering = ctx.layering
    own = layering.bough_of_fragment[fid]
    paths = ctx.interest.per_fragment.get(fid, ())
    spans: dict[int, list[int]] = {}
    for seg in interest_segments(skeleton, fid, paths, True):
        for f in seg.fragments:
            key = layering.bough_of_fragment[f]
            if key == own:
                continue
            pos = layering.skeleton_boughs[key].edges.index(f)
            spans.setdefault(key, []).append(pos)
    # one chain meets a bough in a contiguous run
    return [PairRecord(fid, key, min(p), max(p)) for key, p in sorted(spans.items())]


def _vertex_pres(skeleton: Skeleton, frags: Sequence[int]) -> list[tuple[int, int]]:
    """(pre, size) of the skeleton vertices of a bough, top to bottom."""
    top = skeleton.entry(frags[0])
    out = [(top.root_pre, top.root_size)]
    out.extend((skeleton.entry(f).bottom_pre, skeleton.entry(f).bottom_size) for f in frags)
    return out


def split_bough(
    skeleton: Skeleton, frags: tuple[int, ...], other: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Split `frags` at its deepest vertex above the top of `other`, if interior."""
    target = skeleton.entry(other[0]).root_pre
    deepest = None
    for i, (pre, size) in enumerate(_vertex_pres(skeleton, frags)):
        if pre <= target < pre + size:
            deepest = i
    if deepest is None or deepest == 0 or deepest == len(frags):
        return [frags]
    return [frags[:deepest], frags[deepest:]]


def layout_of(skeleton: Skeleton, first: Sequence[int], second: Sequence[int]) -> Layout:
    if skeleton.is_above(first[-1], second[0]):
        return Layout.FIRST_ABOVE
    if skeleton.is_above(second[-1], first[0]):
        return Layout.SECOND_ABOVE
    return Layout.ORTHOGONAL


def derive_pairs(
    skeleton: Skeleton, boughs: dict[int, Bough], records: Iterable[PairRecord]
) -> list[SuperPair]:
    """The pairing every vertex computes from the broadcast records."""
    spans: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for r in records:
        spans.setdefault((r.fragment, r.bough), []).append((r.first, r.last))
    bough_of = {f: key for key, b in boughs.items() for f in b.edges}
    wants: dict[int, set[int]] = {}
    for f, key in spans:
        wants.setdefault(bough_of[f], set()).add(key)

    def active(
        part: tuple[int, ...], other_key: int, other_part: tuple[int, ...]
    ) -> tuple[int, ...]:
        order = boughs[other_key].edges
        lo, hi = order.index(other_part[0]), order.index(other_part[-1])
        return tuple(
            f
            for f in part
            if any(a <= hi and lo <= b for a, b in spans.get((f, other_key), ()))
        )

    out: list[SuperPair] = []
    for h1 in sorted(wants):
        for h2 in sorted(wants[h1]):
            if h2 <= h1 or h1 not in wants.get(h2, set()):
                continue
            b1, b2 = boughs[h1].edges, boughs[h2].edges
            for p1 in split_bough(skeleton, b1, b2):
                for p2 in split_bough(skeleton, b2, b1):
                    a1 = active(p1, h2, p2)
                    a2 = active(p2, h1, p1)
                    if a1 and a2:
                        out.append(SuperPair(p1, p2, a1, a2, layout_of(skeleton, p1, p2)))
    return out


def pair_superhighways(ctx: TreeContext) -> PairingSet:
    """Globally known pairing R of the super-highways.

    Raises:
        PairingInvariantViolation: a fragment is active in more than
            2 c_b log2^2 n pairs.
    """
    net = ctx.network
    skeleton = ctx.decomposition.skeleton
    layering = ctx.layering

    def items(v: int) -> list[tuple[int, ...]]:
        s = net.slots(v)
        if not s.get("hw_top"):
            return []
        return [tuple(r) for r in fragment_records(ctx, s["fragment"])]

    raw = globalize(net, ctx.bfs, items, "pairing-records")  # type: ignore[arg-type]
    records = [PairRecord(*r) for r in raw]
    pairing = PairingSet(records, derive_pairs(skeleton, layering.skeleton_boughs, records))
    for v in range(ctx.n):
        net.slots(v)["pairing"] = pairing

    log = max(1.0, math.log2(ctx.n))
    bound = 2 * ctx.config.interest.c_b * log * log
    for f, count in pairing.appearances().items():
        if count > bound:
            raise PairingInvariantViolation(
                f"fragment {f} is active in {count} pairs, bound {bound:.1f}"
            )
    ctx.stats.extra["superhighway_pairs"] = len(pairing)
    LOGGER.debug("%d records, %d super-highway pairs", len(records), len(pairing))
    return pairing
