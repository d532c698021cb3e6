"""Sampling the cover set of every tree edge.

A non-tree edge of weight w stands for w parallel unit edges. The sampling
runs one iteration per cover class: in iteration j the tree edges with
Cov(e) in [2^(j-1) + 1, 2^j] are active and every unit samples itself with
probability 2^-j. Per repetition the smaller endpoint of an edge draws how
many of its units are sampled and the smallest random identifier in [n^5]
among them, and sends that identifier across once. Routing the minimum over
the covering edges then hands each active tree edge a uniformly random
sampled covering unit, together with the labels of its endpoints. The tree
edge's own units compete too, and a repetition they win only counts in the
denominator. Each active edge keeps its first non-empty outcomes.

The exact mode replaces sampling by exact cover values and serves as the
deterministic reference.
"""

import logging
from collections import namedtuple
from collections.abc import Mapping, Sequence

import numpy as np

from congestcut.config import InterestMode
from congestcut.context import TreeContext
from congestcut.graph.cover import cov_oracle
from congestcut.graph.lca import LcaLabel, decode_label, encode_label
from congestcut.mathutils import ceil_log2
from congestcut.routines.batch import Value, add, min_opt
from congestcut.routines.cover_routing import route_cover_aggregate
from congestcut.routines.gather import exchange
from congestcut.routines.highways import globalize

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


EdgeInfo = namedtuple("EdgeInfo", "edge cov covset highway layer fragment")
EdgeInfo.__doc__ = """What a tree edge knows about itself, O(log n) bits.

Args:
    edge: child vertex.
    cov: cover value Cov(e).
    covset: number of edges covering e, e included.
    highway: True for a highway edge.
    layer: layer in its layering.
    fragment: fragment id.
"""

CoverSample = namedtuple("CoverSample", "reps self_wins samples")
CoverSample.__doc__ = """Outcome of the class iteration of one tree edge.

Args:
    reps: repetitions run in the edge's class iteration.
    self_wins: kept repetitions won by the edge's own weight units.
    samples: (u, y) endpoints of the winning non-tree edge of every other
        kept repetition, u < y.
"""


def repetitions(n: int, repetition_factor: int = 1) -> int:
    """Repetitions per class iteration, `repetition_factor` times ceil(log2 n) squared.

    >>> repetitions(64), repetitions(2), repetitions(1)
    (36, 1, 1)
    """
    return repetition_factor * max(1, ceil_log2(n)) ** 2


def retained(n: int, retention_factor: int) -> int:
    """Non-empty outcomes a tree edge keeps.

    >>> retained(64, 4)
    24
    """
    return retention_factor * max(1, ceil_log2(n))


def cover_class(cov: int) -> int:
    """Iteration j with cov in [2^(j-1) + 1, 2^j]; cov 1 is class 0.

    >>> cover_class(1), cover_class(2), cover_class(3), cover_class(4), cover_class(5)
    (0, 1, 2, 2, 3)
    """
    return ceil_log2(cov)


def qualifying_count(total: int, divisor: int) -> int:
    """Samples a path needs out of `total`: ceil(total / divisor)."""
    return -(-total // divisor)


def draw_sampled_ids(
    rng: np.random.Generator, weight: int, prob: float, reps: int, id_range: int
) -> list[int | None]:
    """Smallest identifier among the sampled units of an edge, per repetition.

    Each of the `weight` units is sampled with probability `prob`; the count
    is drawn from the binomial law and the minimum of k uniform identifiers
    in [0, id_range) from its CDF 1 - (1 - t)^k. None where no unit is
    sampled.
    """
    counts = rng.binomial(weight, prob, size=reps)
    u = rng.random(reps)
    t = 1.0 - np.power(1.0 - u, 1.0 / np.maximum(counts, 1))
    ids = np.minimum(id_range - 1, np.floor(t * id_range))
    return [int(x) if k > 0 else None for x, k in zip(ids, counts)]


def pick_outcomes(
    own: Sequence[int | None], routed: Mapping[int, Value], keep: int
) -> tuple[int, list[Value]]:
    """Self wins and winning samples among the first `keep` non-empty repetitions.

    Args:
        own: the tree edge's own smallest sampled identifier per repetition
        routed: repetition -> smallest covering sample, a tuple led by its
            identifier
        keep: outcomes to keep

    Returns:
        (self wins, kept samples in repetition order)
    """
    wins = 0
    samples: list[Value] = []
    for r, mine in enumerate(own):
        if wins + len(samples) >= keep:
            break
        best = routed.get(r)
        if best is None and mine is None:
            continue
        if best is None or (mine is not None and mine < best[0]):  # type: ignore[index]
            wins += 1
        else:
            samples.append(best)
    return wins, samples


def _id_range(n: int, exponent: int) -> int:
    return max(2, n) ** exponent


def covset_sizes(ctx: TreeContext) -> dict[int, int]:
    """|CovSet(e)| for every tree edge, counting e itself."""
    net = ctx.network
    routed = route_cover_aggregate(net, lambda v, y: [(0, 1)], add, "covset-size")
    sizes = {c: int(routed.get(c, {}).get(0) or 0) + 1 for c in ctx.tree.tree_edges}
    for c, size in sizes.items():
        net.slots(c)["covset"] = size
    return sizes


def edge_infos(ctx: TreeContext) -> dict[int, EdgeInfo]:
    """EdgeInfo of every tree edge, stored in its `edge_info` slot."""
    decomp = ctx.decomposition
    layering = ctx.layering
    sizes = covset_sizes(ctx)
    infos: dict[int, EdgeInfo] = {}
    for c in ctx.tree.tree_edges:
        hw = decomp.is_highway(c)
        fid = decomp.edge_fragment[c]
        layer = layering.skeleton_layer[fid] if hw else layering.nonhighway_layer[c]
        infos[c] = EdgeInfo(c, ctx.cov[c], sizes[c], hw, layer, fid)
        ctx.slots(c)["edge_info"] = infos[c]
    return infos


def _decode_sample(value: tuple[int, ...]) -> tuple[int, int, LcaLabel, LcaLabel]:
    lo, hi = value[1], value[2]
    a, pos = decode_label(value, 3)
    b, _ = decode_label(value, pos)
    return lo, hi, a, b


def sample_covset(ctx: TreeContext) -> dict[int, CoverSample]:
    """Sample covering edges of every tree edge, weighted by multiplicity.

    Each tree edge stores its `CoverSample` in the `cover_sample` slot and the
    labels of the sample endpoints, which travel with the routed samples, in
    `sample_labels`.

    Returns:
        child of each tree edge -> its samples
    """
    net = ctx.network
    icfg = ctx.config.interest
    n = ctx.n
    beta = repetitions(n, icfg.repetition_factor)
    keep = retained(n, icfg.retention_factor)
    id_range = _id_range(n, icfg.id_exponent)
    tree_edges = [v for v in range(n) if net.slots(v)["tree_parent"] is not None]

    def class_items(v: int) -> list[tuple[int, ...]]:
        s = net.slots(v)
        if s["tree_parent"] is None:
            return []
        fid = s["fragment"] if s.get("highway") else -1
        return [(cover_class(s["cov"]), -1 if fid is None else fid)]

    active: dict[int, set[int]] = {}
    for j, fid in globalize(net, ctx.bfs, class_items, "sample-classes"):  # type: ignore[arg-type]
        hw = active.setdefault(j, set())
        if fid >= 0:
            hw.add(fid)

    result: dict[int, CoverSample] = {}
    for j in sorted(active):
        prob = 2.0**-j
        drawn: dict[int, dict[int, list[int | None]]] = {}
        for v in range(n):
            drawn[v] = {
                y: draw_sampled_ids(net.rng(v), w, prob, beta, id_range)
                for y, w in ctx.non_tree(v)
                if v < y
            }
        received = exchange(
            net,
            lambda v: {
                y: [tuple(-1 if x is None else x for x in ids)] for y, ids in drawn[v].items()
            },
            "sample-ids",
        )

        def edge_values(v: int, y: int) -> list[tuple[int, Value]]:
            if v < y:
                ids = drawn[v][y]
            else:
                ids = [None if x < 0 else x for x in received[v][y][0]]
            s = net.slots(v)
            lo, hi = min(v, y), max(v, y)
            mine, theirs = encode_label(s["label"]), encode_label(s["nbr_labels"][y])
            ends = mine + theirs if v == lo else theirs + mine
            return [(r, (uid, lo, hi) + ends) for r, uid in enumerate(ids) if uid is not None]

        routed = route_cover_aggregate(
            net, edge_values, min_opt, "sample-route", highway_fragments=active[j]
        )
        for c in tree_edges:
            s = net.slots(c)
            if cover_class(s["cov"]) != j:
                continue
            own = draw_sampled_ids(
                net.rng(c), ctx.graph.weight(c, s["tree_parent"]), prob, beta, id_range
            )
            wins, won = pick_outcomes(own, routed.get(c, {}), keep)
            known: dict[int, LcaLabel] = {}
            pairs: list[tuple[int, int]] = []
            for value in won:
                lo, hi, a, b = _decode_sample(value)  # type: ignore[arg-type]
                known[lo], known[hi] = a, b
                pairs.append((lo, hi))
            result[c] = CoverSample(beta, wins, tuple(pairs))
            s["cover_sample"] = result[c]
            s["sample_labels"] = known
    LOGGER.debug("%d classes, %d repetitions each, %d kept", len(active), beta, keep)
    return result


def exact_bottoms(ctx: TreeContext) -> dict[int, list[int]]:
    """Deepest bottoms b with divisor * Cov(e, (b, p(b))) >= Cov(e), per edge.

    Written into the `intpot_bottoms` slot of every tree edge as a charged
    step; exact cover values are not available to the vertices otherwise.
    """
    divisor = ctx.config.interest.threshold_divisor
    tree = ctx.tree
    labels = ctx.labels
    by_depth = sorted(tree.tree_edges, key=lambda c: -tree.depth(c))

    def compute() -> dict[int, dict[str, list[int]]]:
        table = cov_oracle(tree, ctx.graph)
        out: dict[int, dict[str, list[int]]] = {}
        for e in tree.tree_edges:
            qualifying = [b for b in by_depth if divisor * table.pair(e, b) >= table.cov(e)]
            kept: list[int] = []
            for b in qualifying:
                lb = labels[b]
                if not any(lb.pre < labels[q].pre < lb.pre + lb.size for q in kept):
                    kept.append(b)
            out[e] = {"intpot_bottoms": sorted(kept)}
        return out

    ctx.network.inject_oracle("intpot-exact", compute, ctx.charge())
    return {c: ctx.slots(c)["intpot_bottoms"] for c in tree.tree_edges}


def sampling_enabled(ctx: TreeContext) -> bool:
    return ctx.config.interest.mode is InterestMode.SAMPLED
