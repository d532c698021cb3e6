"""Scoped pieces of pairwise cover values.

Let U(A) be the interior vertices of fragment A outside T(d_A). For a tree
edge e of A and any tree edge f not strictly below it, the part of
Cov(e, f) carried by edges with an endpoint in U(A) (in T(e) for a
non-highway e) is a sum over the vertices of A:

* non-highway e: P(e), the sum over T(e) of the incident weight covering f;
* highway e: P(e) - 2 M(e) + M(r_A), with P and M summed over U(A) only and
  M counting the edges whose other endpoint lies in T(d_A).

Every other edge covering a highway edge of A covers the whole highway.
Among those, the ones with an endpoint in U(B) for the fragment B of f
give Y_A(f), summed the same way inside B; the ones touching neither U(A)
nor U(B) give the global term X(A, B). Hence, for e in A and f in B != A:

    Cov(e, f) = L_A(e; f) + [e highway] (Y_A(f) + [f highway] X(A, B))

and inside one fragment Cov(e, f) = L_A(e; f) + [both highway] X(A, A).
"""

import logging
from collections import namedtuple
from collections.abc import Callable, Iterable, Mapping, Sequence

from congestcut.context import TreeContext
from congestcut.decomp.layering import bough_subtree_scope
from congestcut.decomp.skeleton import Skeleton, SkeletonEntry
from congestcut.graph.cover import CutCandidate
from congestcut.graph.lca import LcaLabel
from congestcut.routines.batch import AggregateSpec, BatchResult, Value, pipelined_batch
from congestcut.routines.gather import Item, exchange, gather_broadcast
from congestcut.routines.highways import global_sums, globalize
from congestcut.routines.scope import TreeScope

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


Target = namedtuple("Target", "child pre size cov extra highway")
Target.__doc__ = """A remote tree edge as the computing vertices know it.

Args:
    child: child vertex, the edge id.
    pre, size: label interval of the child.
    cov: Cov of the edge.
    extra: Y value of the edge towards the computing fragment, 0 inside it.
    highway: True for a highway edge.
"""

Link = tuple[int, int]
"""A graph edge (a, b), a < b."""


def below_bottom(entry: SkeletonEntry, label: LcaLabel) -> bool:
    """True if the vertex lies in T(d_F)."""
    return entry.bottom_pre <= label.pre < entry.bottom_pre + entry.bottom_size


def upper_interior(entry: SkeletonEntry, home: int | None, label: LcaLabel) -> bool:
    """True if the vertex is an interior vertex of F outside T(d_F)."""
    return home == entry.fid and not below_bottom(entry, label)


def spans_highway(entry: SkeletonEntry, a: LcaLabel, b: LcaLabel) -> bool:
    """True if the edge with endpoint labels a, b covers every highway edge of F."""
    top = (entry.top_pre <= a.pre < entry.top_pre + entry.top_size) != (
        entry.top_pre <= b.pre < entry.top_pre + entry.top_size
    )
    return top and below_bottom(entry, a) != below_bottom(entry, b)


def fragment_edge_lists(ctx: TreeContext) -> dict[int, tuple[Target, ...]]:
    """Every vertex of a fragment learns all its edges, in the `fragment_edges` slot.

    Returns:
        fragment -> its edges ordered by preorder, so highways run top-down
    """
    net = ctx.network
    scope = ctx.decomposition.fragment_scope

    def items(v: int, key: int) -> list[Item]:
        if scope.parent(key, v) is None:
            return []
        s = net.slots(v)
        return [(s["label"].pre, v, s["label"].size, s["cov"], int(s["highway"]))]

    got = gather_broadcast(net, scope, items, phase="fragment-edges")
    table: dict[int, tuple[Target, ...]] = {}
    for (v, key), lst in got.items():
        edges = tuple(Target(c, pre, size, cov, 0, bool(hw)) for pre, c, size, cov, hw in lst)
        net.slots(v).setdefault("fragment_edges", {})[key] = edges
        table[key] = edges
    return table


class LocalSums:
    """Results of a `local_sums` batch."""

    def __init__(self, sums: BatchResult, totals: BatchResult | None) -> None:
        self._sums = sums
        self._totals = totals

    def value(self, c: int, key: int, highway: bool) -> int:
        """L(e; target of key) at the child c of e."""
        if not highway:
            return int(self._sums.get(0, c, key, 0))  # type: ignore[arg-type]
        assert self._totals is not None
        p = int(self._sums.get(1, c, key, 0))  # type: ignore[arg-type]
        m = int(self._sums.get(2, c, key, 0))  # type: ignore[arg-type]
        return p - 2 * m + int(self._totals.get(0, c, key, 0))  # type: ignore[arg-type]


def local_sums(
    ctx: TreeContext,
    scope: TreeScope,
    bases: Mapping[int, int],
    owner: Mapping[int, int],
    counts: Callable[[int, int, int], bool],
    phase: str,
    highway: bool = True,
) -> LocalSums:
    """P, M and M(r) of every request in one batch plus one broadcast.

    Args:
        ctx: the tree context
        scope: base scope, fragments or boughs
        bases: request key -> key of `scope` it runs on
        owner: request key -> fragment whose interior vertices contribute
        counts: (u, y, request key) -> whether the weight of the non-tree
            edge (u, y) counts, judged at u
        phase: name of the phases in the metrics
        highway: False if only non-highway edges are evaluated
    """
    net = ctx.network
    skeleton = ctx.decomposition.skeleton
    cache: dict[tuple[int, int], tuple[int, int, int]] = {}

    def local(u: int, key: int) -> tuple[int, int, int]:
        if (u, key) in cache:
            return cache[(u, key)]
        s = net.slots(u)
        fid = owner[key]
        p = m = 0
        if s["home"] == fid:
            for y, w in ctx.non_tree(u):
                if counts(u, y, key):
                    p += w
                    if highway and below_bottom(skeleton.entry(fid), ctx.nbr_label(u, y)):
                        m += w
        upper = highway and not below_bottom(skeleton.entry(fid), s["label"])
        cache[(u, key)] = (p, p if upper else 0, m if upper else 0)
        return cache[(u, key)]

    keyed = scope.replicated(bases)
    specs = [AggregateSpec.sum(lambda v, k: local(v, k)[0], "p-all")]
    if highway:
        specs.append(AggregateSpec.sum(lambda v, k: local(v, k)[1], "p-upper"))
        specs.append(AggregateSpec.sum(lambda v, k: local(v, k)[2], "m-upper"))
    sums = pipelined_batch(net, keyed, specs, phase)
    totals = None
    if highway:
        totals = pipelined_batch(
            net,
            keyed,
            [AggregateSpec.broadcast(lambda v, k: sums.get(2, v, k))],
            f"{phase}-total",
        )
    return LocalSums(sums, totals)


def cross_values(
    ctx: TreeContext,
    scope: TreeScope,
    bases: Mapping[int, int],
    owner: Mapping[int, int],
    targets: Mapping[int, Sequence[Target]],
    evaluate: Mapping[int, Iterable[int]],
    extras: Mapping[int, int] | None = None,
    keep: Callable[[int, Target], bool] | None = None,
    phase: str = "cross-values",
) -> dict[int, list[tuple[int, int, int]]]:
    """Cut(e, f) for the evaluated edges e of each job and its known targets f.

    Every value is recorded at the child of e.

    Args:
        ctx: the tree context
        scope: base scope the jobs run on
        bases: job -> key of `scope`
        owner: job -> fragment of the evaluated edges
        targets: job -> edges known to the job's vertices
        evaluate: job -> children of the edges that evaluate
        extras: job -> X(A, B) added for highway/highway pairs
        keep: (child, target) -> whether the pair is wanted
        phase: name of the phases in the metrics

    Returns:
        job -> [(cut, e, f)]
    """
    requests: list[tuple[int, int]] = [
        (job, i) for job in sorted(targets) for i in range(len(targets[job]))
    ]
    if not requests:
        return {}
    rk_bases = {rk: bases[job] for rk, (job, _) in enumerate(requests)}
    rk_owner = {rk: owner[job] for rk, (job, _) in enumerate(requests)}
    index = {req: rk for rk, req in enumerate(requests)}

    def counts(u: int, y: int, rk: int) -> bool:
        job, i = requests[rk]
        return ctx.covers_at(u, y, targets[job][i])

    evaluating = {job: list(evaluate.get(job, ())) for job in targets}
    any_highway = any(ctx.slots(c)["highway"] for cs in evaluating.values() for c in cs)
    sums = local_sums(ctx, scope, rk_bases, rk_owner, counts, phase, any_highway)

    out: dict[int, list[tuple[int, int, int]]] = {}
    for job, cs in evaluating.items():
        rows = out.setdefault(job, [])
        extra = (extras or {}).get(job, 0)
        for c in cs:
            s = ctx.slots(c)
            hw = bool(s["highway"])
            for i, t in enumerate(targets[job]):
                if t.child == c or (keep is not None and not keep(c, t)):
                    continue
                cov = sums.value(c, index[(job, i)], hw)
                if hw:
                    cov += t.extra + (extra if t.highway else 0)
                cut = s["cov"] + t.cov - 2 * cov
                ctx.record(c, CutCandidate.two(c, t.child, cut))
                rows.append((cut, c, t.child))
    return out


def ship_targets(
    ctx: TreeContext,
    src: TreeScope,
    dst: TreeScope,
    links: Mapping[int, Link],
    items: Callable[[int, int], Iterable[Item]],
    phase: str,
) -> dict[int, list[Item]]:
    """Move item lists from one keyed tree to another over a connecting edge.

    The items of key k are gathered in `src`, sent across `links[k]` by its
    endpoint in `src`, and spread over the key in `dst`.

    Returns:
        key -> the items, as every vertex of the key in `dst` knows them
    """
    net = ctx.network
    held = gather_broadcast(net, src, items, phase=f"{phase}-source")
    outgoing: dict[int, dict[int, list[Item]]] = {}
    arrival: dict[int, int] = {}
    for key, (a, b) in links.items():
        u, y = (a, b) if a in src.vertices(key) else (b, a)
        arrival[key] = y
        for item in held.get((u, key), []):
            outgoing.setdefault(u, {}).setdefault(y, []).append((key,) + item)
    got = exchange(net, lambda v: outgoing.get(v, {}), f"{phase}-link")
    arrived: dict[tuple[int, int], list[Item]] = {}
    for v, per in got.items():
        for lst in per.values():
            for item in lst:
                arrived.setdefault((v, item[0]), []).append(tuple(item[1:]))
    spread = gather_broadcast(
        net, dst, lambda v, key: arrived.get((v, key), []), phase=f"{phase}-spread"
    )
    return {key: spread.get((y, key), []) for key, y in arrival.items()}


def _link_specs(
    ctx: TreeContext, fragments: Sequence[int], source: Callable[[int, int], int | None]
) -> list[AggregateSpec]:
    net = ctx.network

    def best(u: int, key: int, target: int) -> Value:
        if source(u, key) in (None, target):
            return None
        nbr_home = net.slots(u)["nbr_home"]
        found = [(min(u, y), max(u, y)) for y in sorted(nbr_home) if nbr_home[y] == target]
        return min(found) if found else None

    return [
        AggregateSpec.minimum(lambda u, k, b=b: best(u, k, b), f"link-{b}")  # type: ignore[misc]
        for b in fragments
    ]


def _told(
    ctx: TreeContext, scope: TreeScope, found: BatchResult, count: int, phase: str
) -> BatchResult:
    return pipelined_batch(
        ctx.network,
        scope,
        [
            AggregateSpec.broadcast(lambda v, k, i=i: found.get(i, v, k))  # type: ignore[misc]
            for i in range(count)
        ],
        phase,
    )


def find_fragment_links(ctx: TreeContext) -> dict[tuple[int, int], Link]:
    """First edge between the interiors of every two fragments.

    One min spec per fragment over all fragment trees, then a broadcast;
    the vertices of A store `fragment_links` {B: edge}. The edge is the
    lexicographically smallest (a, b), a < b, so both sides agree.
    """
    net = ctx.network
    scope = ctx.decomposition.fragment_scope
    fragments = sorted(ctx.decomposition.fragments)
    specs = _link_specs(ctx, fragments, lambda u, key: key if net.slots(u)["home"] == key else None)
    found = pipelined_batch(net, scope, specs, "fragment-links")
    told = _told(ctx, scope, found, len(specs), "fragment-links-broadcast")
    links: dict[tuple[int, int], Link] = {}
    for key in scope.keys:
        for v in scope.vertices(key):
            mine = {
                b: told.get(i, v, key)
                for i, b in enumerate(fragments)
                if told.get(i, v, key) is not None
            }
            net.slots(v).setdefault("fragment_links", {})[key] = mine
        for b, edge in net.slots(scope.roots(key)[0])["fragment_links"][key].items():
            links[(key, b)] = edge  # type: ignore[assignment]
    LOGGER.debug("%d fragment links", len(links))
    return links


def find_connecting_edges(ctx: TreeContext) -> dict[tuple[int, int], Link]:
    """First edge between T(P') and the interior of every other fragment.

    Runs over the subtrees of all non-highway boughs at once; every vertex
    of T(P') stores `bough_links` {P': {B: edge}}.

    Returns:
        (bough key, fragment) -> edge
    """
    net = ctx.network
    layering = ctx.layering
    scope = bough_subtree_scope(ctx.tree, layering.nh_boughs)
    fragments = sorted(ctx.decomposition.fragments)
    specs = _link_specs(ctx, fragments, lambda u, key: layering.nh_boughs[key].fragment)
    found = pipelined_batch(net, scope, specs, "bough-links")
    told = _told(ctx, scope, found, len(specs), "bough-links-broadcast")
    links: dict[tuple[int, int], Link] = {}
    for key in scope.keys:
        for v in scope.vertices(key):
            mine = {
                b: told.get(i, v, key)
                for i, b in enumerate(fragments)
                if told.get(i, v, key) is not None
            }
            net.slots(v).setdefault("bough_links", {})[key] = mine
            if v == key:
                for b, edge in mine.items():
                    links[(key, b)] = edge  # type: ignore[assignment]
    LOGGER.debug("%d bough links", len(links))
    return links


def fragment_edge_sums(ctx: TreeContext) -> dict[int, dict[int, int]]:
    """Y_B(e) for every tree edge e of A and every fragment B != A.

    Y_B(e) sums the edges covering e with an endpoint in A, the other
    endpoint outside U(A) and U(B), that cover the whole highway of B. Stored
    as the `y_table` slot {B: Y} of the child of e.
    """
    net = ctx.network
    decomp = ctx.decomposition
    skeleton = decomp.skeleton
    fragments = sorted(decomp.fragments)
    pairs = [(a, b) for a in fragments for b in fragments if a != b]
    if not pairs:
        return {}
    bases = {k: a for k, (a, _) in enumerate(pairs)}

    def counts(u: int, y: int, k: int) -> bool:
        entry = skeleton.entry(pairs[k][1])
        other = ctx.nbr_label(u, y)
        if upper_interior(entry, net.slots(u)["nbr_home"][y], other):
            return False
        return spans_highway(entry, ctx.label(u), other)

    sums = local_sums(ctx, decomp.fragment_scope, bases, bases, counts, "fragment-edge-sums")
    table: dict[int, dict[int, int]] = {}
    for k, (a, b) in enumerate(pairs):
        for c in decomp.fragments[a].edges:
            y = sums.value(c, k, decomp.is_highway(c))
            table.setdefault(c, {})[b] = y
            net.slots(c).setdefault("y_table", {})[b] = y
    return table


def pair_extras(ctx: TreeContext, pairs: Iterable[tuple[int, int]]) -> dict[tuple[int, int], int]:
    """X(A, B): weight of the edges touching neither U(A) nor U(B) that cover
    both whole highways; X(A, A) for a single fragment.

    Values are kept in the `pair_extras` slot of every vertex and only
    missing pairs are summed, one global sum each.
    """
    net = ctx.network
    skeleton = ctx.decomposition.skeleton
    known: dict[tuple[int, int], int] = net.slots(ctx.root).setdefault("pair_extras", {})
    wanted = sorted({(min(a, b), max(a, b)) for a, b in pairs})
    missing = [p for p in wanted if p not in known]
    if missing:

        def values(v: int) -> dict[int, int]:
            s = net.slots(v)
            out: dict[int, int] = {}
            for i, (a, b) in enumerate(missing):
                ea, eb = skeleton.entry(a), skeleton.entry(b)
                if upper_interior(ea, s["home"], s["label"]) or upper_interior(
                    eb, s["home"], s["label"]
                ):
                    continue
                total = 0
                for y, w in ctx.non_tree(v):
                    if y < v:
                        continue
                    home, lbl = s["nbr_home"][y], ctx.nbr_label(v, y)
                    if upper_interior(ea, home, lbl) or upper_interior(eb, home, lbl):
                        continue
                    if spans_highway(ea, s["label"], lbl) and spans_highway(eb, s["label"], lbl):
                        total += w
                if total:
                    out[i] = total
            return out

        bfs = ctx.bfs
        assert bfs is not None
        sums = global_sums(net, bfs, values, len(missing), "pair-extras")
        known.update(zip(missing, sums))
        for v in range(ctx.n):
            net.slots(v)["pair_extras"] = known
    return {(a, b): known[(min(a, b), max(a, b))] for a, b in pairs}


def decoupled_minima(
    ctx: TreeContext, pairs: Iterable[tuple[int, int]]
) -> dict[tuple[int, int], tuple[int, int]]:
    """min over highway edges e of A of (Cov(e) - 2 Y_B(e), e), per (A, B).

    Learned by every vertex (`decoupled` slot); cached like `pair_extras`.
    """
    net = ctx.network
    decomp = ctx.decomposition
    known: dict[tuple[int, int], tuple[int, int]] = net.slots(ctx.root).setdefault("decoupled", {})
    missing = sorted({p for p in pairs if p not in known})
    if missing:
        bases = {k: a for k, (a, _) in enumerate(missing)}

        def value(v: int, k: int) -> Value:
            a, b = missing[k]
            s = net.slots(v)
            if not s.get("highway") or s.get("fragment") != a:
                return None
            return (s["cov"] - 2 * s["y_table"][b], v)

        keyed = decomp.fragment_scope.replicated(bases)
        mins = pipelined_batch(net, keyed, [AggregateSpec.minimum(value)], "decoupled-minima")

        def items(v: int) -> list[Item]:
            out: list[Item] = []
            for k in keyed.memberships(v):
                if v == decomp.fragments[missing[k][0]].root:
                    best = mins.get(0, v, k)
                    if best is not None:
                        out.append((k, best[0], best[1]))  # type: ignore[index]
            return out

        for k, val, e in globalize(net, ctx.bfs, items, "decoupled-minima-globalize"):
            known[missing[k]] = (val, e)
        for v in range(ctx.n):
            net.slots(v)["decoupled"] = known
    return {p: known[p] for p in pairs}


def highway_extra_of(ctx: TreeContext, c: int, fid: int) -> int:
    """Y value of the edge with child c towards fragment `fid`, 0 inside it."""
    return int(ctx.slots(c).get("y_table", {}).get(fid, 0))


def target_of(ctx: TreeContext, c: int, towards: int | None = None) -> Target:
    """The edge with child c as a `Target`, its extra taken towards `towards`."""
    s = ctx.slots(c)
    extra = 0 if towards is None else highway_extra_of(ctx, c, towards)
    return Target(c, s["label"].pre, s["label"].size, s["cov"], extra, bool(s["highway"]))


def strictly_below(ctx: TreeContext, c: int, t: Target) -> bool:
    """True if the target edge lies strictly below the edge with child c."""
    lbl = ctx.label(c)
    return lbl.pre < t.pre < lbl.pre + lbl.size


def pack(t: Target) -> Item:
    return (t.child, t.pre, t.size, t.cov, t.extra, int(t.highway))


def unpack(item: Item) -> Target:
    c, pre, size, cov, extra, hw = item
    return Target(c, pre, size, cov, extra, bool(hw))


def highway_end(ctx: TreeContext, fid: int, bottom: bool, extra: int = 0) -> Target:
    """Top or bottom highway edge of a fragment, from the broadcast extremes."""
    c, pre, size, cov = ctx.slots(ctx.root)["highway_extremes"][fid][int(bottom)]
    return Target(c, pre, size, cov, extra, True)


def extremal_edge_sums(
    ctx: TreeContext, wanted: Iterable[tuple[int, int]]
) -> dict[tuple[int, int], int]:
    """Y_A(f) of highway-extremal edges f, learned by every vertex.

    Args:
        wanted: (child of f, fragment A) pairs, known to every vertex

    Returns:
        (child, A) -> Y_A(f)
    """
    net = ctx.network
    asked: dict[int, list[int]] = {}
    for c, a in set(wanted):
        asked.setdefault(c, []).append(a)
    if not asked:
        return {}
    items = globalize(
        net,
        ctx.bfs,  # type: ignore[arg-type]
        lambda v: [(v, a, highway_extra_of(ctx, v, a)) for a in sorted(asked.get(v, ()))],
        "extremal-edge-sums",
    )
    return {(c, a): y for c, a, y in items}


def highway_length(skeleton: Skeleton, fid: int) -> int:
    """Number of highway edges of a fragment."""
    entry = skeleton.entry(fid)
    return entry.bottom_depth - entry.root_depth
