"""Global knowledge over the BFS tree: minima, item lists and highway facts."""

import logging
from collections.abc import Callable, Iterable, Mapping

from congestcut.routines.batch import AggregateSpec, Value, pipelined_batch
from congestcut.routines.bfs import BfsTree
from congestcut.routines.gather import Item, gather_broadcast
from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Network

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


def global_min(
    network: Network,
    bfs: BfsTree,
    value_of: Callable[[int], Value],
    phase: str = "global-min",
) -> Value:
    """Minimum of the local values, learned by every vertex.

    Args:
        network: the network to run on
        bfs: the BFS tree
        value_of: vertex -> local value, None when it has none
        phase: name of the phases in the metrics

    Returns:
        the minimum, None if no vertex holds a value
    """
    up = pipelined_batch(
        network, bfs.scope, [AggregateSpec.minimum(lambda v, k: value_of(v))], phase
    )
    best = up.get(0, bfs.root)
    pipelined_batch(
        network,
        bfs.scope,
        [AggregateSpec.broadcast(lambda v, k: up.get(0, v))],
        f"{phase}-broadcast",
    )
    return best


def _per_index(
    network: Network,
    bfs: BfsTree,
    values: Callable[[int], Mapping[int, Value]],
    count: int,
    make: Callable[[Callable[[int, int], Value]], AggregateSpec],
    phase: str,
) -> list[Value]:
    local: dict[int, Mapping[int, Value]] = {}

    def value(v: int, i: int) -> Value:
        if v not in local:
            local[v] = values(v)
        return local[v].get(i)

    specs = [make(lambda v, k, i=i: value(v, i)) for i in range(count)]  # type: ignore[misc]
    up = pipelined_batch(network, bfs.scope, specs, phase)
    pipelined_batch(
        network,
        bfs.scope,
        [
            AggregateSpec.broadcast(lambda v, k, i=i: up.get(i, v))  # type: ignore[misc]
            for i in range(count)
        ],
        f"{phase}-broadcast",
    )
    return [up.get(i, bfs.root) for i in range(count)]


def global_minima(
    network: Network,
    bfs: BfsTree,
    values: Callable[[int], Mapping[int, Value]],
    count: int,
    phase: str = "global-minima",
) -> list[Value]:
    """`count` independent global minima in one pipelined pass.

    Args:
        network: the network to run on
        bfs: the BFS tree
        values: vertex -> (index -> local value); missing indices hold nothing
        count: number of minima
        phase: name of the phases in the metrics

    Returns:
        the minimum per index, None where no vertex holds a value
    """
    if count == 0:
        return []
    return _per_index(network, bfs, values, count, AggregateSpec.minimum, phase)


def global_sums(
    network: Network,
    bfs: BfsTree,
    values: Callable[[int], Mapping[int, int]],
    count: int,
    phase: str = "global-sums",
) -> list[int]:
    """`count` independent global sums, learned by every vertex."""
    if count == 0:
        return []
    sums = _per_index(
        network,
        bfs,
        values,  # type: ignore[arg-type]
        count,
        lambda inputs: AggregateSpec.sum(
            lambda v, k: inputs(v, k) or 0  # type: ignore[arg-type,return-value]
        ),
        phase,
    )
    return [int(s or 0) for s in sums]  # type: ignore[arg-type]


def globalize(
    network: Network,
    bfs: BfsTree,
    items: Callable[[int], Iterable[Item]],
    phase: str = "globalize",
    slot: str | None = None,
) -> list[Item]:
    """Upcast item lists to the BFS root and broadcast the union.

    Args:
        network: the network to run on
        bfs: the BFS tree
        items: vertex -> items it contributes
        phase: name of the phase in the metrics
        slot: if set, every vertex stores the list under this slot

    Returns:
        the sorted distinct items
    """
    result = gather_broadcast(network, bfs.scope, lambda v, k: items(v), phase=phase)
    merged = result[(bfs.root, 0)]
    if slot is not None:
        for v in range(network.n):
            network.slots(v)[slot] = result[(v, 0)]
    return merged


def broadcast_highway_extremes(
    network: Network, bfs: BfsTree
) -> dict[int, tuple[Item, Item]]:
    """Every vertex learns the highest and lowest edge of each fragment highway.

    The child vertex of a highway edge holds the slots `fragment`,
    `hw_top`, `hw_bottom`, `label` and `cov`.

    Returns:
        fragment -> ((child, pre, size, cov) of the top edge, same for the bottom)
    """

    def items(v: int) -> list[Item]:
        s = network.slots(v)
        out: list[Item] = []
        for flag, end in ((s.get("hw_top"), 0), (s.get("hw_bottom"), 1)):
            if flag:
                lbl = s["label"]
                out.append((s["fragment"], end, v, lbl.pre, lbl.size, s["cov"]))
        return out

    def table_of(known: list[Item]) -> dict[int, tuple[Item, Item]]:
        extremes: dict[int, list[Item]] = {}
        for f, end, c, pre, size, cov in known:
            extremes.setdefault(f, [(), ()])[end] = (c, pre, size, cov)
        return {f: (ends[0], ends[1]) for f, ends in extremes.items()}

    globalize(network, bfs, items, "highway-extremes", slot="highway_extremes")
    for v in range(network.n):
        s = network.slots(v)
        s["highway_extremes"] = table_of(s["highway_extremes"])
    table = network.slots(bfs.root)["highway_extremes"]
    LOGGER.debug("highway extremes of %d fragments", len(table))
    return table


def broadcast_min_cov_edges(
    network: Network, bfs: BfsTree, highway_scope: TreeScope
) -> dict[int, tuple[int, int]]:
    """Every vertex learns (e_min, Cov(e_min)) of each fragment highway.

    Args:
        network: the network to run on
        bfs: the BFS tree
        highway_scope: the highways, keyed by fragment; a highway edge's
            child holds its `cov` slot

    Returns:
        fragment -> (child of the minimum-cover edge, its cover value); ties
        go to the lowest edge id
    """

    def local(v: int, key: int) -> Value:
        if highway_scope.parent(key, v) is None:
            return None
        return (network.slots(v)["cov"], v)

    mins = pipelined_batch(
        network, highway_scope, [AggregateSpec.minimum(local)], "highway-min-cov"
    )

    def items(v: int) -> list[Item]:
        out: list[Item] = []
        for key in highway_scope.memberships(v):
            if v in highway_scope.roots(key):
                best = mins.get(0, v, key)
                if best is not None:
                    out.append((key, best[1], best[0]))  # type: ignore[index]
        return out

    globalize(network, bfs, items, "min-cov", slot="min_cov_edges")
    for v in range(network.n):
        s = network.slots(v)
        s["min_cov_edges"] = {f: (c, cov) for f, c, cov in s["min_cov_edges"]}
    return network.slots(bfs.root)["min_cov_edges"]
