"""Routing of per-non-tree-edge inputs to the tree edges they cover.

A non-tree edge x = (u, y) covers the tree edges on the paths from u and
from y up to their LCA. Each endpoint handles its own side of the cycle, and
the side is split along the fragment decomposition:

1. inside the endpoint's own fragment, a convergecast restricted to that
   fragment carries the input up to the LCA or the fragment root, whichever
   is lower, in O(fragment height + entries) rounds;
2. when the LCA lies strictly inside the highway of another fragment F, the
   endpoint in F feeds the input into a convergecast over F reoriented
   towards its bottom; a highway vertex then reads what its parent
   accumulated, which is exactly the inputs whose LCA is above it;
3. highways of ancestor fragments lying wholly below the LCA are covered
   through one keyed convergecast and broadcast over the BFS tree, in
   O(D + fragments * keys) rounds.

Every vertex reads only its own slots; the decomposition must have run.
"""

import heapq
import logging
import math
from collections import deque
from collections.abc import Callable, Container, Iterable

from congestcut.exceptions import CongestCutException
from congestcut.graph.lca import LcaLabel, lca_from_labels
from congestcut.routines.batch import Value, add, decode_value, encode_value
from congestcut.routines.gather import END, LAST, chunk_item
from congestcut.sim.engine import Message, Network, NodeContext, NodeProgram

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

Entry = tuple[int, int, Value]
"""(tag, key, value); the entry stays at vertices deeper than its tag"""

EdgeValues = Callable[[int, int], Iterable[tuple[int, Value]]]
"""(endpoint, other endpoint) -> (key, value) inputs of that non-tree edge"""


class TreeConvergecast(NodeProgram):
    """Merges entries per (tag, key) on one rooted tree and forwards the live ones upward.

    Entries travel in descending tag order; an entry is final once every child
    has moved past its tag. Items above the budget are split over several
    rounds. With `broadcast`, the root streams its merged result back down.
    """

    def __init__(
        self,
        ctx: NodeContext,
        parent: int | None,
        children: Iterable[int],
        depth: float,
        entries: Iterable[Entry],
        combine: Callable[[Value, Value], Value],
        budget: int,
        bits: int,
        broadcast: bool = False,
        keep: Callable[[int], bool] | None = None,
    ) -> None:
        super().__init__(ctx)
        self._parent = parent
        self._children = list(children)
        self._depth = depth
        self._combine = combine
        self._budget, self._bits = budget, bits
        self._broadcast = broadcast
        self._keep = keep
        self._frontier: dict[int, float] = {c: math.inf for c in self._children}
        self._pending: dict[tuple[int, int], Value] = {}
        self._heap: list[tuple[int, int]] = []
        self._up: deque[Message] = deque()
        self._down: deque[Message] = deque()
        self._buffers: dict[int, list[int]] = {}
        self._closed = False
        self._down_done = not broadcast
        self.received: dict[int, dict[int, Value]] = {c: {} for c in self._children}
        self.result: dict[int, Value] = {}
        for tag, key, value in entries:
            self._merge(tag, key, value)

    def _merge(self, tag: int, key: int, value: Value) -> None:
        if tag >= self._depth or value is None:
            return
        k = (tag, key)
        if k in self._pending:
            self._pending[k] = self._combine(self._pending[k], value)
        else:
            self._pending[k] = value
            heapq.heappush(self._heap, (-tag, -key))

    def _from_child(self, child: int, words: tuple[int, ...]) -> None:
        tag, key, value = words[0], words[1], decode_value(words[2:])
        self._frontier[child] = tag
        seen = self.received[child]
        seen[key] = value if key not in seen else self._combine(seen[key], value)
        self._merge(tag, key, value)

    def _release(self) -> None:
        bound = max(self._frontier.values(), default=-math.inf)
        while self._heap and -self._heap[0][0] > bound:
            neg_tag, neg_key = heapq.heappop(self._heap)
            k = (-neg_tag, -neg_key)
            if self._parent is not None:
                item = k + encode_value(self._pending[k])
                self._up.extend(chunk_item(item, self._budget, self._bits))
        if bound > -math.inf or self._closed:
            return
        self._closed = True
        if self._parent is not None:
            self._up.append((END,))
        elif self._broadcast:
            self.result = self.merged()
            self._down_done = True
            if not self._children:
                return
            for key in sorted(self.result):
                item = (key,) + encode_value(self.result[key])
                self._down.extend(chunk_item(item, self._budget, self._bits))
            self._down.append((END,))

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        for sender, frame in inbox.items():
            if sender == self._parent:
                if self._children:
                    self._down.append(frame)
                if frame[0] == END:
                    self._down_done = True
                    continue
            elif frame[0] == END:
                self._frontier[sender] = -math.inf
                continue
            buf = self._buffers.setdefault(sender, [])
            buf.extend(frame[1:])
            if frame[0] != LAST:
                continue
            words = tuple(buf)
            buf.clear()
            if sender != self._parent:
                self._from_child(sender, words)
            elif self._keep is None or self._keep(words[0]):
                self.result[words[0]] = decode_value(words[1:])
        self._release()
        out: dict[int, Message] = {}
        if self._up:
            out[self._parent] = self._up.popleft()  # type: ignore[index]
        if self._down:
            frame = self._down.popleft()
            for c in self._children:
                out[c] = frame
        idle = not self._up and not self._down
        if idle and self._closed and self._down_done:
            self.halt()
        self.sleeping = idle
        return out

    def merged(self) -> dict[int, Value]:
        """Own and received entries combined per key."""
        out: dict[int, Value] = {}
        for (_, key), value in self._pending.items():
            out[key] = value if key not in out else self._combine(out[key], value)
        return out

    @property
    def output(self) -> dict[int, Value]:
        return self.result if self._broadcast else self.merged()


class _ReceivedOutput(TreeConvergecast):
    @property
    def output(self) -> dict[int, dict[int, Value]]:
        return self.received


TreePlan = tuple[int | None, list[int], float]
"""(parent, children, depth) of a vertex in one routing tree"""


def run_convergecast(
    network: Network,
    phase: str,
    plan: Callable[[int], TreePlan],
    entries: Callable[[int], Iterable[Entry]],
    combine: Callable[[Value, Value], Value],
    broadcast: bool = False,
    keep: Callable[[int, int], bool] | None = None,
    program: type[TreeConvergecast] = TreeConvergecast,
) -> dict[int, dict]:
    """Run a pipelined convergecast over the forest given by `plan`.

    Args:
        network: the network to run on
        phase: name of the phase in the metrics
        plan: vertex -> (parent, children, depth); entries tagged at or
            below a vertex's depth are dropped there
        entries: vertex -> its own entries
        combine: associative and commutative merge of two values
        broadcast: stream each root's result back to its whole tree
        keep: (vertex, key) -> True if the vertex stores that broadcast key
        program: the program class

    Returns:
        vertex -> program output
    """
    budget, bits = network.budget_words, network.word_bits

    def factory(ctx: NodeContext) -> NodeProgram:
        v = ctx.vertex
        parent, children, depth = plan(v)
        kept = None if keep is None else (lambda key: keep(v, key))  # noqa: E731
        return program(
            ctx, parent, children, depth, entries(v), combine, budget, bits, broadcast, kept
        )

    return network.run(phase, factory)


def non_tree_neighbours(network: Network, v: int) -> list[int]:
    """Neighbours of v joined to it by a non-tree edge."""
    slots = network.slots(v)
    tree_nbrs = set(slots["tree_children"])
    if slots["tree_parent"] is not None:
        tree_nbrs.add(slots["tree_parent"])
    return [y for y in sorted(network.graph.neighbours(v)) if y not in tree_nbrs]


def _inside(label: LcaLabel, pre: int, size: int) -> bool:
    return pre <= label.pre < pre + size


def _parent_fragment(slots: dict, y: int) -> int:
    """Fragment of the parent edge of neighbour y; a marked vertex is its own bottom."""
    home = slots["nbr_home"][y]
    return y if home is None else home


def split_entries(
    network: Network,
    v: int,
    edge_values: EdgeValues,
    highway_fragments: Container[int] | None = None,
) -> tuple[list[Entry], list[Entry], list[Entry]]:
    """Local, partial-highway and full-highway entries of the non-tree edges at v.

    Full-highway entries carry the key `key * n + fragment`.
    """
    s = network.slots(v)
    local: list[Entry] = []
    partial: list[Entry] = []
    full: list[Entry] = []
    if s["tree_parent"] is None:
        return local, partial, full
    n = network.n
    fid = s["fragment"]
    skeleton = s["skeleton"]
    own = skeleton.entry(fid)
    label = s["label"]
    above = skeleton.bottoms_above(label)
    for y in non_tree_neighbours(network, v):
        pairs = list(edge_values(v, y))
        if not pairs:
            continue
        other = s["nbr_labels"][y]
        depth = lca_from_labels(label, other)[1]
        tag = max(depth, own.root_depth)
        local.extend((tag, key, value) for key, value in pairs)
        if (
            own.root_depth < depth < own.bottom_depth
            and _inside(other, own.bottom_pre, own.bottom_size)
            and _parent_fragment(s, y) != fid
        ):
            partial.extend((key, key, value) for key, value in pairs)
        for g in above:
            if g == fid or (highway_fragments is not None and g not in highway_fragments):
                continue
            e = skeleton.entry(g)
            if not _inside(other, e.top_pre, e.top_size):
                full.extend((key * n + g, key * n + g, value) for key, value in pairs)
    return local, partial, full


def _fragment_plan(network: Network, v: int) -> TreePlan:
    s = network.slots(v)
    fid = s["fragment"]
    if fid is None:
        return None, [], 0
    nf = s["nbr_fragment"]
    p = s["tree_parent"]
    parent = p if nf[p] == fid else None
    return parent, [c for c in s["tree_children"] if nf[c] == fid], s["label"].depth


def _reversed_plan(network: Network, v: int) -> TreePlan:
    s = network.slots(v)
    fid = s["fragment"]
    if fid is None:
        return None, [], math.inf
    nf, nh = s["nbr_fragment"], s["nbr_highway"]
    p = s["tree_parent"]
    up = p if nf[p] == fid else None
    inner = [c for c in s["tree_children"] if nf[c] == fid]
    side = [c for c in inner if not nh[c]]
    if not s["highway"]:
        return up, side, math.inf
    down = [c for c in inner if nh[c]]
    return (down[0] if down else None), side + ([] if up is None else [up]), math.inf


def _bfs_plan(network: Network, v: int) -> TreePlan:
    s = network.slots(v)
    return s["bfs_parent"], list(s["bfs_children"]), math.inf


def _fold(combine: Callable[[Value, Value], Value], values: Iterable[Value]) -> Value:
    acc: Value = None
    for x in values:
        if x is not None:
            acc = x if acc is None else combine(acc, x)
    return acc


def route_cover_aggregate(
    network: Network,
    edge_values: EdgeValues,
    combine: Callable[[Value, Value], Value] = add,
    phase: str = "cover-routing",
    highway_fragments: Container[int] | None = None,
) -> dict[int, dict[int, Value]]:
    """Aggregate, per key, the inputs of the non-tree edges covering each tree edge.

    Args:
        network: the network to run on, after the fragment decomposition
        edge_values: (v, y) -> (key, value) pairs of the non-tree edge (v, y);
            both endpoints must produce the same pairs
        combine: associative and commutative merge of two values
        phase: prefix of the phase names in the metrics
        highway_fragments: fragments whose highway edges need the result;
            None for all of them

    Returns:
        child vertex of each tree edge -> key -> aggregated value; keys with no
        covering input are absent
    """
    n = network.n
    if "skeleton" not in network.slots(0):
        if any(non_tree_neighbours(network, v) for v in range(n)):
            raise CongestCutException("cover routing needs the fragment decomposition")
        return {v: {} for v in range(n) if network.slots(v)["tree_parent"] is not None}
    split = {v: split_entries(network, v, edge_values, highway_fragments) for v in range(n)}

    local = run_convergecast(
        network,
        f"{phase}-local",
        lambda v: _fragment_plan(network, v),
        lambda v: split[v][0],
        combine,
    )
    shifted = run_convergecast(
        network,
        f"{phase}-highway",
        lambda v: _reversed_plan(network, v),
        lambda v: split[v][1],
        combine,
        program=_ReceivedOutput,
    )

    def wanted(v: int, key: int) -> bool:
        s = network.slots(v)
        return bool(s.get("highway")) and key % n == s["fragment"]

    full = run_convergecast(
        network,
        f"{phase}-global",
        lambda v: _bfs_plan(network, v),
        lambda v: split[v][2],
        combine,
        broadcast=True,
        keep=wanted,
    )

    out: dict[int, dict[int, Value]] = {}
    for v in range(n):
        s = network.slots(v)
        p = s["tree_parent"]
        if p is None:
            continue
        parts: list[dict[int, Value]] = [local[v]]
        if s["highway"]:
            parts.append(shifted[v].get(p, {}))
            parts.append({k // n: value for k, value in full[v].items() if k % n == s["fragment"]})
        keys = set().union(*parts)
        out[v] = {k: _fold(combine, (part.get(k) for part in parts)) for k in keys}
    return out


def compute_cov_all(network: Network) -> dict[int, int]:
    """Every tree edge learns its cover value; stored in the `cov` slot.

    Cov(e) is the routed weight sum of the covering non-tree edges plus w(e).
    """
    weights = network.graph
    routed = route_cover_aggregate(
        network, lambda v, y: [(0, weights.weight(v, y))], add, "cov"
    )
    cov: dict[int, int] = {}
    for v, out in routed.items():
        parent = network.slots(v)["tree_parent"]
        value = int(out.get(0) or 0) + weights.weight(v, parent)  # type: ignore[arg-type]
        network.slots(v)["cov"] = value
        cov[v] = value
    LOGGER.debug("cover values of %d tree edges", len(cov))
    return cov
