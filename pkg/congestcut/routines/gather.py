"""List convergecast with broadcast back, and one-hop neighbour exchange."""

from collections import deque
from collections.abc import Callable, Iterable, Mapping

from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Message, Network, NodeContext, NodeProgram, message_words

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

Item = tuple[int, ...]

_UP, _UP_END, _DOWN, _DOWN_END = range(4)


class _GatherTask:
    def __init__(self, key: int, parent: int | None, children: list[int], own: Iterable[Item]):
        self.key = key
        self.parent = parent
        self.children = children
        self.waiting = set(children)
        self.seen: set[Item] = set()
        self.result: list[Item] = []
        self.up_done = False
        self.down_done = False
        self.own = list(own)


class GatherProgram(NodeProgram):
    """Streams items up each keyed tree, then streams the merged list down."""

    def __init__(
        self,
        ctx: NodeContext,
        tasks: list[_GatherTask],
        merge: Callable[[list[Item]], list[Item]],
    ) -> None:
        super().__init__(ctx)
        self._tasks = {t.key: t for t in tasks}
        self._merge = merge
        self._queues: dict[int, deque[Message]] = {}

    def _send(self, u: int, msg: Message) -> None:
        self._queues.setdefault(u, deque()).append(msg)

    def _collect(self, task: _GatherTask, item: Item) -> None:
        if item in task.seen:
            return
        task.seen.add(item)
        if task.parent is not None:
            self._send(task.parent, (task.key, _UP) + item)

    def _maybe_close_up(self, task: _GatherTask) -> None:
        if task.up_done or task.waiting:
            return
        task.up_done = True
        if task.parent is not None:
            self._send(task.parent, (task.key, _UP_END))
            return
        task.result = self._merge(sorted(task.seen))
        for c in task.children:
            for item in task.result:
                self._send(c, (task.key, _DOWN) + item)
            self._send(c, (task.key, _DOWN_END))
        task.down_done = True

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        if rnd == 1:
            for task in self._tasks.values():
                for item in task.own:
                    self._collect(task, item)
                self._maybe_close_up(task)
        for sender, msg in inbox.items():
            task = self._tasks[msg[0]]
            tag, item = msg[1], tuple(msg[2:])
            if tag == _UP:
                self._collect(task, item)
            elif tag == _UP_END:
                task.waiting.discard(sender)
                self._maybe_close_up(task)
            elif tag == _DOWN:
                task.result.append(item)
                for c in task.children:
                    self._send(c, (task.key, _DOWN) + item)
            else:
                task.down_done = True
                for c in task.children:
                    self._send(c, (task.key, _DOWN_END))
        out = {u: q.popleft() for u, q in self._queues.items() if q}
        idle = not any(self._queues.values())
        if idle and all(t.down_done for t in self._tasks.values()):
            self.halt()
        self.sleeping = idle
        return out

    @property
    def output(self) -> dict[int, list[Item]]:
        return {k: t.result for k, t in self._tasks.items()}


def _dedupe(items: list[Item]) -> list[Item]:
    return items


def gather_broadcast(
    network: Network,
    scope: TreeScope,
    items: Callable[[int, int], Iterable[Item]],
    merge: Callable[[list[Item]], list[Item]] = _dedupe,
    phase: str = "gather",
) -> dict[tuple[int, int], list[Item]]:
    """Collect item lists at each key root and broadcast the merged list.

    Duplicate items are forwarded once. The root applies `merge` to the
    sorted distinct items and every vertex of the key receives the result.

    Args:
        network: the network to run on
        scope: keyed trees; each key must be a single tree
        items: (vertex, key) -> items the vertex contributes
        merge: final processing at the root
        phase: name of the phase in the metrics

    Returns:
        (vertex, key) -> merged list
    """
    plan: list[list[_GatherTask]] = [[] for _ in range(network.n)]
    for key in scope.keys:
        for v in scope.vertices(key):
            plan[v].append(
                _GatherTask(key, scope.parent(key, v), scope.children(key, v), items(v, key))
            )
    outputs = network.run(phase, lambda ctx: GatherProgram(ctx, plan[ctx.vertex], merge))
    return {(v, k): lst for v, out in outputs.items() for k, lst in out.items()}


MORE, LAST, END = range(3)
"""frame kinds of chunked items"""


class ExchangeProgram(NodeProgram):
    """Sends each neighbour its item list, chunked to the budget."""

    def __init__(self, ctx: NodeContext, payload: Mapping[int, list[Item]], budget: int, bits: int):
        super().__init__(ctx)
        self._queues: dict[int, deque[Message]] = {}
        for u in ctx.neighbours:
            q: deque[Message] = deque()
            for item in payload.get(u, []):
                q.extend(chunk_item(item, budget, bits))
            q.append((END,))
            self._queues[u] = q
        self._buffers: dict[int, list[int]] = {}
        self._received: dict[int, list[Item]] = {u: [] for u in ctx.neighbours}
        self._open = set(ctx.neighbours)

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        for sender, msg in inbox.items():
            if msg[0] == END:
                self._open.discard(sender)
                continue
            buf = self._buffers.setdefault(sender, [])
            buf.extend(msg[1:])
            if msg[0] == LAST:
                self._received[sender].append(tuple(buf))
                buf.clear()
        out = {u: q.popleft() for u, q in self._queues.items() if q}
        idle = not any(self._queues.values())
        if idle and not self._open:
            self.halt()
        self.sleeping = idle
        return out

    @property
    def output(self) -> dict[int, list[Item]]:
        return self._received


def chunk_item(item: Item, budget: int, bits: int) -> list[Message]:
    """Frames of at most `budget` words carrying `item`; the last is tagged LAST."""
    out: list[Message] = []
    cur: list[int] = []
    used = 1
    for x in item:
        w = message_words((x,), bits)
        if cur and used + w > budget:
            out.append((MORE,) + tuple(cur))
            cur, used = [], 1
        cur.append(x)
        used += w
    out.append((LAST,) + tuple(cur))
    return out


def exchange(
    network: Network,
    payloads: Callable[[int], Mapping[int, list[Item]]],
    phase: str = "exchange",
) -> dict[int, dict[int, list[Item]]]:
    """Every vertex sends each neighbour a list of items.

    Args:
        network: the network to run on
        payloads: vertex -> (neighbour -> items to send it)
        phase: name of the phase in the metrics

    Returns:
        vertex -> (neighbour -> items received from it)
    """
    budget, bits = network.budget_words, network.word_bits
    return network.run(
        phase, lambda ctx: ExchangeProgram(ctx, payloads(ctx.vertex), budget, bits)
    )
