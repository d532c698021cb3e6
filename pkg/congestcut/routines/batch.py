"""Pipelined aggregate and broadcast computations over keyed scopes.

Every spec of a batch runs on every key of the scope at once. Each directed
edge forwards one item per round, lowest spec index first, so c specs over a
scope of depth d finish within d + c + O(1) rounds, and specs going in
opposite directions share rounds.

Directions:

* UP: each vertex combines its input with its children's values; a vertex
  sends `lift(v, acc)` to its parent. The result at every vertex is `acc`.
* DOWN: result(v) = combine(result(parent), input(v)); a root keeps its input.
* REVERSE: UP over the reoriented scope (rooted at each key's reverse root).
"""

import heapq
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

from congestcut.exceptions import CongestCutException
from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Message, Network, NodeContext, NodeProgram

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

Value = int | tuple[int, ...] | None


class Direction(StrEnum):
    UP = "up"
    DOWN = "down"
    REVERSE = "reverse"


def encode_value(value: Value) -> tuple[int, ...]:
    """Wire form of a value: a flag word followed by the integers.

    >>> encode_value(None), encode_value(7), encode_value((1, 2))
    ((2,), (0, 7), (1, 1, 2))
    """
    if value is None:
        return (2,)
    if isinstance(value, tuple):
        return (1,) + tuple(int(x) for x in value)
    return (0, int(value))


def decode_value(words: Sequence[int]) -> Value:
    flag = words[0]
    if flag == 2:
        return None
    if flag == 0:
        return words[1]
    return tuple(words[1:])


def min_opt(a: Value, b: Value) -> Value:
    """min() where None is the identity."""
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)  # type: ignore[type-var]


def max_opt(a: Value, b: Value) -> Value:
    """max() where None is the identity."""
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)  # type: ignore[type-var]


def add(a: int, b: int) -> int:
    return a + b


def keep_left(a: Value, b: Value) -> Value:
    """Left projection, the combine of a broadcast."""
    return a


@dataclass(frozen=True)
class AggregateSpec:
    """One computation of a batch."""

    direction: Direction
    combine: Callable[[Any, Any], Any]
    """associative and commutative for UP and REVERSE"""

    identity: Value
    """input of vertices the spec gives nothing to"""

    inputs: Callable[[int, int], Value] | None = None
    """(vertex, key) -> input; None gives every vertex the identity"""

    lift: Callable[[int, Any], Any] | None = None
    """(vertex, acc) -> value sent to the parent"""

    name: str = ""

    def input_of(self, v: int, key: int) -> Value:
        if self.inputs is None:
            return self.identity
        return self.inputs(v, key)

    @staticmethod
    def sum(inputs: Callable[[int, int], int], name: str = "sum") -> "AggregateSpec":
        return AggregateSpec(Direction.UP, add, 0, inputs, name=name)

    @staticmethod
    def reverse_sum(
        inputs: Callable[[int, int], int], name: str = "reverse-sum"
    ) -> "AggregateSpec":
        return AggregateSpec(Direction.REVERSE, add, 0, inputs, name=name)

    @staticmethod
    def minimum(inputs: Callable[[int, int], Value], name: str = "min") -> "AggregateSpec":
        return AggregateSpec(Direction.UP, min_opt, None, inputs, name=name)

    @staticmethod
    def broadcast(
        root_value: Callable[[int, int], Value], name: str = "broadcast"
    ) -> "AggregateSpec":
        """Broadcast the value each key root holds; other inputs are ignored."""
        return AggregateSpec(Direction.DOWN, keep_left, None, root_value, name=name)


class BatchResult:
    """Per-spec results, keyed by (vertex, scope key)."""

    def __init__(self, values: list[dict[tuple[int, int], Value]]) -> None:
        self._values = values

    def get(self, i: int, v: int, key: int = 0, default: Value = None) -> Value:
        return self._values[i].get((v, key), default)

    def spec(self, i: int) -> dict[tuple[int, int], Value]:
        return self._values[i]

    def __len__(self) -> int:
        return len(self._values)


@dataclass
class _Task:
    spec: int
    key: int
    up: bool
    parent: int | None
    children: list[int]
    value: Value
    pending: set[int]


class BatchProgram(NodeProgram):
    """Runs all tasks of one vertex."""

    def __init__(
        self, ctx: NodeContext, tasks: list[_Task], specs: Sequence[AggregateSpec]
    ) -> None:
        super().__init__(ctx)
        self._tasks = {(t.spec, t.key): t for t in tasks}
        self._specs = specs
        self._queues: dict[int, list[tuple[int, int, tuple[int, ...]]]] = {}
        self._results: dict[tuple[int, int], Value] = {}
        self._open = len(tasks)

    def _enqueue(self, u: int, task: _Task, value: Value) -> None:
        heapq.heappush(
            self._queues.setdefault(u, []), (task.spec, task.key, encode_value(value))
        )

    def _finish_up(self, task: _Task) -> None:
        self._results[(task.spec, task.key)] = task.value
        if task.parent is not None:
            lift = self._specs[task.spec].lift
            sent = lift(self.vertex, task.value) if lift else task.value
            self._enqueue(task.parent, task, sent)
        self._open -= 1

    def _finish_down(self, task: _Task) -> None:
        self._results[(task.spec, task.key)] = task.value
        for c in task.children:
            self._enqueue(c, task, task.value)
        self._open -= 1

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        if rnd == 1:
            for task in self._tasks.values():
                if task.up and not task.pending:
                    self._finish_up(task)
                elif not task.up and task.parent is None:
                    self._finish_down(task)
        for sender, msg in inbox.items():
            i, key = msg[0], msg[1]
            value = decode_value(msg[2:])
            task = self._tasks[(i, key)]
            combine = self._specs[i].combine
            if task.up:
                task.value = combine(task.value, value)
                task.pending.discard(sender)
                if not task.pending:
                    self._finish_up(task)
            else:
                task.value = combine(value, task.value)
                self._finish_down(task)
        out: dict[int, Message] = {}
        for u, queue in self._queues.items():
            if queue:
                i, key, words = heapq.heappop(queue)
                out[u] = (i, key) + words
        idle = not any(self._queues.values())
        if self._open == 0 and idle:
            self.halt()
        self.sleeping = idle
        return out

    @property
    def output(self) -> dict[tuple[int, int], Value]:
        return self._results


def _plan(
    network: Network, scope: TreeScope, specs: Sequence[AggregateSpec]
) -> list[list[_Task]]:
    tasks: list[list[_Task]] = [[] for _ in range(network.n)]
    oriented: dict[bool, TreeScope] = {False: scope}
    for i, spec in enumerate(specs):
        rev = spec.direction is Direction.REVERSE
        if rev and True not in oriented:
            oriented[True] = scope.reoriented()
        sc = oriented[rev]
        up = spec.direction is not Direction.DOWN
        for key in sc.keys:
            for v in sc.vertices(key):
                children = sc.children(key, v)
                tasks[v].append(
                    _Task(
                        i,
                        key,
                        up,
                        sc.parent(key, v),
                        children,
                        spec.input_of(v, key),
                        set(children) if up else set(),
                    )
                )
    return tasks


def pipelined_batch(
    network: Network,
    scope: TreeScope,
    specs: Sequence[AggregateSpec],
    phase: str = "batch",
) -> BatchResult:
    """Run several aggregate/broadcast computations in one phase.

    Args:
        network: the network to run on
        scope: keyed forests the specs run over
        specs: the computations, in priority order
        phase: name of the phase in the metrics

    Returns:
        per-spec results at every (vertex, key) of the scope
    """
    if not specs:
        return BatchResult([])
    plan = _plan(network, scope, specs)
    outputs = network.run(phase, lambda ctx: BatchProgram(ctx, plan[ctx.vertex], specs))
    values: list[dict[tuple[int, int], Value]] = [{} for _ in specs]
    for v, out in outputs.items():
        for (i, key), value in out.items():
            values[i][(v, key)] = value
    for i, spec in enumerate(specs):
        expected = sum(len(scope.vertices(k)) for k in scope.keys)
        if len(values[i]) != expected:
            raise CongestCutException(
                f"batch '{phase}' spec {spec.name or i}: {len(values[i])} of "
                f"{expected} results"
            )
    return BatchResult(values)
