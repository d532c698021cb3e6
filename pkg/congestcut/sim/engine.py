"""Round-synchronous CONGEST execution engine.

A phase runs one `NodeProgram` per vertex in lockstep rounds. Messages sent
in round r are delivered in the inbox of round r + 1; each directed edge
carries at most one message per round, of at most `c_msg` words of
ceil(log2(n + 1)) bits. A halted program is never invoked again and messages
addressed to it are dropped. The phase ends after the first round at whose
end every program has halted.

A `Network` keeps per-vertex state slots across phases. Slots are the only
place where a program may keep knowledge between phases; each program sees
only its own vertex's slots.
"""

import json
import logging
import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any

import numpy as np

from congestcut.config import SimConfig
from congestcut.exceptions import (
    BudgetExceeded,
    CongestCutException,
    IllegalInjection,
    RoundLimit,
)
from congestcut.graph.weighted import WeightedGraph
from congestcut.mathutils import log_words, word_bits
from congestcut.sim.metrics import OracleStep, SimMetrics

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

TRACE_ENV = "CONGESTCUT_TRACE"
"""environment variable naming the JSON-lines trace file"""

Message = tuple[int, ...]


def message_words(msg: Message, bits: int) -> int:
    """Words occupied by a message; an empty message still takes one word.

    >>> message_words((1, 2, 300), 4)
    5
    """
    if not msg:
        return 1
    return sum(log_words(x, bits) for x in msg)


@dataclass
class NodeContext:
    """Local knowledge handed to a program."""

    vertex: int
    neighbours: Mapping[int, int]
    """neighbour -> edge weight"""

    slots: dict[str, Any]
    """this vertex's persistent state"""

    rng: np.random.Generator
    """this vertex's private random stream"""


class NodeProgram:
    """Per-vertex state machine.

    Subclasses implement `on_round`, returning the outbox (neighbour ->
    message). A program that sets `sleeping` is only invoked in rounds where
    its inbox is not empty.
    """

    def __init__(self, ctx: NodeContext) -> None:
        self.ctx = ctx
        self.halted = False
        self.sleeping = False

    @property
    def vertex(self) -> int:
        return self.ctx.vertex

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        raise NotImplementedError

    def halt(self) -> None:
        self.halted = True

    @property
    def output(self) -> Any:
        """Local output record, collected when the phase ends."""
        return None


class EchoProgram(NodeProgram):
    """Sends its own id to every neighbour and halts."""

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        self.halt()
        return {u: (self.vertex,) for u in self.ctx.neighbours}


ProgramFactory = Callable[[NodeContext], NodeProgram]


class Network:
    """A graph with per-vertex slots, random streams and a metrics ledger."""

    def __init__(self, graph: WeightedGraph, config: SimConfig | None = None) -> None:
        self._graph = graph
        self._config = config or SimConfig()
        self._bits = word_bits(graph.n)
        seeds = np.random.SeedSequence(self._config.seed).spawn(graph.n)
        self._rngs = [np.random.default_rng(s) for s in seeds]
        self._slots: list[dict[str, Any]] = [{} for _ in range(graph.n)]
        self._neighbours = [
            MappingProxyType(dict(graph.neighbours(v))) for v in range(graph.n)
        ]
        self._running = False
        self.metrics = SimMetrics(budget_bits=self._config.c_msg * self._bits)
        self._trace_path = os.environ.get(TRACE_ENV)

    @property
    def graph(self) -> WeightedGraph:
        return self._graph

    @property
    def n(self) -> int:
        return self._graph.n

    @property
    def config(self) -> SimConfig:
        return self._config

    @property
    def word_bits(self) -> int:
        return self._bits

    @property
    def budget_words(self) -> int:
        return self._config.c_msg

    def slots(self, v: int) -> dict[str, Any]:
        """Persistent state of vertex v."""
        return self._slots[v]

    def rng(self, v: int) -> np.random.Generator:
        return self._rngs[v]

    def inject_oracle(
        self,
        name: str,
        compute: Callable[[], Mapping[int, Mapping[str, Any]]],
        charge: int,
    ) -> None:
        """Run a centrally computed step and write its result into node slots.

        Args:
            name: step name recorded in the ledger
            compute: returns vertex -> {slot name: value}
            charge: analytic round cost of the distributed equivalent

        Raises:
            IllegalInjection: called while a phase is executing.
        """
        if self._running:
            raise IllegalInjection(f"oracle step '{name}' injected during a round")
        for v, values in compute().items():
            self._slots[v].update(values)
        self.metrics.oracle_steps.append(OracleStep(name, charge))
        LOGGER.debug("oracle step %s charged %d rounds", name, charge)

    def run(self, phase: str, factory: ProgramFactory) -> dict[int, Any]:
        """Execute one phase until every program halts.

        Args:
            phase: name recorded in the metrics and the trace
            factory: builds the program of each vertex from its context

        Returns:
            vertex -> program output

        Raises:
            BudgetExceeded: a message above the per-edge budget.
            RoundLimit: the phase did not finish within `max_rounds`.
        """
        n = self._graph.n
        programs = [
            factory(NodeContext(v, self._neighbours[v], self._slots[v], self._rngs[v]))
            for v in range(n)
        ]
        inboxes: list[dict[int, Message]] = [{} for _ in range(n)]
        rnd = 0
        last_send = 0
        messages = 0
        max_bits = 0
        self._running = True
        try:
            while not all(p.halted for p in programs):
                rnd += 1
                if rnd > self._config.max_rounds:
                    raise RoundLimit(
                        f"phase '{phase}' exceeded {self._config.max_rounds} rounds"
                    )
                outgoing: list[tuple[int, int, Message]] = []
                edge_bits: dict[str, int] = {}
                for v, prog in enumerate(programs):
                    if prog.halted or (prog.sleeping and not inboxes[v]):
                        continue
                    out = prog.on_round(rnd, inboxes[v])
                    for u, msg in out.items():
                        bits = self._check(phase, v, u, msg)
                        max_bits = max(max_bits, bits)
                        outgoing.append((v, u, msg))
                        if self._trace_path:
                            edge_bits[f"{v}>{u}"] = bits
                inboxes = [{} for _ in range(n)]
                for v, u, msg in outgoing:
                    if not programs[u].halted:
                        inboxes[u][v] = msg
                if outgoing:
                    last_send = rnd
                    messages += len(outgoing)
                elif all(p.halted or p.sleeping for p in programs) and not all(
                    p.halted for p in programs
                ):
                    raise RoundLimit(f"phase '{phase}' is waiting on no message")
                if self._trace_path:
                    self._trace(phase, rnd, edge_bits)
        finally:
            self._running = False
        self.metrics.add_phase(phase, last_send, messages, max_bits)
        LOGGER.debug("phase %s: %d rounds, %d messages", phase, last_send, messages)
        return {v: p.output for v, p in enumerate(programs)}

    def _check(self, phase: str, v: int, u: int, msg: Message) -> int:
        if u not in self._neighbours[v]:
            raise CongestCutException(
                f"phase '{phase}': vertex {v} sent to non-neighbour {u}"
            )
        words = message_words(msg, self._bits)
        if words > self._config.c_msg:
            raise BudgetExceeded(
                f"phase '{phase}': {v}->{u} message of {words} words, "
                f"budget {self._config.c_msg}"
            )
        return words * self._bits

    def _trace(self, phase: str, rnd: int, edge_bits: dict[str, int]) -> None:
        record = {"phase": phase, "round": rnd, "edges": edge_bits}
        with open(self._trace_path, "a") as fh:  # type: ignore[arg-type]
            fh.write(json.dumps(record) + "\n")


def run(
    graph: WeightedGraph,
    programs: ProgramFactory,
    config: SimConfig | None = None,
    phase: str = "run",
) -> tuple[dict[int, Any], SimMetrics]:
    """Run a single phase on a fresh network.

    Args:
        graph: the communication network
        programs: builds each vertex's program from its local context
        config: engine parameters

    Returns:
        (vertex -> output, metrics of the run)
    """
    net = Network(graph, config)
    outputs = net.run(phase, programs)
    return outputs, net.metrics
