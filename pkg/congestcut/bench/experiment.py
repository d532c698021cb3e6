"""Experiment harness: run the min-cut pipeline over seeded graphs against the oracles.

An experiment spec is a JSON object::

    {"generator": "erdos-renyi", "n": [8, 20], "weights": [1, 16],
     "seeds": [0, 1, 2], "p": 0.3, "config": {"interest": {"mode": "exact"}}}

Optional keys: `sizes` (explicit vertex counts, each run with every seed,
instead of one size per seed drawn from `n`) and `path` (graph file of the
`file` generator). Every report row is a pure function of (spec, seed).
"""

import csv
import json
import logging
import math
import statistics
from collections import namedtuple
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np

from congestcut.bench.generators import Generator, generate
from congestcut.bench.oracles import brute_force_2respecting, stoer_wagner
from congestcut.config import PipelineConfig
from congestcut.driver.mincut import min_cut
from congestcut.exceptions import ConfigError

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

COLUMNS = (
    "seed",
    "generator",
    "n",
    "m",
    "value",
    "oracle_2resp",
    "stoer_wagner",
    "agree_2resp",
    "agree_mincut",
    "rounds_pure",
    "rounds_charged",
    "max_bits",
    "fragments",
    "layers",
    "max_intpot",
)

ReportRow = namedtuple("ReportRow", COLUMNS + ("diameter",))
ReportRow.__doc__ = """One graph of an experiment.

Oracle columns are None when the graph is above the oracle cap; the
agreement flags are then None as well. `diameter` is kept for the scaling
fit and is not written to the CSV.
"""

ScaleRow = namedtuple("ScaleRow", "n runs median_rounds median_diameter ratio")
ScaleRow.__doc__ = """Median pure rounds at one size.

Args:
    n: number of vertices.
    runs: rows at this size.
    median_rounds: median pure rounds.
    median_diameter: median hop diameter.
    ratio: median_rounds / ((sqrt(n) + D) log2^3 n).
"""


@dataclass(frozen=True)
class ExperimentSpec:
    """What to generate and how to run it."""

    generator: Generator
    n: tuple[int, int] = (8, 20)
    weights: tuple[int, int] = (1, 16)
    seeds: tuple[int, ...] = ()
    p: float = 0.2
    """edge density of the random generators"""

    sizes: tuple[int, ...] = ()
    path: str | None = None
    config: dict[str, Any] = field(default_factory=dict)
    """nested `PipelineConfig` overrides"""

    @staticmethod
    def from_mapping(values: dict[str, Any]) -> "ExperimentSpec":
        """Build from a parsed JSON object.

        Raises:
            ConfigError: unknown key or generator.
        """
        known = {"generator", "n", "weights", "seeds", "p", "sizes", "path", "config"}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown experiment key(s) {sorted(unknown)}")
        try:
            gen = Generator(values.get("generator", Generator.ERDOS_RENYI))
        except ValueError as ex:
            raise ConfigError(f"unknown generator {values.get('generator')!r}") from ex
        lo, hi = values.get("n", (8, 20))
        wlo, whi = values.get("weights", (1, 16))
        if lo > hi or wlo > whi or wlo < 1:
            raise ConfigError(f"empty range in n={lo, hi} or weights={wlo, whi}")
        return ExperimentSpec(
            gen,
            (int(lo), int(hi)),
            (int(wlo), int(whi)),
            tuple(int(s) for s in values.get("seeds", ())),
            float(values.get("p", 0.2)),
            tuple(int(s) for s in values.get("sizes", ())),
            values.get("path"),
            dict(values.get("config", {})),
        )

    @staticmethod
    def load(path: Path | str) -> "ExperimentSpec":
        with open(path, encoding="utf-8") as f:
            return ExperimentSpec.from_mapping(json.load(f))

    def pipeline_config(self) -> PipelineConfig:
        return PipelineConfig.from_mapping(self.config)

    def cases(self) -> list[tuple[int, int]]:
        """(seed, n) of every row, in report order."""
        if self.sizes:
            return [(s, n) for n in self.sizes for s in self.seeds]
        lo, hi = self.n
        return [(s, int(np.random.default_rng([s, 1]).integers(lo, hi + 1))) for s in self.seeds]


def run_case(spec: ExperimentSpec, seed: int, n: int, config: PipelineConfig) -> ReportRow:
    """Generate one graph, run the pipeline and the oracles on it."""
    graph = generate(spec.generator, n, spec.weights, seed, spec.p, spec.path)
    cfg = config.with_overrides(seed=seed)
    result = min_cut(graph, cfg)
    oracle = sw = agree_2 = agree_mc = None
    if graph.n <= cfg.bench.oracle_cap:
        oracle = brute_force_2respecting(graph, result.tree, cfg.bench.oracle_cap).value
        sw, _ = stoer_wagner(graph)
        agree_2 = oracle == result.value
        agree_mc = sw == result.value
        if not agree_2:
            LOGGER.warning(
                "seed %d: pipeline %d, 2-respecting oracle %d", seed, result.value, oracle
            )
        if not agree_mc:
            LOGGER.warning("seed %d: pipeline %d, Stoer-Wagner %d", seed, result.value, sw)
    else:
        LOGGER.warning("seed %d: n=%d above the oracle cap, oracles skipped", seed, graph.n)
    row = ReportRow(
        seed,
        str(spec.generator),
        graph.n,
        graph.m,
        result.value,
        oracle,
        sw,
        agree_2,
        agree_mc,
        result.metrics.rounds_pure,
        result.metrics.rounds_charged,
        result.metrics.max_bits_per_edge_round,
        result.stats.get("fragments", 0),
        result.stats.get("layers", 0),
        result.stats.get("max_intpot", 0),
        nx.diameter(graph.to_networkx()) if graph.n > 1 else 0,
    )
    LOGGER.info("row %s", row._asdict())
    return row


def run_experiment(
    spec: ExperimentSpec, config: PipelineConfig | None = None
) -> list[ReportRow]:
    """Every row of the experiment; graphs above the simulation cap are skipped.

    Args:
        spec: the experiment
        config: run parameters, the spec's overrides by default
    """
    config = config or spec.pipeline_config()
    rows: list[ReportRow] = []
    for seed, n in spec.cases():
        if n > config.bench.sim_cap:
            LOGGER.warning("seed %d: n=%d above the simulation cap, skipped", seed, n)
            continue
        rows.append(run_case(spec, seed, n, config))
    return rows


def disagreements(rows: Iterable[ReportRow]) -> list[ReportRow]:
    """Rows where an oracle ran and disagreed."""
    return [r for r in rows if r.agree_2resp is False or r.agree_mincut is False]


def write_csv(rows: Iterable[ReportRow], path: Path | str) -> None:
    """Write the fixed columns, header line first; absent values stay empty."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(["" if x is None else x for x in row[: len(COLUMNS)]])


def write_json(rows: Iterable[ReportRow], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([{c: getattr(r, c) for c in COLUMNS} for r in rows], f, indent=2)


def scale_report(rows: Sequence[ReportRow]) -> tuple[list[ScaleRow], float]:
    """Median pure rounds per size and the fitted constant C.

    C is the largest ratio rounds / ((sqrt(n) + D) log2^3 n) over all rows.

    Returns:
        rows by ascending n, and C (0.0 without rows)
    """

    def ratio(rounds: float, n: int, d: float) -> float:
        return rounds / ((math.sqrt(n) + d) * max(1.0, math.log2(n)) ** 3)

    by_n: dict[int, list[ReportRow]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(r)
    out: list[ScaleRow] = []
    for n, group in sorted(by_n.items()):
        rounds = statistics.median(r.rounds_pure for r in group)
        d = statistics.median(r.diameter for r in group)
        out.append(ScaleRow(n, len(group), rounds, d, ratio(rounds, n, d)))
    c = max((ratio(r.rounds_pure, r.n, r.diameter) for r in rows), default=0.0)
    return out, c


def is_decreasing_per_vertex(scale: Sequence[ScaleRow]) -> bool:
    """True if median rounds / n strictly decreases with n."""
    per_vertex = [s.median_rounds / s.n for s in scale]
    return all(a > b for a, b in zip(per_vertex, per_vertex[1:]))
