"""Command line of the harness: gen, run, verify and scale.

Exit status is 0 on success, 1 when an oracle disagrees and 2 when a run
breaks one of the library's contracts.
"""

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from congestcut.bench.experiment import (
    ExperimentSpec,
    disagreements,
    is_decreasing_per_vertex,
    run_experiment,
    scale_report,
    write_csv,
    write_json,
)
from congestcut.bench.generators import generate
from congestcut.bench.oracles import stoer_wagner
from congestcut.config import PipelineConfig
from congestcut.driver.mincut import central_cut_edges, min_cut
from congestcut.exceptions import CongestCutException
from congestcut.graph.weighted import read_graph, write_graph

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", type=Path, help="experiment spec (JSON)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--seed", type=int, help="run this seed only")
    common.add_argument("--budget-words", type=int, help="per-edge message budget in words")
    common.add_argument("--trees-k", type=int, help="number of packed trees")
    common.add_argument("--max-rounds", type=int, help="round limit of every phase")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="congestcut", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="write the spec's graphs")
    sub.add_parser("run", parents=[common], help="run a spec, write report.csv and report.json")
    verify = sub.add_parser("verify", parents=[common], help="check one graph or a spec")
    verify.add_argument("--graph", type=Path, help="graph file to verify")
    sub.add_parser("scale", parents=[common], help="run a spec, fit the scaling constant")
    return parser


def _spec(args: argparse.Namespace) -> ExperimentSpec:
    if args.spec is None:
        raise SystemExit(f"{args.command}: --spec is required")
    spec = ExperimentSpec.load(args.spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seeds=(args.seed,))
    return spec


def _config(args: argparse.Namespace, spec: ExperimentSpec | None) -> PipelineConfig:
    base = spec.pipeline_config() if spec is not None else PipelineConfig()
    return base.with_overrides(
        seed=args.seed,
        budget_words=args.budget_words,
        trees_k=args.trees_k,
        max_rounds=args.max_rounds,
    )


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _spec(args)
    args.out.mkdir(parents=True, exist_ok=True)
    for seed, n in spec.cases():
        graph = generate(spec.generator, n, spec.weights, seed, spec.p, spec.path)
        write_graph(graph, args.out / f"graph_{seed}_{graph.n}.txt")
    LOGGER.info("%d graphs written to %s", len(spec.cases()), args.out)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    spec = _spec(args)
    rows = run_experiment(spec, _config(args, spec))
    args.out.mkdir(parents=True, exist_ok=True)
    write_csv(rows, args.out / "report.csv")
    write_json(rows, args.out / "report.json")
    bad = disagreements(rows)
    for r in bad:
        LOGGER.warning("disagreement at seed %d (n=%d)", r.seed, r.n)
    return 1 if bad else 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.graph is None:
        spec = _spec(args)
        return 1 if disagreements(run_experiment(spec, _config(args, spec))) else 0
    graph = read_graph(args.graph)
    result = min_cut(graph, _config(args, None))
    expected, _ = stoer_wagner(graph)
    marked = central_cut_edges(graph, result.tree, result.candidate)
    record = result.to_dict() | {"stoer_wagner": expected}
    print(json.dumps(record, indent=2))
    ok = result.value == expected and marked == result.cut_edges
    if not ok:
        LOGGER.warning("verify failed: pipeline %d, Stoer-Wagner %d", result.value, expected)
    return 0 if ok else 1


def cmd_scale(args: argparse.Namespace) -> int:
    spec = _spec(args)
    rows = run_experiment(spec, _config(args, spec))
    scale, c = scale_report(rows)
    args.out.mkdir(parents=True, exist_ok=True)
    write_csv(rows, args.out / "scale_rows.csv")
    with open(args.out / "scale.csv", "w", encoding="utf-8") as f:
        f.write("n,runs,median_rounds,median_diameter,ratio\n")
        for s in scale:
            f.write(f"{s.n},{s.runs},{s.median_rounds},{s.median_diameter},{s.ratio:.6f}\n")
    print(f"C = {c:.6f}")
    if not is_decreasing_per_vertex(scale):
        LOGGER.warning("median rounds per vertex do not decrease with n")
    return 1 if disagreements(rows) else 0


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "verify": cmd_verify, "scale": cmd_scale}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except CongestCutException as ex:
        LOGGER.error("%s: %s", type(ex).__name__, ex)
        return 2


if __name__ == "__main__":
    sys.exit(main())
