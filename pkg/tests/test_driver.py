import math

import numpy as np
from hypothesis import given, settings
from pytest import approx, mark

from congestcut.bench.oracles import brute_force_2respecting
from congestcut.config import DriverConfig, PipelineConfig
from congestcut.context import TreeContext
from congestcut.driver.mincut import (
    bfs_spanning_tree,
    central_cut_edges,
    min_cut,
    packing_charge,
)
from congestcut.driver.packing import (
    greedy_tree_packing,
    karger_sample,
    sampling_probability,
    trees_count,
)
from congestcut.driver.pipeline import min_2respecting
from congestcut.graph.cover import CutKind, cov_oracle
from congestcut.graph.weighted import WeightedGraph
from tests.strategies import (
    EXACT,
    binary_tree,
    chorded_path,
    cycle,
    dumbbell,
    graphs_with_tree,
    path_tree,
)

EXACT_CONFIG = PipelineConfig.from_mapping(EXACT)
SAMPLED_CONFIG = PipelineConfig.from_mapping(
    {"interest": {"mode": "sampled", "repetition_factor": 16, "retention_factor": 64}}
)
TRIANGLE = WeightedGraph(3, [(0, 1, 2), (1, 2, 3), (0, 2, 5)])


def wheel(n: int) -> WeightedGraph:
    """Hub 0 joined to a rim cycle 1..n-1, rim weights 3."""
    rim = [(i, i % (n - 1) + 1, 3) for i in range(1, n)]
    return WeightedGraph(n, rim + [(0, i, 1) for i in range(1, n)])


class TestPacking:
    @mark.parametrize("n, k, expected", [(16, None, 22), (2, None, 3), (256, None, 98), (16, 5, 5)])
    def test_trees_count(self, n, k, expected):
        assert trees_count(n, DriverConfig(trees_k=k)) == expected

    def test_sampling_probability(self):
        assert sampling_probability(16, 1, 12.0) == 1.0
        assert sampling_probability(16, 100, 1.0) == approx(math.log(16) ** 1.1 / 100)

    def test_karger_identity(self):
        g = cycle(5, 7)
        assert karger_sample(g, 1.0, np.random.default_rng(0)) == {
            (u, v): 7 for u, v, _ in g.edges
        }

    def test_karger_is_seeded(self):
        g = cycle(6, 16)
        a = karger_sample(g, 0.5, np.random.default_rng(4))
        b = karger_sample(g, 0.5, np.random.default_rng(4))
        assert a == b
        assert all(0 <= m <= 16 for m in a.values())

    def test_unit_triangle_balances_loads(self):
        packing = greedy_tree_packing(cycle(3), 3)
        assert len(packing) == 3
        assert sorted(packing.loads.values()) == [2, 2, 2]

    def test_tree_graph_packs_itself(self):
        g = WeightedGraph(5, [(i, i + 1, 1) for i in range(4)])
        assert all(t == path_tree(5) for t in greedy_tree_packing(g, 4).trees)

    def test_unsampled_edges_still_span(self):
        g = cycle(6)
        weights = {(u, v): 0 for u, v, _ in g.edges}
        weights[(0, 1)] = 1
        packing = greedy_tree_packing(g, 3, weights)
        assert all(len(t.tree_edges) == 5 for t in packing.trees)


class TestTwoRespecting:
    @given(graphs_with_tree(min_n=2, max_n=14, max_w=16))
    @settings(max_examples=60, deadline=None)
    def test_matches_exhaustive_search(self, case):
        g, t = case
        result = min_2respecting(g, t, EXACT_CONFIG)
        expected = brute_force_2respecting(g, t)
        assert result.candidate.value == expected.value
        assert cov_oracle(t, g).cut(*result.candidate.edges) == result.candidate.value
        assert result.cut_edges == central_cut_edges(g, t, result.candidate)

    @given(graphs_with_tree(min_n=3, max_n=12, max_w=16))
    @settings(max_examples=15, deadline=None)
    def test_sampled_mode_matches_exhaustive_search(self, case):
        g, t = case
        result = min_2respecting(g, t, SAMPLED_CONFIG)
        assert cov_oracle(t, g).cut(*result.candidate.edges) == result.candidate.value
        assert result.candidate.value == brute_force_2respecting(g, t).value

    @mark.parametrize(
        "graph, tree",
        [
            (cycle(40, 3), path_tree(40)),
            (chorded_path(48, 5), path_tree(48)),
        ],
        ids=["cycle", "chords"],
    )
    def test_sampled_mode_on_several_fragments(self, graph, tree):
        result = min_2respecting(graph, tree, SAMPLED_CONFIG)
        assert result.candidate.value == brute_force_2respecting(graph, tree).value
        assert result.stats.fragments > 1

    @mark.parametrize(
        "graph",
        [dumbbell(), cycle(12, 2), wheel(9), binary_tree(31)[0]],
        ids=["dumbbell", "cycle", "wheel", "binary"],
    )
    def test_every_recorded_candidate_is_a_cut(self, graph, mocker):
        record = mocker.spy(TreeContext, "record")
        tree = bfs_spanning_tree(graph)
        result = min_2respecting(graph, tree, EXACT_CONFIG)
        table = cov_oracle(tree, graph)
        assert record.call_count >= len(tree.tree_edges)
        for call in record.call_args_list:
            _, _, cand = call.args
            assert table.cut(*cand.edges) == cand.value
        assert result.candidate.value == brute_force_2respecting(graph, tree).value

    def test_needs_two_edges(self):
        g = cycle(4)
        result = min_2respecting(g, path_tree(4), EXACT_CONFIG)
        assert result.candidate.value == 2
        assert result.candidate.kind is CutKind.ONE_RESPECTING
        assert result.to_dict()["candidate"]["value"] == 2

    def test_single_edge_graph(self):
        g = WeightedGraph(2, [(0, 1, 9)])
        result = min_2respecting(g, path_tree(2), EXACT_CONFIG)
        assert result.candidate.value == 9
        assert result.cut_edges == {0: [1], 1: [0]}


class TestMinCut:
    @mark.parametrize(
        "graph, value",
        [(cycle(6), 2), (dumbbell(), 1), (wheel(8), 7), (TRIANGLE, 5), (cycle(3, 4), 8)],
    )
    def test_values(self, graph, value):
        assert min_cut(graph, EXACT_CONFIG).value == value

    def test_brute_force_below_the_cap(self):
        result = min_cut(TRIANGLE)
        assert result.tree_index == 0
        assert result.cut_edges[1] == [0, 2]
        assert result.metrics.rounds_charged == 0

    def test_trees_and_charges(self):
        config = EXACT_CONFIG.with_overrides(trees_k=2)
        result = min_cut(dumbbell(), config)
        assert result.trees == 2
        assert result.probability == 1.0
        steps = [s.name for s in result.metrics.oracle_steps]
        assert steps[:2] == ["min-cut-estimate", "tree-packing"]
        assert result.metrics.rounds_charged > result.metrics.rounds_pure > 0
        assert result.stats["fragments"] >= 1

    @mark.parametrize(
        "graph, charge",
        [(cycle(8), 21), (WeightedGraph(9, [(i, i + 1, 1) for i in range(8)]), 44)],
        ids=["cycle", "path"],
    )
    def test_packing_charge_uses_the_diameter(self, graph, charge):
        assert packing_charge(graph, 1) == charge
        assert packing_charge(graph, 3) == 3 * charge

    def test_record(self):
        result = min_cut(dumbbell(), EXACT_CONFIG.with_overrides(trees_k=1))
        record = result.to_dict()
        assert record["value"] == 1
        assert record["edges"] == [4]
        assert set(record) == {
            "value",
            "kind",
            "edges",
            "tree_index",
            "rounds_pure",
            "rounds_charged",
            "metrics",
        }
        assert result.cut_edges[3] == [4]
        assert result.cut_edges[0] == []
