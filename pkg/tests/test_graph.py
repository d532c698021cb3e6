from itertools import combinations
from math import floor, log2

from hypothesis import given, settings
from pytest import mark, raises

from congestcut.config import PipelineConfig
from congestcut.context import TreeContext
from congestcut.exceptions import InvalidGraph
from congestcut.graph.cover import (
    CutCandidate,
    CutKind,
    best_candidate,
    cov_oracle,
    crosses_cut,
    cut_value,
)
from congestcut.graph.lca import build_lca_labels, decode_label, encode_label, lca_from_labels
from congestcut.graph.weighted import (
    RootedSpanningTree,
    WeightedGraph,
    edge_key,
    read_graph,
    read_tree,
    write_graph,
    write_tree,
)
from tests.strategies import cycle, graphs_with_tree, path_tree, trees


def naive_lca(tree: RootedSpanningTree, u: int, v: int) -> int:
    up = {u} | {tree.parent(c) for c in tree.path_to_root(u)}
    while v not in up:
        v = tree.parent(v)  # type: ignore[assignment]
    return v


class TestWeightedGraph:
    def test_edges_are_canonical(self):
        g = WeightedGraph(3, [(2, 0, 5), (1, 0, 1)])
        assert [tuple(e) for e in g.edges] == [(0, 1, 1), (0, 2, 5)]
        assert g.weight(2, 0) == 5
        assert g.total_weight == 6

    @mark.parametrize(
        "n, edges",
        [
            (3, [(0, 0, 1)]),
            (3, [(0, 1, 1), (1, 0, 2)]),
            (3, [(0, 3, 1)]),
        ],
    )
    def test_rejects_malformed(self, n, edges):
        with raises(InvalidGraph):
            WeightedGraph(n, edges)

    def test_validate_disconnected(self):
        with raises(InvalidGraph):
            WeightedGraph(4, [(0, 1, 1), (2, 3, 1)]).validate()

    def test_validate_weight_cap(self):
        with raises(InvalidGraph):
            WeightedGraph(2, [(0, 1, 17)]).validate()

    def test_networkx_copy(self):
        g = cycle(5, 3)
        assert WeightedGraph.from_networkx(g.to_networkx()) == g

    def test_file_formats(self, tmp_path):
        g = cycle(4, 2)
        t = path_tree(4)
        write_graph(g, tmp_path / "g.txt")
        write_tree(t, tmp_path / "t.txt")
        assert read_graph(tmp_path / "g.txt") == g
        assert read_tree(tmp_path / "t.txt") == t

    def test_edge_count_mismatch(self, tmp_path):
        (tmp_path / "g.txt").write_text("3 3\n0 1 1\n1 2 1\n")
        with raises(InvalidGraph):
            read_graph(tmp_path / "g.txt")

    def test_edge_key(self):
        assert edge_key(5, 2) == (2, 5)


class TestRootedSpanningTree:
    def test_from_graph_edges(self):
        t = RootedSpanningTree.from_graph_edges([(0, 1), (1, 2), (1, 3)], 4, root=0)
        assert t.parent(1) == 0
        assert t.children(1) == [2, 3]
        assert t.tree_edges == [1, 2, 3]
        assert t.height == 2
        assert list(t.path_to_root(3)) == [3, 1]
        assert t.is_tree_edge(3, 1) and t.is_tree_edge(0, 1)
        assert not t.is_tree_edge(2, 3)

    def test_cycle_is_not_a_tree(self):
        with raises(InvalidGraph):
            RootedSpanningTree.from_graph_edges([(0, 1), (1, 2), (2, 0)], 4, root=0)

    def test_validate_against_graph(self):
        with raises(InvalidGraph):
            RootedSpanningTree(0, {1: 0, 2: 0}).validate(WeightedGraph(3, [(0, 1, 1), (1, 2, 1)]))

    def test_ancestry(self):
        t = path_tree(5)
        assert t.is_ancestor(1, 4)
        assert not t.is_ancestor(4, 1)
        assert sorted(t.subtree(2)) == [2, 3, 4]


class TestLcaLabels:
    @given(trees(max_n=60))
    @settings(max_examples=60, deadline=None)
    def test_lca_matches_naive(self, tree):
        labels = build_lca_labels(tree)
        for u, v in combinations(range(tree.n), 2):
            assert labels.lca(u, v) == naive_lca(tree, u, v)

    @given(trees(max_n=200))
    @settings(max_examples=40, deadline=None)
    def test_heavy_path_count(self, tree):
        labels = build_lca_labels(tree)
        bound = floor(log2(tree.n)) + 1
        assert all(len(labels[v].heads) <= bound for v in range(tree.n))

    @mark.parametrize("n", [15, 255, 4095])
    def test_label_words_are_logarithmic(self, n):
        tree = RootedSpanningTree(0, {v: (v - 1) // 2 for v in range(1, n)})
        labels = build_lca_labels(tree)
        assert labels.max_words() <= 4 + 2 * (floor(log2(n)) + 1)

    def test_depth_of_lca(self):
        t = RootedSpanningTree(0, {1: 0, 2: 1, 3: 1, 4: 0})
        labels = build_lca_labels(t)
        assert lca_from_labels(labels[2], labels[3])[1] == 1
        assert lca_from_labels(labels[2], labels[4])[1] == 0

    def test_wire_form(self):
        t = RootedSpanningTree(0, {1: 0, 2: 1, 3: 0})
        labels = build_lca_labels(t)
        words = encode_label(labels[2]) + encode_label(labels[3])
        first, pos = decode_label(words)
        second, end = decode_label(words, pos)
        assert (first, second) == (labels[2], labels[3])
        assert end == len(words)


class TestCover:
    def test_four_cycle(self):
        g = cycle(4)
        t = path_tree(4)
        table = cov_oracle(t, g)
        assert [table.cov(e) for e in t.tree_edges] == [2, 2, 2]
        assert table.pair(1, 3) == 1
        assert table.cut(1, 3) == 2

    def test_tree_only_graph(self):
        g = WeightedGraph(3, [(0, 1, 4), (1, 2, 7)])
        table = cov_oracle(path_tree(3), g)
        assert table.cov(1) == 4
        assert table.cut(1, 2) == 11

    @given(graphs_with_tree(max_n=10))
    @settings(max_examples=100, deadline=None)
    def test_cut_identity(self, case):
        g, t = case
        table = cov_oracle(t, g)
        for e in t.tree_edges:
            assert table.cut(e) == cut_value(g, t, (e,))
        for e, f in combinations(t.tree_edges, 2):
            assert table.cut(e, f) == cut_value(g, t, (e, f))

    @given(graphs_with_tree(max_n=10))
    @settings(max_examples=50, deadline=None)
    def test_crossing_edges_sum_to_value(self, case):
        g, t = case
        labels = build_lca_labels(t)
        table = cov_oracle(t, g)
        for e, f in combinations(t.tree_edges, 2):
            cand = CutCandidate.two(e, f, table.cut(e, f))
            crossing = sum(w for u, v, w in g.edges if crosses_cut(labels, (u, v), cand))
            assert crossing == cand.value


class TestCandidates:
    def test_two_with_equal_edges_is_empty(self):
        cand = CutCandidate.two(3, 3, 0)
        assert cand.kind is CutKind.TWO_RESPECTING
        assert cand.edges == (3, 3)
        assert cand.is_empty
        assert not CutCandidate.two(2, 3, 0).is_empty
        assert not CutCandidate.one(3, 0).is_empty

    def test_equal_edges_never_cross(self):
        g, t = cycle(6), path_tree(6)
        labels = build_lca_labels(t)
        for e in t.tree_edges:
            cand = CutCandidate.two(e, e, 0)
            assert not any(crosses_cut(labels, (u, v), cand) for u, v, _ in g.edges)

    def test_empty_candidate_is_not_recorded(self):
        ctx = TreeContext(cycle(4), path_tree(4), PipelineConfig())
        ctx.record(2, CutCandidate.two(2, 2, 0))
        assert ctx.slots(2).get("candidates") is None
        ctx.record(2, CutCandidate.two(1, 2, 4))
        assert ctx.slots(2)["candidates"] == CutCandidate.two(1, 2, 4)

    def test_edges_sorted(self):
        assert CutCandidate.two(7, 2, 1).edges == (2, 7)

    def test_best_candidate(self):
        a = CutCandidate.one(4, 3)
        b = CutCandidate.two(1, 2, 3)
        assert best_candidate(None, a, b) == b
        assert best_candidate(None) is None
