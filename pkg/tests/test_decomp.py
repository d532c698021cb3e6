import json

from hypothesis import given, settings
from pytest import mark, raises

from congestcut.config import DecompositionConfig
from congestcut.decomp.fragments import (
    decomposition_to_json,
    fragment_decompose,
    initial_components,
    skeleton_to_dot,
)
from congestcut.decomp.layering import build_layering, layer_rule, maximal_bough_paths
from congestcut.exceptions import DecompositionInvariantViolation
from congestcut.graph.weighted import WeightedGraph
from congestcut.mathutils import ceil_log2, ceil_sqrt
from tests.strategies import (
    binary_tree,
    graphs_with_tree,
    large_graphs_with_tree,
    path_tree,
    prepared,
)


class TestInitialComponents:
    def test_path(self):
        roots = initial_components(path_tree(16))
        assert sorted(set(roots.values())) == [0, 4, 8, 12]
        assert roots[11] == 8

    def test_small_tree_is_one_component(self):
        assert set(initial_components(path_tree(3)).values()) == {0}


class TestFragments:
    @given(graphs_with_tree(min_n=3, max_n=30, max_w=4))
    @settings(max_examples=40, deadline=None)
    def test_invariants(self, case):
        g, t = case
        ctx = prepared(g, t)
        decomp = fragment_decompose(ctx)
        assert sorted(decomp.edge_fragment) == t.tree_edges
        assert t.root in decomp.marked
        for f in decomp.fragments.values():
            assert f.fid in decomp.marked and f.root in decomp.marked
            assert t.parent(f.highway[0]) == f.root
            assert f.highway[-1] == f.fid
            for upper, lower in zip(f.highway, f.highway[1:]):
                assert t.parent(lower) == upper
            assert not (f.interior & decomp.marked)
        decomp.skeleton.validate()

    @given(large_graphs_with_tree())
    @settings(max_examples=4, deadline=None)
    def test_bounds_hold_on_large_trees(self, case):
        g, t = case
        decomp = fragment_decompose(prepared(g, t))
        config = DecompositionConfig()
        bound = config.c_f * ceil_sqrt(t.n)
        assert bound < t.n
        decomp.check_invariants(config)
        assert len(decomp) <= bound
        assert sorted(decomp.edge_fragment) == t.tree_edges
        for f in decomp.fragments.values():
            assert len(f.vertices) <= bound
            assert f.diameter(t) <= bound
            assert not (f.interior & decomp.marked)
        decomp.skeleton.validate()

    @mark.parametrize("n", [1024, 1500])
    def test_long_path_splits(self, n):
        g = WeightedGraph(n, [(i, i + 1, 1) for i in range(n - 1)] + [(0, n - 1, 1)])
        decomp = fragment_decompose(prepared(g, path_tree(n)))
        assert len(decomp) > 1
        assert max(len(f.vertices) for f in decomp.fragments.values()) <= 12 * ceil_sqrt(n)

    def test_component_boundaries_stay_inside_fragments(self):
        g = WeightedGraph(9, [(i, i + 1, 1) for i in range(8)])
        decomp = fragment_decompose(prepared(g, path_tree(9)))
        assert decomp.marked == {0, 2, 5, 8}
        assert sorted(len(f.vertices) for f in decomp.fragments.values()) == [3, 4, 4]
        assert all(len(f.highway) >= 2 for f in decomp.fragments.values())

    @given(graphs_with_tree(min_n=3, max_n=20, max_w=4))
    @settings(max_examples=25, deadline=None)
    def test_vertices_know_their_fragment(self, case):
        g, t = case
        ctx = prepared(g, t)
        decomp = fragment_decompose(ctx)
        for c in t.tree_edges:
            s = ctx.slots(c)
            assert s["fragment"] == decomp.edge_fragment[c]
            assert s["highway"] == decomp.is_highway(c)
        for v in range(t.n):
            assert ctx.slots(v)["home"] == decomp.home(v)
            for y, home in ctx.slots(v)["nbr_home"].items():
                assert home == decomp.home(y)

    def test_skeleton_chain_reaches_tree_root(self):
        g, t = binary_tree(31)
        decomp = fragment_decompose(prepared(g, t))
        sk = decomp.skeleton
        for fid in sk.fragments:
            top = sk.chain(fid)[-1]
            assert sk.root_of(top) == t.root
            assert all(sk.is_above(a, fid) for a in sk.chain(fid)[1:])

    def test_dumps(self):
        g, t = binary_tree(15)
        decomp = fragment_decompose(prepared(g, t))
        data = json.loads(decomposition_to_json(decomp))
        assert len(data["fragments"]) == len(decomp)
        assert sum(len(f["edges"]) for f in data["fragments"]) == 14
        dot = skeleton_to_dot(decomp)
        assert dot.startswith("digraph skeleton {")
        assert dot.count("->") == len(decomp)

    def test_tight_bound_is_reported(self):
        g, t = binary_tree(31)
        decomp = fragment_decompose(prepared(g, t))
        with raises(DecompositionInvariantViolation):
            decomp.check_invariants(DecompositionConfig(c_f=0))


class TestLayering:
    @mark.parametrize(
        "below, layer",
        [([], 1), ([1], 1), ([1, 1], 2), ([2, 1, 1], 2), ([2, 2, 1], 3), ([3, 1], 3)],
    )
    def test_layer_rule(self, below, layer):
        assert layer_rule(below) == layer

    @given(graphs_with_tree(min_n=3, max_n=30, max_w=4))
    @settings(max_examples=30, deadline=None)
    def test_depth_and_boughs(self, case):
        g, t = case
        ctx = prepared(g, t)
        decomp = fragment_decompose(ctx)
        layering = build_layering(ctx, decomp)
        assert layering.depth <= ceil_log2(t.n) + 1
        nonhighway = {c for f in decomp.fragments.values() for c in f.nonhighway}
        assert set(layering.nonhighway_layer) == nonhighway
        in_boughs = [c for b in layering.nh_boughs.values() for c in b.edges]
        assert sorted(in_boughs) == sorted(nonhighway)
        for b in layering.nh_boughs.values():
            assert all(layering.nonhighway_layer[c] == b.layer for c in b.edges)
            for upper, lower in zip(b.edges, b.edges[1:]):
                assert t.parent(lower) == upper
        assert set(layering.skeleton_layer) == set(decomp.fragments)
        assert sorted(layering.bough_of_fragment) == sorted(decomp.fragments)

    def test_binary_tree_layers(self):
        g, t = binary_tree(31)
        ctx = prepared(g, t)
        layering = build_layering(ctx, fragment_decompose(ctx))
        assert 1 <= layering.depth <= ceil_log2(31) + 1
        assert ctx.stats.layers == layering.depth
        total = sum(len(maximal_bough_paths(layering, i)) for i in range(1, layering.depth + 1))
        assert total == len(layering.nh_boughs) + len(layering.skeleton_boughs)
