from hypothesis import given, settings
from pytest import mark, raises

from congestcut.config import PipelineConfig, SimConfig
from congestcut.context import TreeContext
from congestcut.exceptions import CongestCutException, DecompositionInvariantViolation
from congestcut.graph.cover import cov_oracle
from congestcut.graph.weighted import RootedSpanningTree, WeightedGraph
from congestcut.mathutils import ceil_sqrt
from congestcut.routines.batch import (
    AggregateSpec,
    Direction,
    add,
    decode_value,
    encode_value,
    max_opt,
    min_opt,
    pipelined_batch,
)
from congestcut.routines.bfs import build_bfs_tree
from congestcut.routines.cover_routing import route_cover_aggregate
from congestcut.routines.gather import exchange, gather_broadcast
from congestcut.routines.highways import global_min, global_minima, global_sums, globalize
from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Network
from tests.strategies import cycle, decomposed, graphs_with_tree, layered, path_tree, prepared

PATH5 = WeightedGraph(5, [(i, i + 1, 1) for i in range(4)])
STAR = WeightedGraph(5, [(0, i, 1) for i in range(1, 5)] + [(1, 2, 1), (3, 4, 1)])


class TestValues:
    @mark.parametrize("value", [None, 0, -3, 7, (1, 2), ()])
    def test_wire_form(self, value):
        assert decode_value(encode_value(value)) == value

    def test_optional_extremes(self):
        assert min_opt(None, 4) == 4
        assert max_opt(3, None) == 3
        assert min_opt((1, 5), (1, 2)) == (1, 2)
        assert min_opt(None, None) is None


class TestTreeScope:
    def test_whole_tree(self):
        scope = TreeScope.whole_tree(path_tree(4))
        assert scope.keys == [0]
        assert scope.roots(0) == [0]
        assert scope.children(0, 1) == [2]
        assert scope.parent(0, 0) is None
        assert scope.memberships(3) == [0]

    def test_members_without_edges(self):
        scope = TreeScope({1: {2: 1}, 4: {}}, members={4: [3]})
        assert scope.keys == [1, 4]
        assert scope.vertices(4) == {3}
        assert scope.roots(4) == [3]
        assert scope.memberships(3) == [4]

    def test_reoriented(self):
        scope = TreeScope({0: {1: 0, 2: 1, 3: 1}}, reverse_roots={0: 2})
        flipped = scope.reoriented()
        assert flipped.roots(0) == [2]
        assert flipped.parent(0, 1) == 2
        assert flipped.parent(0, 0) == 1
        assert flipped.parent(0, 3) == 1

    def test_reverse_root_outside(self):
        scope = TreeScope({0: {1: 0}}, reverse_roots={0: 5})
        with raises(DecompositionInvariantViolation):
            scope.reoriented()

    def test_replicated_and_restricted(self):
        scope = TreeScope({0: {1: 0}, 1: {3: 2}})
        copies = scope.replicated({10: 0, 11: 0, 12: 1})
        assert copies.keys == [10, 11, 12]
        assert copies.edges(11) == {1: 0}
        assert copies.memberships(1) == [10, 11]
        assert scope.restricted([1]).keys == [1]


class TestPipelinedBatch:
    def test_subtree_sizes_on_a_path(self):
        net = Network(PATH5)
        scope = TreeScope.whole_tree(path_tree(5))
        res = pipelined_batch(net, scope, [AggregateSpec.sum(lambda v, k: 1)])
        assert [res.get(0, v) for v in range(5)] == [5, 4, 3, 2, 1]

    def test_several_specs(self):
        net = Network(PATH5)
        scope = TreeScope.whole_tree(path_tree(5))
        res = pipelined_batch(
            net,
            scope,
            [
                AggregateSpec.minimum(lambda v, k: 10 - v),
                AggregateSpec.broadcast(lambda v, k: 42 if v == 0 else None),
                AggregateSpec(Direction.DOWN, add, 0, lambda v, k: 1),
                AggregateSpec.reverse_sum(lambda v, k: v),
            ],
        )
        assert len(res) == 4
        assert [res.get(0, v) for v in range(5)] == [6, 6, 6, 6, 6]
        assert all(res.get(1, v) == 42 for v in range(5))
        assert [res.get(2, v) for v in range(5)] == [1, 2, 3, 4, 5]
        # no reverse root: the reverse sum runs on the tree as rooted
        assert [res.get(3, v) for v in range(5)] == [10, 10, 9, 7, 4]

    def test_reverse_sum(self):
        net = Network(PATH5)
        scope = TreeScope({0: path_tree(5).parents}, reverse_roots={0: 4})
        res = pipelined_batch(net, scope, [AggregateSpec.reverse_sum(lambda v, k: 1)])
        assert [res.get(0, v) for v in range(5)] == [1, 2, 3, 4, 5]

    def test_keys_are_independent(self):
        net = Network(PATH5)
        scope = TreeScope.whole_tree(path_tree(5)).replicated({0: 0, 1: 0})
        res = pipelined_batch(net, scope, [AggregateSpec.sum(lambda v, k: v * k + 1)])
        assert res.get(0, 0, key=0) == 5
        assert res.get(0, 0, key=1) == 15

    def test_lift(self):
        net = Network(PATH5)
        spec = AggregateSpec(Direction.UP, max_opt, None, lambda v, k: v, lambda v, acc: acc + 100)
        res = pipelined_batch(net, TreeScope.whole_tree(path_tree(5)), [spec])
        assert res.get(0, 4) == 4
        assert res.get(0, 3) == 104
        assert res.get(0, 0) == 404

    def test_rounds_pipeline(self):
        net = Network(PATH5)
        specs = [AggregateSpec.sum(lambda v, k, i=i: i) for i in range(6)]
        pipelined_batch(net, TreeScope.whole_tree(path_tree(5)), specs, "pipe")
        assert net.metrics.phases[-1].rounds <= 4 + 6 + 2

    def test_no_specs(self):
        assert len(pipelined_batch(Network(PATH5), TreeScope.whole_tree(path_tree(5)), [])) == 0


class TestBfs:
    def test_star_with_chords(self):
        net = Network(STAR)
        bfs = build_bfs_tree(net)
        assert bfs.root == 0
        assert bfs.height == 1
        assert net.slots(0)["bfs_children"] == [1, 2, 3, 4]
        assert net.slots(3)["bfs_parent"] == 0

    def test_cycle_height(self):
        bfs = build_bfs_tree(Network(cycle(7)))
        assert bfs.height == 3
        assert bfs.depth == [0, 1, 2, 3, 3, 2, 1]


class TestGather:
    def test_gather_broadcast(self):
        net = Network(PATH5)
        scope = TreeScope.whole_tree(path_tree(5))
        out = gather_broadcast(net, scope, lambda v, k: [(v % 2,), (v,)] if v > 2 else [])
        assert all(out[(v, 0)] == [(0,), (1,), (3,), (4,)] for v in range(5))

    def test_merge_at_root(self):
        net = Network(PATH5)
        scope = TreeScope.whole_tree(path_tree(5))
        out = gather_broadcast(net, scope, lambda v, k: [(v,)], merge=lambda items: items[-1:])
        assert out[(2, 0)] == [(4,)]

    def test_exchange_chunks_long_items(self):
        net = Network(WeightedGraph(2, [(0, 1, 1)]), SimConfig(c_msg=3))
        long_item = tuple(range(10))
        out = exchange(net, lambda v: {1: [long_item, (5,)]} if v == 0 else {})
        assert out[1][0] == [long_item, (5,)]
        assert out[0][1] == []


class TestHighwayRoutines:
    def test_global_reductions(self):
        net = Network(cycle(6))
        bfs = build_bfs_tree(net)
        assert global_min(net, bfs, lambda v: (v - 3) ** 2) == 0
        assert global_min(net, bfs, lambda v: None) is None
        assert global_minima(net, bfs, lambda v: {v % 2: v}, 3) == [0, 1, None]
        assert global_sums(net, bfs, lambda v: {0: v, 1: 1}, 2) == [15, 6]

    def test_globalize_to_slot(self):
        net = Network(cycle(5))
        bfs = build_bfs_tree(net)
        items = globalize(net, bfs, lambda v: [(v // 2,)], slot="seen")
        assert items == [(0,), (1,), (2,)]
        assert net.slots(4)["seen"] == items


def hub_path(n: int) -> tuple[WeightedGraph, RootedSpanningTree]:
    """Path tree 0 - 1 - ... - (n-1) plus non-tree edges from 0 to every vertex; diameter 2."""
    edges = [(i, i + 1, 1) for i in range(n - 1)] + [(0, i, 1) for i in range(2, n)]
    return WeightedGraph(n, edges), path_tree(n)


def rounds_of(ctx: TreeContext, phase: str) -> int:
    return sum(p.rounds for p in ctx.network.metrics.phases if p.name == phase)


def covers(ctx: TreeContext, e: int, u: int, y: int) -> bool:
    lbl = ctx.labels[e]
    return (lbl.pre <= ctx.labels[u].pre < lbl.pre + lbl.size) != (
        lbl.pre <= ctx.labels[y].pre < lbl.pre + lbl.size
    )


class TestCoverRouting:
    @given(graphs_with_tree(max_n=12))
    @settings(max_examples=60, deadline=None)
    def test_cov_matches_oracle(self, case):
        g, t = case
        ctx = decomposed(g, t, PipelineConfig())
        table = cov_oracle(t, g)
        assert ctx.cov == {e: table.cov(e) for e in t.tree_edges}
        assert all(ctx.slots(e)["cov"] == table.cov(e) for e in t.tree_edges)

    @given(graphs_with_tree(min_n=30, max_n=60))
    @settings(max_examples=15, deadline=None)
    def test_cov_matches_oracle_on_larger_trees(self, case):
        g, t = case
        ctx = decomposed(g, t, PipelineConfig())
        table = cov_oracle(t, g)
        assert ctx.cov == {e: table.cov(e) for e in t.tree_edges}

    def test_cov_needs_the_decomposition(self):
        ctx = prepared(cycle(4), path_tree(4))
        with raises(CongestCutException):
            ctx.compute_cov()

    def test_single_edge_needs_no_decomposition(self):
        ctx = prepared(WeightedGraph(2, [(0, 1, 7)]), path_tree(2))
        assert ctx.compute_cov() == {1: 7}

    @mark.parametrize("n", [256, 1024])
    def test_rounds_follow_fragments_not_tree_height(self, n):
        g, t = hub_path(n)
        ctx = decomposed(g, t, PipelineConfig())
        bound = 6 * ceil_sqrt(n)
        phases = (
            "cov-local", "cov-highway", "cov-global", "mark-closure", "fragment-propagate"
        )
        for phase in phases:
            assert rounds_of(ctx, phase) <= bound, phase
        assert ctx.cov == {v: 1 + n - max(v, 2) for v in range(1, n)}

    @given(graphs_with_tree(min_n=6, max_n=20))
    @settings(max_examples=25, deadline=None)
    def test_long_values_are_split_over_rounds(self, case):
        g, t = case
        ctx = decomposed(g, t, PipelineConfig())

        def values(v, y):
            lo, hi = min(v, y), max(v, y)
            return [(0, (lo, hi) + (lo,) * 40), (3, (hi, lo))]

        routed = route_cover_aggregate(ctx.network, values, min_opt, "long")
        non_tree = [(x.u, x.v) for x in g.edges if not t.is_tree_edge(x.u, x.v)]
        for e in t.tree_edges:
            mine = [(u, y) for u, y in non_tree if covers(ctx, e, u, y)]
            expected = {}
            if mine:
                lo, hi = min(mine)
                expected = {0: (lo, hi) + (lo,) * 40, 3: min((y, u) for u, y in mine)}
            assert routed[e] == expected
        assert ctx.network.metrics.max_bits_per_edge_round <= ctx.network.metrics.budget_bits

    def test_tables_are_per_vertex(self):
        ctx = layered(*hub_path(40))
        a, b = ctx.slots(0), ctx.slots(39)
        assert a["skeleton"] is not b["skeleton"]
        assert a["skeleton"].fragments == b["skeleton"].fragments
        assert a["highway_extremes"] is not b["highway_extremes"]
        assert a["highway_extremes"] == b["highway_extremes"]
        assert a["min_cov_edges"] is not b["min_cov_edges"]
        assert a["min_cov_edges"] == b["min_cov_edges"]

    def test_labels_exchanged(self):
        g = cycle(4)
        ctx = TreeContext(g, RootedSpanningTree(0, {1: 0, 2: 1, 3: 2}), PipelineConfig())
        ctx.prepare()
        assert ctx.nbr_label(0, 3) == ctx.labels[3]
        assert ctx.non_tree(0) == [(3, 1)]
        assert ctx.network.metrics.rounds_charged > 0
