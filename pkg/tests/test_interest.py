import json

import numpy as np
from hypothesis import given, settings
from pytest import mark, raises

from congestcut.config import PipelineConfig
from congestcut.decomp.skeleton import PathId
from congestcut.exceptions import InterestBoundExceeded
from congestcut.graph.cover import cov_oracle
from congestcut.graph.weighted import WeightedGraph
from congestcut.interest.paths import (
    Relation,
    Segment,
    build_interest,
    interest_segments,
    interest_to_json,
    nh_owner_fragments,
)
from congestcut.interest.sampling import (
    cover_class,
    covset_sizes,
    draw_sampled_ids,
    exact_bottoms,
    pick_outcomes,
    qualifying_count,
    repetitions,
    retained,
    sample_covset,
)
from tests.strategies import (
    binary_tree,
    cycle,
    decomposed,
    graphs_with_tree,
    layered,
    path_tree,
)

SAMPLED = PipelineConfig.from_mapping({"interest": {"mode": "sampled"}})


def qualifies(rng: np.random.Generator, on_path: int, off_path: int, n: int, keep: int) -> bool:
    """One sampling round of a tree edge whose covering units split on and off a path."""
    cov = on_path + off_path
    prob = 2.0 ** -cover_class(cov)
    reps = repetitions(n)
    off = draw_sampled_ids(rng, off_path, prob, reps, n**5)
    on = draw_sampled_ids(rng, on_path, prob, reps, n**5)
    routed = {r: (x,) for r, x in enumerate(on) if x is not None}
    others, hits = pick_outcomes(off, routed, keep)
    return len(hits) >= qualifying_count(others + len(hits), 3)


class TestSampling:
    @mark.parametrize(
        "n, factor, reps", [(64, 1, 36), (2, 1, 1), (1, 1, 1), (1000, 1, 100), (12, 3, 48)]
    )
    def test_repetitions(self, n, factor, reps):
        assert repetitions(n, factor) == reps

    @mark.parametrize("n, factor, keep", [(64, 4, 24), (2, 3, 3), (1, 2, 2)])
    def test_retained(self, n, factor, keep):
        assert retained(n, factor) == keep

    @mark.parametrize("cov, j", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (64, 6), (65, 7)])
    def test_cover_class(self, cov, j):
        assert cover_class(cov) == j

    @mark.parametrize("total, divisor, need", [(0, 3, 0), (1, 3, 1), (24, 3, 8), (25, 3, 9)])
    def test_qualifying_count(self, total, divisor, need):
        assert qualifying_count(total, divisor) == need

    def test_sampled_ids_in_range(self):
        ids = draw_sampled_ids(np.random.default_rng(1), 3, 1.0, 50, 1000)
        assert len(ids) == 50
        assert all(x is not None and 0 <= x < 1000 for x in ids)

    def test_nothing_sampled_at_tiny_probability(self):
        ids = draw_sampled_ids(np.random.default_rng(2), 5, 1e-15, 40, 1000)
        assert ids == [None] * 40

    def test_heavier_edges_draw_smaller_ids(self):
        rng = np.random.default_rng(7)
        light = draw_sampled_ids(rng, 1, 1.0, 400, 10**6)
        heavy = draw_sampled_ids(rng, 1000, 1.0, 400, 10**6)
        assert np.mean(heavy) < np.mean(light) / 10

    def test_pick_outcomes(self):
        own = [5, None, None, 1, 9, 2]
        routed = {0: (3, 0, 1), 2: (4, 0, 2), 3: (7, 1, 2), 4: (8, 1, 3)}
        wins, samples = pick_outcomes(own, routed, 4)
        assert wins == 1
        assert samples == [(3, 0, 1), (4, 0, 2), (8, 1, 3)]

    def test_pick_outcomes_skips_empty_repetitions(self):
        wins, samples = pick_outcomes([None, None, 4], {}, 3)
        assert (wins, samples) == (1, [])

    def test_samples_follow_multiplicity(self):
        rng = np.random.default_rng(11)
        prob = 2.0 ** -cover_class(4)
        xs = draw_sampled_ids(rng, 3, prob, 10**4, 10**10)
        ys = draw_sampled_ids(rng, 1, prob, 10**4, 10**10)
        picks = [
            x is not None and (y is None or x < y)
            for x, y in zip(xs, ys)
            if x is not None or y is not None
        ]
        assert abs(np.mean(picks) - 0.75) < 0.05

    def test_heavy_path_is_kept(self):
        rng = np.random.default_rng(3)
        kept = sum(qualifies(rng, 45, 19, 64, retained(64, 4)) for _ in range(1000))
        assert kept >= 990

    def test_light_path_is_dropped(self):
        rng = np.random.default_rng(5)
        kept = sum(qualifies(rng, 4, 60, 64, retained(64, 4)) for _ in range(1000))
        assert kept <= 10

    def test_covset_sizes(self):
        ctx = decomposed(cycle(4), path_tree(4))
        assert covset_sizes(ctx) == {1: 2, 2: 2, 3: 2}
        assert ctx.slots(2)["covset"] == 2

    def test_single_covering_edge_is_always_sampled(self):
        ctx = decomposed(cycle(4), path_tree(4), SAMPLED)
        samples = sample_covset(ctx)
        assert sorted(samples) == [1, 2, 3]
        for c, s in samples.items():
            assert s.reps == repetitions(4)
            assert s.self_wins + len(s.samples) <= min(s.reps, retained(4, 4))
            assert set(s.samples) <= {(0, 3)}
            assert ctx.slots(c)["cover_sample"] == s

    def test_labels_travel_with_samples(self):
        g, t = binary_tree(31)
        ctx = decomposed(g, t, SAMPLED)
        samples = sample_covset(ctx)
        assert any(s.samples for s in samples.values())
        for c, s in samples.items():
            known = ctx.slots(c)["sample_labels"]
            for u, y in s.samples:
                assert known[u] == ctx.labels[u]
                assert known[y] == ctx.labels[y]
        assert all(step.name != "sample-labels" for step in ctx.network.metrics.oracle_steps)

    def test_tree_only_graph_has_no_samples(self):
        ctx = decomposed(WeightedGraph(3, [(0, 1, 2), (1, 2, 5)]), path_tree(3), SAMPLED)
        for s in sample_covset(ctx).values():
            assert s.samples == ()
            assert s.self_wins <= s.reps


class TestExactBottoms:
    @given(graphs_with_tree(min_n=3, max_n=12, max_w=6))
    @settings(max_examples=40, deadline=None)
    def test_deepest_qualifying(self, case):
        g, t = case
        ctx = decomposed(g, t)
        bottoms = exact_bottoms(ctx)
        table = cov_oracle(t, g)
        for e, kept in bottoms.items():
            for a in kept:
                assert 3 * table.pair(e, a) >= table.cov(e)
                assert not any(b != a and t.is_ancestor(a, b) for b in kept)
            for b in t.tree_edges:
                if 3 * table.pair(e, b) >= table.cov(e):
                    assert any(t.is_ancestor(b, a) for a in kept)

    def test_own_edge_always_qualifies(self):
        ctx = decomposed(cycle(5), path_tree(5))
        assert all(bottoms for bottoms in exact_bottoms(ctx).values())


class TestInterestSets:
    @given(graphs_with_tree(min_n=3, max_n=24, max_w=4))
    @settings(max_examples=30, deadline=None)
    def test_unions(self, case):
        g, t = case
        ctx = layered(g, t)
        interest = build_interest(ctx)
        skeleton = ctx.decomposition.skeleton
        for c, paths in interest.per_edge.items():
            assert skeleton.fragment_of_vertex(ctx.labels[c]) in paths
            assert ctx.slots(c)["intpot"] == paths
        for key, bough in ctx.layering.nh_boughs.items():
            union = {p for c in bough.edges for p in interest.per_edge[c]}
            assert set(interest.per_bough[key]) == union
        for fid, frag in ctx.decomposition.fragments.items():
            union = {p for c in frag.highway for p in interest.per_edge[c]}
            assert set(interest.per_fragment[fid]) == union
        assert ctx.stats.max_intpot == interest.max_size

    @given(graphs_with_tree(min_n=3, max_n=16, max_w=4))
    @settings(max_examples=15, deadline=None)
    def test_sampled_mode_keeps_own_path(self, case):
        g, t = case
        ctx = layered(g, t, SAMPLED)
        interest = build_interest(ctx)
        skeleton = ctx.decomposition.skeleton
        for c, paths in interest.per_edge.items():
            assert skeleton.fragment_of_vertex(ctx.labels[c]) in paths

    def test_counting_bound(self):
        config = PipelineConfig.from_mapping({"interest": {"mode": "exact", "c_b": 0}})
        ctx = layered(cycle(40), path_tree(40), config)
        assert len(ctx.decomposition) > 1
        with raises(InterestBoundExceeded):
            build_interest(ctx)

    def test_json(self):
        g, t = binary_tree(15)
        ctx = layered(g, t)
        data = json.loads(interest_to_json(build_interest(ctx)))
        assert sorted(data) == ["boughs", "edges", "fragments"]
        assert len(data["edges"]) == 14


class TestSegments:
    def test_own_path_is_only_above(self):
        ctx = layered(cycle(40), path_tree(40))
        sk = ctx.decomposition.skeleton
        low = max(sk.fragments, key=lambda f: len(sk.chain(f)))
        segments = interest_segments(sk, low, [PathId(low, False)], True)
        assert segments == [Segment(sk.chain(low)[1:], Relation.ABOVE)]

    def test_path_below_a_highway(self):
        ctx = layered(cycle(40), path_tree(40))
        sk = ctx.decomposition.skeleton
        chain = max((sk.chain(f) for f in sk.fragments), key=len)
        top = chain[-1]
        segments = interest_segments(sk, top, [PathId(chain[0], False)], True)
        assert segments == [Segment(chain[:-1], Relation.BELOW)]
        beside = interest_segments(sk, top, [PathId(chain[0], False)], False)
        assert beside == [Segment(chain[:-1], Relation.ORTHOGONAL)]

    def test_nh_owners(self):
        ctx = layered(cycle(40), path_tree(40))
        sk = ctx.decomposition.skeleton
        f = sk.fragments[0]
        assert nh_owner_fragments(sk, [PathId(f, False)], f) == []
        owners = nh_owner_fragments(sk, [PathId(f, True)], -1)
        assert f in owners
        assert nh_owner_fragments(sk, [PathId(f, True)], f) == [g for g in owners if g != f]
