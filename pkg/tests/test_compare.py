from hypothesis import given, settings
from pytest import mark, raises

from congestcut.compare.highway import (
    HighwayJob,
    compare_highways,
    compare_same_fragment_highway,
    highway_no_edge,
)
from congestcut.compare.nonhighway import (
    NhHighwayJob,
    compare_nh_cross_fragment,
    compare_nh_highway,
    compare_nh_local,
    cov_pieces_nh_highway,
)
from congestcut.compare.pieces import (
    find_fragment_links,
    fragment_edge_lists,
    highway_extra_of,
    pack,
    pair_extras,
    unpack,
)
from congestcut.exceptions import PreconditionUnmet
from congestcut.graph.cover import cov_oracle
from congestcut.graph.weighted import WeightedGraph
from tests.strategies import (
    SEVERAL_IDS,
    binary_tree,
    cycle,
    graphs_with_tree,
    layered,
    path_tree,
    several_fragments,
    staged,
)


class TestFragmentEdgeLists:
    def test_every_vertex_knows_its_fragment(self):
        g, t = binary_tree(31)
        ctx = layered(g, t)
        lists = fragment_edge_lists(ctx)
        for fid, frag in ctx.decomposition.fragments.items():
            assert sorted(x.child for x in lists[fid]) == list(frag.edges)
            assert {x.child for x in lists[fid] if x.highway} == set(frag.highway)
            assert all(x.cov == ctx.cov[x.child] for x in lists[fid])

    def test_wire_form(self):
        g, t = binary_tree(7)
        ctx = layered(g, t)
        for targets in fragment_edge_lists(ctx).values():
            assert [unpack(pack(x)) for x in targets] == list(targets)


class TestLocalComparisons:
    @given(graphs_with_tree(min_n=3, max_n=24, max_w=8))
    @settings(max_examples=40, deadline=None)
    def test_nonhighway_against_own_fragment(self, case):
        g, t = case
        ctx = layered(g, t)
        table = cov_oracle(t, g)
        found = compare_nh_local(ctx)
        for (e, f), cut in found.items():
            assert cut == table.cut(e, f)
        for frag in ctx.decomposition.fragments.values():
            for e in frag.nonhighway:
                for f in frag.edges:
                    if f == e or not t.is_ancestor(e, f):
                        assert (e, f) in found

    @given(graphs_with_tree(min_n=3, max_n=24, max_w=8))
    @settings(max_examples=40, deadline=None)
    def test_highway_pairs_of_one_fragment(self, case):
        g, t = case
        ctx = layered(g, t)
        table = cov_oracle(t, g)
        found = compare_same_fragment_highway(ctx)
        for (e, f), cut in found.items():
            assert cut == table.cut(e, f)
            assert t.is_ancestor(f, e) and e != f
        expected = sum(
            len(f.highway) * (len(f.highway) - 1) // 2
            for f in ctx.decomposition.fragments.values()
        )
        assert len(found) == expected

    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_same_fragment_pairs_split_at_the_upper_interior(self, graph, tree):
        ctx, _, _ = staged(graph, tree)
        decomp = ctx.decomposition
        table = cov_oracle(tree, graph)
        fids = [fid for fid, f in decomp.fragments.items() if len(f.highway) > 1]
        extras = pair_extras(ctx, [(fid, fid) for fid in fids])
        non_tree = [x for x in graph.edges if not tree.is_tree_edge(x.u, x.v)]

        def crosses(c, x):
            return tree.is_ancestor(c, x.u) != tree.is_ancestor(c, x.v)

        for fid in fids:
            upper = {
                v
                for v in range(tree.n)
                if decomp.home(v) == fid and not tree.is_ancestor(fid, v)
            }
            highway = decomp.fragments[fid].highway
            for i, f in enumerate(highway):
                for e in highway[i + 1 :]:
                    inside = sum(
                        x.w
                        for x in non_tree
                        if (x.u in upper or x.v in upper) and crosses(e, x) and crosses(f, x)
                    )
                    assert table.pair(e, f) == inside + extras[(fid, fid)]


class TestLinks:
    @given(graphs_with_tree(min_n=3, max_n=30, max_w=2))
    @settings(max_examples=40, deadline=None)
    def test_first_edge_between_interiors(self, case):
        g, t = case
        ctx = layered(g, t)
        decomp = ctx.decomposition
        links = find_fragment_links(ctx)
        expected: dict[tuple[int, int], tuple[int, int]] = {}
        for u, v, _ in g.edges:
            a, b = decomp.home(u), decomp.home(v)
            if a is None or b is None or a == b:
                continue
            for key in ((a, b), (b, a)):
                expected[key] = min(expected.get(key, (u, v)), (u, v))
        assert links == expected

    def test_no_links_in_a_tree(self):
        g, t = binary_tree(15)
        tree_only = WeightedGraph(15, [e for e in g.edges if e[:2] != (0, 14)])
        ctx = layered(tree_only, t)
        assert find_fragment_links(ctx) == {}


def all_pairs(rows, cols):
    return {(e, f) for e in rows for f in cols}


class TestCrossFragment:
    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_nonhighway_pairs_match_oracle(self, graph, tree):
        ctx, _, bough_links = staged(graph, tree)
        table = cov_oracle(tree, graph)
        boughs = ctx.layering.nh_boughs
        jobs = {
            j: (key, b, link)
            for j, ((key, b), link) in enumerate(sorted(bough_links.items()))
            if b != boughs[key].fragment
        }
        rows = compare_nh_cross_fragment(ctx, jobs)
        for j, (key, b, _) in jobs.items():
            got = {(e, f): cut for cut, e, f, _ in rows.get(j, [])}
            nonhighway = ctx.decomposition.fragments[b].nonhighway
            assert set(got) == all_pairs(boughs[key].edges, nonhighway)
            assert all(cut == table.cut(e, f) for (e, f), cut in got.items())

    def test_no_jobs(self):
        ctx = layered(cycle(40), path_tree(40))
        assert compare_nh_cross_fragment(ctx, {}) == {}


class TestNhHighway:
    def jobs(self, ctx, bough_links, linked):
        boughs = ctx.layering.nh_boughs
        out = {}
        for key, bough in sorted(boughs.items()):
            for b in sorted(ctx.decomposition.fragments):
                if b == bough.fragment or ((key, b) in bough_links) != linked:
                    continue
                out[len(out)] = NhHighwayJob(key, b, bough.edges, bough_links.get((key, b)))
        return out

    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_values_match_oracle(self, graph, tree):
        ctx, _, bough_links = staged(graph, tree)
        table = cov_oracle(tree, graph)
        jobs = self.jobs(ctx, bough_links, True)
        rows = compare_nh_highway(ctx, jobs)
        for j, job in jobs.items():
            got = {(e, f): cut for cut, e, f, _ in rows.get(j, [])}
            highway = ctx.decomposition.fragments[job.fragment].highway
            assert set(got) == all_pairs(job.rows, highway)
            assert all(cut == table.cut(e, f) for (e, f), cut in got.items())

    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_pieces_add_up_to_cover_values(self, graph, tree):
        ctx, _, bough_links = staged(graph, tree)
        table = cov_oracle(tree, graph)
        for linked in (True, False):
            jobs = self.jobs(ctx, bough_links, linked)
            pieces, covs = cov_pieces_nh_highway(ctx, jobs)
            for j, job in jobs.items():
                highway = ctx.decomposition.fragments[job.fragment].highway
                assert set(pieces.get(j, {})) <= all_pairs(job.rows, highway)
                if not linked:
                    assert set(pieces[j]) == all_pairs(job.rows, highway)
                for (e, f), (inside, extra) in pieces.get(j, {}).items():
                    assert inside + extra == table.pair(e, f)
                    assert extra == highway_extra_of(ctx, e, job.fragment)
                    if not linked:
                        assert inside == 0
            assert all(cov == table.cov(f) for f, cov in covs.items())

    def test_rows_need_a_link(self):
        ctx = layered(cycle(40), path_tree(40))
        job = NhHighwayJob(0, 0, (1,), None)
        with raises(PreconditionUnmet):
            compare_nh_highway(ctx, {0: job})


class TestHighways:
    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_linked_pairs_match_oracle(self, graph, tree):
        ctx, links, _ = staged(graph, tree)
        table = cov_oracle(tree, graph)
        frags = ctx.decomposition.fragments
        jobs = {
            j: HighwayJob(a, frags[a].highway, b, frags[b].highway, link)
            for j, ((a, b), link) in enumerate(sorted(links.items()))
            if a < b
        }
        rows = compare_highways(ctx, jobs)
        for j, job in jobs.items():
            got = {(e, f): cut for cut, e, f, _ in rows[j]}
            assert set(got) == all_pairs(job.rows, job.cols)
            assert all(cut == table.cut(e, f) for (e, f), cut in got.items())

    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_unlinked_pairs_decouple(self, graph, tree):
        ctx, links, _ = staged(graph, tree)
        table = cov_oracle(tree, graph)
        frags = ctx.decomposition.fragments
        pairs = [(a, b) for a in frags for b in frags if a < b]
        extras = pair_extras(ctx, pairs)
        for a, b in pairs:
            for e in frags[a].highway:
                for f in frags[b].highway:
                    outside = (
                        highway_extra_of(ctx, e, b)
                        + highway_extra_of(ctx, f, a)
                        + extras[(a, b)]
                    )
                    if (a, b) in links:
                        assert table.pair(e, f) >= outside
                    else:
                        assert table.pair(e, f) == outside

    @mark.parametrize("graph, tree", several_fragments(), ids=SEVERAL_IDS)
    def test_no_edge_minimum(self, graph, tree):
        ctx, links, _ = staged(graph, tree)
        table = cov_oracle(tree, graph)
        frags = ctx.decomposition.fragments
        pairs = {(a, b) for a in frags for b in frags if a != b and (a, b) not in links}
        for (a, b), (cut, e, f) in highway_no_edge(ctx, pairs).items():
            assert table.cut(e, f) == cut
            assert cut == min(
                table.cut(x, y) for x in frags[a].highway for y in frags[b].highway
            )
