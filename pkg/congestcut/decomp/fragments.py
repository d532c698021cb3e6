"""Fragment decomposition of a spanning tree.

Three distributed stages follow the injected low-diameter components:

1. size splitting: a leaf-up counter scan cuts every large component into
   pieces of O(sqrt(n)) vertices; a heavy vertex groups its children, and
   the edge above a component root joins one of the root's pieces;
2. marking: the root, vertices shared by pieces and one leaf per piece are
   marked, then the marks are closed under LCA by a leaf-up pass inside
   every piece, which also tells every vertex the topmost marked vertex
   below it; piece tops and shared vertices are marked, so the union of
   the per-piece closures is closed;
3. fragment formation: the path between a marked vertex d and its nearest
   marked ancestor r is the highway of fragment d; the remaining
   (non-highway) edges join a fragment next to where they hang.

Every vertex ends up knowing the fragment of its parent edge, whether that
edge is a highway edge, the same facts about its neighbours, and its own
copy of the skeleton tree. Every pass runs inside components of height below
ceil(sqrt(n)) or over the BFS tree.
"""

import json
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from congestcut.config import DecompositionConfig
from congestcut.context import TreeContext
from congestcut.decomp.skeleton import Skeleton, SkeletonEntry
from congestcut.exceptions import DecompositionInvariantViolation
from congestcut.graph.weighted import RootedSpanningTree
from congestcut.mathutils import ceil_sqrt
from congestcut.routines.batch import (
    AggregateSpec,
    Direction,
    Value,
    add,
    max_opt,
    min_opt,
    pipelined_batch,
)
from congestcut.routines.gather import exchange
from congestcut.routines.highways import globalize
from congestcut.routines.scope import TreeScope
from congestcut.sim.engine import Message, NodeContext, NodeProgram

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"

LOGGER = logging.getLogger(__name__)

_UP, _DOWN = 0, 1


def component_key(v: int, i: int, n: int) -> int:
    """Integer key of the i-th piece created at vertex v."""
    return v * (n + 1) + i


def initial_components(tree: RootedSpanningTree) -> dict[int, int]:
    """Cut the tree into components of height below ceil(sqrt(n)).

    An edge (c, p) is cut when the height of c inside its component plus one
    reaches ceil(sqrt(n)).

    Returns:
        vertex -> root of its component
    """
    u = ceil_sqrt(tree.n)
    height = [0] * tree.n
    cut: set[int] = set()
    for v in reversed(tree.order):
        for c in tree.children(v):
            if height[c] + 1 >= u:
                cut.add(c)
            else:
                height[v] = max(height[v], height[c] + 1)
    comp_root = [0] * tree.n
    for v in tree.order:
        p = tree.parent(v)
        comp_root[v] = v if p is None or v in cut else comp_root[p]
    return dict(enumerate(comp_root))


class SplitProgram(NodeProgram):
    """Counter scan splitting one component into pieces of bounded size."""

    def __init__(
        self,
        ctx: NodeContext,
        parent: int | None,
        children: list[int],
        low: int,
        high: int,
        n: int,
    ) -> None:
        super().__init__(ctx)
        self._parent = parent
        self._children = children
        self._waiting = set(children)
        self._low, self._high, self._n = low, high, n
        self.counter = 1
        self.up_key: int | None = None
        self.child_keys: dict[int, int] = {}
        self._counts: dict[int, int] = {}
        self._inherits = False

    def _finish_up(self) -> dict[int, Message]:
        v, n = self.vertex, self._n
        out: dict[int, Message] = {}
        if self._low <= self.counter <= self._high:
            self.child_keys = {c: component_key(v, 0, n) for c in self._children}
        elif self.counter > self._high:
            group, acc, open_group = 0, 0, False
            for c in sorted(self._children):
                self.child_keys[c] = component_key(v, group, n)
                acc += self._counts[c]
                open_group = True
                if acc >= self._low:
                    group, acc, open_group = group + 1, 0, False
            if open_group and group > 0:
                # leftover children join the previous group
                last = component_key(v, group, n)
                for c in self._children:
                    if self.child_keys[c] == last:
                        self.child_keys[c] = component_key(v, group - 1, n)
        elif self._parent is None:
            self.child_keys = {c: component_key(v, 0, n) for c in self._children}
        else:
            self._inherits = True
            out[self._parent] = (_UP, self.counter)
            return out
        if self._parent is not None:
            out[self._parent] = (_UP, 0)
        for c in self._children:
            out[c] = (_DOWN, self.child_keys[c])
        return out

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        out: dict[int, Message] = {}
        for sender, msg in inbox.items():
            if msg[0] == _UP:
                self._counts[sender] = msg[1]
                self.counter += msg[1]
                self._waiting.discard(sender)
                if not self._waiting:
                    out.update(self._finish_up())
            else:
                self.up_key = msg[1]
                if self._inherits:
                    self.child_keys = {c: msg[1] for c in self._children}
                    for c in self._children:
                        out[c] = (_DOWN, msg[1])
        if rnd == 1 and not self._children:
            out.update(self._finish_up())
        if not self._waiting and (self._parent is None or self.up_key is not None):
            self.halt()
        self.sleeping = True
        return out

    @property
    def output(self) -> tuple[int | None, dict[int, int]]:
        return self.up_key, self.child_keys


@dataclass(frozen=True)
class Fragment:
    """One fragment of the decomposition."""

    fid: int
    """id, equal to the bottom vertex d_F"""

    root: int
    """top vertex r_F"""

    highway: tuple[int, ...]
    """child vertices of the highway edges, top to bottom"""

    edges: tuple[int, ...]
    """child vertices of all edges, ascending"""

    vertices: frozenset[int]

    @property
    def bottom(self) -> int:
        return self.fid

    @property
    def top_child(self) -> int:
        return self.highway[0]

    @property
    def nonhighway(self) -> tuple[int, ...]:
        hw = set(self.highway)
        return tuple(c for c in self.edges if c not in hw)

    @property
    def interior(self) -> frozenset[int]:
        return self.vertices - {self.root, self.fid}

    def diameter(self, tree: RootedSpanningTree) -> int:
        """Longest tree path inside the fragment, in edges."""
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for c in self.edges:
            p = tree.parent(c)
            adj[c].append(p)  # type: ignore[arg-type]
            adj[p].append(c)  # type: ignore[index]

        def farthest(src: int) -> tuple[int, int]:
            dist = {src: 0}
            stack = [src]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        stack.append(y)
            far = max(dist, key=lambda k: (dist[k], -k))
            return far, dist[far]

        a, _ = farthest(self.root)
        return farthest(a)[1]


class FragmentDecomposition:
    """Fragments, highway flags and the skeleton of one tree."""

    def __init__(
        self,
        tree: RootedSpanningTree,
        fragments: Iterable[Fragment],
        marked: Iterable[int],
        skeleton: Skeleton,
    ) -> None:
        self.tree = tree
        self.fragments = {f.fid: f for f in fragments}
        self.marked = frozenset(marked)
        self.skeleton = skeleton
        self.edge_fragment: dict[int, int] = {}
        self.highway_edges: set[int] = set()
        for f in self.fragments.values():
            for c in f.edges:
                self.edge_fragment[c] = f.fid
            self.highway_edges.update(f.highway)
        self._scope: TreeScope | None = None
        self._hw_scope: TreeScope | None = None

    def __len__(self) -> int:
        return len(self.fragments)

    def is_highway(self, c: int) -> bool:
        return c in self.highway_edges

    def home(self, v: int) -> int | None:
        """Fragment v is an interior vertex of; None for marked vertices."""
        if v in self.marked:
            return None
        return self.edge_fragment[v]

    @property
    def fragment_scope(self) -> TreeScope:
        """Every fragment as a keyed tree rooted at r_F, reversible at d_F."""
        if self._scope is None:
            tree = self.tree
            self._scope = TreeScope(
                {f.fid: {c: tree.parent(c) for c in f.edges} for f in self.fragments.values()},
                {f.fid: f.fid for f in self.fragments.values()},
            )
        return self._scope

    @property
    def highway_scope(self) -> TreeScope:
        """Every highway as a keyed path rooted at r_F, reversible at d_F."""
        if self._hw_scope is None:
            tree = self.tree
            self._hw_scope = TreeScope(
                {f.fid: {c: tree.parent(c) for c in f.highway} for f in self.fragments.values()},
                {f.fid: f.fid for f in self.fragments.values()},
            )
        return self._hw_scope

    def check_invariants(self, config: DecompositionConfig) -> None:
        """Raise on any violated fragment property.

        Raises:
            DecompositionInvariantViolation: count, size or diameter above
                c_f * sqrt(n), an edge in no or several fragments, fragments
                sharing more than one vertex or a non-endpoint vertex, a
                non-highway path split between fragments, or a broken skeleton.
        """
        tree = self.tree
        n = tree.n
        bound = config.c_f * ceil_sqrt(n)
        if len(self.fragments) > bound:
            raise DecompositionInvariantViolation(
                f"{len(self.fragments)} fragments exceed {bound}"
            )
        seen: dict[int, int] = {}
        for f in self.fragments.values():
            if len(f.vertices) > bound:
                raise DecompositionInvariantViolation(
                    f"fragment {f.fid} has {len(f.vertices)} vertices, bound {bound}"
                )
            if f.diameter(tree) > bound:
                raise DecompositionInvariantViolation(f"fragment {f.fid} diameter above {bound}")
            for c in f.edges:
                if c in seen:
                    raise DecompositionInvariantViolation(
                        f"edge {c} in fragments {seen[c]} and {f.fid}"
                    )
                seen[c] = f.fid
        if len(seen) != n - 1:
            raise DecompositionInvariantViolation(
                f"{n - 1 - len(seen)} tree edges belong to no fragment"
            )
        owners: dict[int, list[int]] = {}
        for f in self.fragments.values():
            for v in f.vertices:
                owners.setdefault(v, []).append(f.fid)
        for v, fids in owners.items():
            if len(fids) > 1 and v not in self.marked:
                raise DecompositionInvariantViolation(
                    f"unmarked vertex {v} shared by fragments {fids}"
                )
        fids = sorted(self.fragments)
        for i, a in enumerate(fids):
            va = self.fragments[a].vertices
            for b in fids[i + 1 :]:
                if len(va & self.fragments[b].vertices) > 1:
                    raise DecompositionInvariantViolation(
                        f"fragments {a} and {b} share more than one vertex"
                    )
        for c in tree.tree_edges:
            p = tree.parent(c)
            if c in self.highway_edges or p in self.marked:
                continue
            if self.edge_fragment[c] != self.edge_fragment[p]:  # type: ignore[index]
                raise DecompositionInvariantViolation(
                    f"non-highway edge {c} leaves the fragment of its parent edge"
                )
        if sum(len(f.vertices) for f in self.fragments.values()) > n + len(self.fragments):
            raise DecompositionInvariantViolation("fragments overlap beyond shared endpoints")
        self.skeleton.validate()

    def to_dict(self) -> dict[str, Any]:
        return {
            "fragments": [
                {
                    "id": f.fid,
                    "root": f.root,
                    "bottom": f.bottom,
                    "highway": list(f.highway),
                    "edges": list(f.edges),
                    "size": len(f.vertices),
                }
                for f in sorted(self.fragments.values(), key=lambda f: f.fid)
            ],
            "marked": sorted(self.marked),
        }


def decomposition_to_json(
    decomp: FragmentDecomposition, layering: Any = None, indent: int | None = 2
) -> str:
    """JSON dump of fragments, highways and, if given, layers."""
    data = decomp.to_dict()
    if layering is not None:
        data["layers"] = layering.to_dict()
    return json.dumps(data, indent=indent)


def skeleton_to_dot(decomp: FragmentDecomposition) -> str:
    """DOT graph of the skeleton tree, one edge per fragment highway."""
    lines = ["digraph skeleton {"]
    for f in sorted(decomp.fragments.values(), key=lambda f: f.fid):
        lines.append(f'  {f.root} -> {f.fid} [label="F{f.fid} ({len(f.highway)})"];')
    lines.append("}")
    return "\n".join(lines)


def _mark_combine(a: Value, b: Value) -> Value:
    if a is None:
        return b
    if b is None:
        return a
    return (max(a[0], b[0]), min(2, a[1] + b[1]))  # type: ignore[index]


def fragment_decompose(ctx: TreeContext) -> FragmentDecomposition:
    """Compute the fragment decomposition of the context's tree.

    Stores per vertex the slots `fragment`, `highway`, `hw_top`, `hw_bottom`
    (for the parent edge), `marked`, `home` and its own `skeleton`, and
    exchanges home, fragment and highway flag with the neighbours
    (`nbr_home`, `nbr_fragment`, `nbr_highway`).

    Raises:
        DecompositionInvariantViolation: the result violates a fragment
            property.
    """
    net = ctx.network
    tree = ctx.tree
    n = ctx.n
    dcfg = ctx.config.decomposition
    u = ceil_sqrt(n)

    comp_root = initial_components(tree)

    def kp_view() -> dict[int, dict[str, Any]]:
        out: dict[int, dict[str, Any]] = {}
        for v in range(n):
            p = tree.parent(v)
            same = p is not None and comp_root[p] == comp_root[v]
            out[v] = {
                "kp_root": comp_root[v],
                "kp_parent": p if same else None,
                "kp_children": [c for c in tree.children(v) if comp_root[c] == comp_root[v]],
            }
        return out

    net.inject_oracle("kp-components", kp_view, ctx.charge())

    kp_edges: dict[int, dict[int, int]] = {}
    kp_members: dict[int, list[int]] = {}
    for v in range(n):
        s = net.slots(v)
        kp_members.setdefault(s["kp_root"], []).append(v)
        if s["kp_parent"] is not None:
            kp_edges.setdefault(s["kp_root"], {})[v] = s["kp_parent"]
    kp_scope = TreeScope(kp_edges, members=kp_members)
    sizes = pipelined_batch(net, kp_scope, [AggregateSpec.sum(lambda v, k: 1)], "kp-size")
    good_of = pipelined_batch(
        net,
        kp_scope,
        [AggregateSpec.broadcast(lambda v, k: int(sizes.get(0, v, k) < dcfg.good_factor * u))],
        "kp-good",
    )
    for v in range(n):
        net.slots(v)["kp_good"] = bool(good_of.get(0, v, comp_root[v]))

    low, high = dcfg.size_low * u, dcfg.size_high * u

    def split_factory(c: NodeContext) -> NodeProgram:
        s = net.slots(c.vertex)
        if s["kp_good"]:
            return _GoodComponent(c, s["kp_parent"], s["kp_children"], s["kp_root"], n)
        return SplitProgram(c, s["kp_parent"], s["kp_children"], low, high, n)

    split = net.run("split", split_factory)

    # the edge above a component root joins one of the root's own pieces
    def attach_key(v: int) -> int | None:
        s = net.slots(v)
        if s["tree_parent"] is None or s["kp_parent"] is not None:
            return None
        child_keys = split[v][1]
        return min(child_keys.values()) if child_keys else component_key(v, 0, n)

    attached = exchange(
        net,
        lambda v: {} if (k := attach_key(v)) is None else {net.slots(v)["tree_parent"]: [(k,)]},
        "piece-attach",
    )
    for v in range(n):
        k = attach_key(v)
        if k is not None:
            split[v] = (k, split[v][1])
    for v in range(n):
        for c, items in attached[v].items():
            if items:
                split[v] = (split[v][0], {**split[v][1], c: items[0][0]})

    edge_comp: dict[int, int] = {}
    members: dict[int, set[int]] = {}
    for v, (up_key, child_keys) in split.items():
        if up_key is not None:
            edge_comp[v] = up_key
        keys = set(child_keys.values())
        if up_key is not None:
            keys.add(up_key)
        if not keys:
            keys.add(component_key(v, 0, n))
        members[v] = keys
        net.slots(v)["components"] = keys
        net.slots(v)["child_components"] = child_keys
        net.slots(v)["up_component"] = up_key

    # marking: root and vertices shared by pieces; every tree edge lies in one piece
    for v in range(n):
        s = net.slots(v)
        s["marked0"] = s["tree_parent"] is None or len(s["components"]) >= 2

    comp_members: dict[int, list[int]] = {}
    for v, keys in members.items():
        for k in keys:
            comp_members.setdefault(k, []).append(v)
    comp_scope = TreeScope(_component_edges(edge_comp, tree), members=comp_members)

    def is_leaf(v: int, key: int) -> bool:
        return key not in net.slots(v)["child_components"].values()

    leaves = pipelined_batch(
        net,
        comp_scope,
        [
            AggregateSpec(Direction.UP, min_opt, None, lambda v, k: v if is_leaf(v, k) else None),
            AggregateSpec(
                Direction.UP,
                max_opt,
                None,
                lambda v, k: int(is_leaf(v, k) and net.slots(v)["marked0"]),
            ),
        ],
        "component-leaves",
    )

    def forced(v: int, key: int) -> Value:
        if leaves.get(1, v, key):
            return None
        return leaves.get(0, v, key)

    chosen = pipelined_batch(
        net, comp_scope, [AggregateSpec.broadcast(forced)], "forced-leaves"
    )
    for v in range(n):
        s = net.slots(v)
        if any(chosen.get(0, v, k) == v for k in members[v]):
            s["marked0"] = True

    def piece(v: int) -> int:
        """The single piece of an unmarked vertex, or the piece of its parent edge."""
        up = edge_comp.get(v)
        return min(members[v]) if up is None else up

    def lift(v: int, acc: Value) -> Value:
        if net.slots(v)["marked0"] or (acc is not None and acc[1] >= 2):  # type: ignore[index]
            return (v, 1)
        if acc is None:
            return None
        return (acc[0], 1)  # type: ignore[index]

    closure = pipelined_batch(
        net,
        comp_scope,
        [AggregateSpec(Direction.UP, _mark_combine, None, None, lift, "mark-closure")],
        "mark-closure",
    )
    for v in range(n):
        s = net.slots(v)
        acc = closure.get(0, v, piece(v))
        s["marked"] = bool(s["marked0"] or (acc is not None and acc[1] >= 2))  # type: ignore[index]
        if s["marked"]:
            s["top_marked"] = v
        else:
            s["top_marked"] = acc[0] if acc is not None else None  # type: ignore[index]

    # fragment formation
    def report_up(v: int) -> dict[int, list[tuple[int, ...]]]:
        s = net.slots(v)
        if s["tree_parent"] is None:
            return {}
        top = s["top_marked"]
        return {s["tree_parent"]: [(-1 if top is None else top, edge_comp.get(v, -1))]}

    report = exchange(net, report_up, "fragment-report")

    def assign(v: int) -> dict[int, list[tuple[int, ...]]]:
        s = net.slots(v)
        children = s["tree_children"]
        if not s["marked"]:
            return {c: [(-1, 0)] for c in children}
        below = {c: report[v][c][0] for c in children}
        rooted = [(m, comp) for m, comp in below.values() if m >= 0]
        out: dict[int, list[tuple[int, ...]]] = {}
        for c, (m, comp) in below.items():
            if m >= 0:
                out[c] = [(-1, 1)]
                continue
            same = sorted(f for f, fc in rooted if fc == comp)
            if same:
                out[c] = [(same[0], 1)]
            elif rooted:
                out[c] = [(min(f for f, _ in rooted), 1)]
            else:
                out[c] = [(v, 1)]
        return out

    told = exchange(net, assign, "fragment-assign")

    def from_parent(v: int) -> tuple[int, ...] | None:
        p = net.slots(v)["tree_parent"]
        if p is None:
            return None
        return told[v][p][0]

    def own_fragment(v: int, key: int) -> Value:
        s = net.slots(v)
        if s["tree_parent"] is None:
            return None
        if s["top_marked"] is not None:
            return s["top_marked"]
        fid = from_parent(v)[0]  # type: ignore[index]
        return None if fid < 0 else fid

    prefix = pipelined_batch(
        net,
        comp_scope,
        [AggregateSpec(Direction.DOWN, lambda a, b: b if b is not None else a, None, own_fragment)],
        "fragment-propagate",
    )
    for v in range(n):
        s = net.slots(v)
        told_by_parent = from_parent(v)
        s["fragment"] = prefix.get(0, v, piece(v)) if told_by_parent is not None else None
        s["highway"] = told_by_parent is not None and s["top_marked"] is not None
        s["hw_top"] = s["highway"] and told_by_parent[1] == 1  # type: ignore[index]
        s["hw_bottom"] = s["highway"] and s["marked"]
        s["home"] = None if s["marked"] else s["fragment"]

    def neighbour_facts(v: int) -> dict[int, list[tuple[int, ...]]]:
        s = net.slots(v)
        home = -1 if s["home"] is None else s["home"]
        fid = -1 if s["fragment"] is None else s["fragment"]
        return {y: [(home, fid, int(s["highway"]))] for y in ctx.graph.neighbours(v)}

    facts = exchange(net, neighbour_facts, "home-exchange")
    for v in range(n):
        s = net.slots(v)
        s["nbr_home"], s["nbr_fragment"], s["nbr_highway"] = {}, {}, {}
        for y, items in facts[v].items():
            home, fid, highway = items[0]
            s["nbr_home"][y] = None if home < 0 else home
            s["nbr_fragment"][y] = None if fid < 0 else fid
            s["nbr_highway"][y] = bool(highway)

    skeleton = _build_skeleton(ctx)
    decomp = _collect(ctx, skeleton)
    decomp.check_invariants(dcfg)
    ctx.decomposition = decomp
    ctx.stats.fragments = len(decomp)
    LOGGER.debug("%d fragments, %d marked vertices", len(decomp), len(decomp.marked))
    return decomp


class _GoodComponent(NodeProgram):
    """A small component stays whole: every edge gets the root's key."""

    def __init__(
        self, ctx: NodeContext, parent: int | None, children: list[int], root: int, n: int
    ) -> None:
        super().__init__(ctx)
        self._key = component_key(root, 0, n)
        self._parent = parent
        self._children = children

    def on_round(self, rnd: int, inbox: dict[int, Message]) -> dict[int, Message]:
        self.halt()
        return {}

    @property
    def output(self) -> tuple[int | None, dict[int, int]]:
        up = self._key if self._parent is not None else None
        return up, {c: self._key for c in self._children}


def _component_edges(
    edge_comp: dict[int, int], tree: RootedSpanningTree
) -> dict[int, dict[int, int]]:
    out: dict[int, dict[int, int]] = {}
    for c, key in edge_comp.items():
        out.setdefault(key, {})[c] = tree.parent(c)  # type: ignore[assignment]
    return out


def _skeleton_entries(items: Iterable[tuple[int, ...]]) -> list[SkeletonEntry]:
    parts: dict[int, dict[int, tuple[int, ...]]] = {}
    for item in items:
        parts.setdefault(item[0], {})[item[1]] = item[2:]
    entries = []
    for fid, ends in parts.items():
        r, c, tpre, tsize, rpre, rsize, rdepth = ends[0]
        bpre, bsize, bdepth = ends[1]
        entries.append(
            SkeletonEntry(fid, r, c, tpre, tsize, rpre, rsize, rdepth, bpre, bsize, bdepth)
        )
    return entries


def _build_skeleton(ctx: TreeContext) -> Skeleton:
    """Every vertex builds its own skeleton from the broadcast fragment tuples."""
    net = ctx.network

    def items(v: int) -> list[tuple[int, ...]]:
        s = net.slots(v)
        out: list[tuple[int, ...]] = []
        lbl = s["label"]
        if s.get("hw_top"):
            p = s["tree_parent"]
            plbl = s["nbr_labels"][p]
            out.append((s["fragment"], 0, p, v, lbl.pre, lbl.size, plbl.pre, plbl.size, plbl.depth))
        if s.get("hw_bottom"):
            out.append((v, 1, lbl.pre, lbl.size, lbl.depth))
        return out

    globalize(net, ctx.bfs, items, "skeleton", slot="skeleton_items")  # type: ignore[arg-type]
    root = ctx.tree.root
    for v in range(ctx.n):
        s = net.slots(v)
        s["skeleton"] = Skeleton(_skeleton_entries(s.pop("skeleton_items")), root)
    return net.slots(ctx.bfs.root)["skeleton"]  # type: ignore[union-attr]


def _collect(ctx: TreeContext, skeleton: Skeleton) -> FragmentDecomposition:
    tree = ctx.tree
    net = ctx.network
    by_fragment: dict[int, list[int]] = {}
    for c in tree.tree_edges:
        by_fragment.setdefault(net.slots(c)["fragment"], []).append(c)
    fragments = []
    for fid, edges in by_fragment.items():
        highway = sorted(
            (c for c in edges if net.slots(c)["highway"]), key=lambda c: tree.depth(c)
        )
        if not highway:
            raise DecompositionInvariantViolation(f"fragment {fid} has no highway")
        root = tree.parent(highway[0])
        verts = set(edges)
        verts.update(tree.parent(c) for c in edges)  # type: ignore[misc]
        fragments.append(
            Fragment(
                fid,
                root,  # type: ignore[arg-type]
                tuple(highway),
                tuple(sorted(edges)),
                frozenset(verts),  # type: ignore[arg-type]
            )
        )
    marked = [v for v in range(ctx.n) if net.slots(v)["marked"]]
    return FragmentDecomposition(tree, fragments, marked, skeleton)
