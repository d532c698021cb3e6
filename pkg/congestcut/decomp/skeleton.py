"""The skeleton tree: one virtual edge (r_F, d_F) per fragment.

Every vertex holds the same skeleton after one upcast/broadcast of two tuples
per fragment, and answers structural questions about fragments locally.
"""

from collections import namedtuple
from collections.abc import Iterable

from congestcut.exceptions import DecompositionInvariantViolation
from congestcut.graph.lca import LcaLabel

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


SkeletonEntry = namedtuple(
    "SkeletonEntry",
    "fid root top_child top_pre top_size root_pre root_size root_depth "
    "bottom_pre bottom_size bottom_depth",
)
SkeletonEntry.__doc__ = """One fragment as the skeleton knows it.

Args:
    fid: fragment id, the bottom vertex d_F.
    root: the top vertex r_F.
    top_child: child of the highest highway edge.
    top_pre, top_size: interval of the subtree below the highest highway edge.
    root_pre, root_size, root_depth: label fields of r_F.
    bottom_pre, bottom_size, bottom_depth: label fields of d_F.
"""

PathId = namedtuple("PathId", "fragment nh")
PathId.__doc__ = """A root path, named by its lowest fragment.

Args:
    fragment: the lowest fragment whose highway the path uses, or the tree
        root when the path uses no highway.
    nh: True if the path starts off that fragment's highway, in non-highway
        edges hanging inside or below it.
"""


class Skeleton:
    """Skeleton tree built from the broadcast fragment tuples."""

    def __init__(self, entries: Iterable[SkeletonEntry], tree_root: int) -> None:
        self._entries = {e.fid: e for e in entries}
        self.tree_root = tree_root
        self._at_root: dict[int, list[int]] = {}
        for e in self._entries.values():
            self._at_root.setdefault(e.root, []).append(e.fid)
        for lst in self._at_root.values():
            lst.sort()
        self._chains: dict[int, tuple[int, ...]] = {}

    @property
    def fragments(self) -> list[int]:
        return sorted(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, fid: object) -> bool:
        return fid in self._entries

    def entry(self, fid: int) -> SkeletonEntry:
        return self._entries[fid]

    def root_of(self, fid: int) -> int:
        return self._entries[fid].root

    def parent(self, fid: int) -> int | None:
        """Fragment whose bottom is the root of `fid`, None below the tree root."""
        root = self._entries[fid].root
        return root if root in self._entries else None

    def rooted_at(self, vertex: int) -> list[int]:
        """Fragments whose top vertex is `vertex`, ascending."""
        return self._at_root.get(vertex, [])

    def chain(self, fid: int) -> tuple[int, ...]:
        """`fid` followed by its skeleton ancestors, bottom-up."""
        if fid not in self._chains:
            out: list[int] = []
            cur: int | None = fid if fid in self._entries else None
            while cur is not None and len(out) <= len(self._entries):
                out.append(cur)
                cur = self.parent(cur)
            self._chains[fid] = tuple(out)
        return self._chains[fid]

    def is_above(self, upper: int, lower: int) -> bool:
        """True if the highway of `upper` lies on the root path of `lower`'s top."""
        u, w = self._entries[upper], self._entries[lower]
        return u.bottom_pre <= w.root_pre < u.bottom_pre + u.bottom_size

    def orthogonal(self, a: int, b: int) -> bool:
        return a != b and not self.is_above(a, b) and not self.is_above(b, a)

    def fragment_of_vertex(self, label: LcaLabel) -> PathId:
        """Lowest fragment whose highway lies on the root path of a vertex.

        The vertex's own fragment when it sits on or hangs off a highway
        interior; otherwise the fragment it hangs below.
        """
        best: SkeletonEntry | None = None
        for e in self._entries.values():
            if e.top_pre <= label.pre < e.top_pre + e.top_size:
                if best is None or e.root_depth > best.root_depth:
                    best = e
        if best is None:
            return PathId(self.tree_root, True)
        on_highway = label.pre <= best.bottom_pre < label.pre + label.size
        return PathId(best.fid, not on_highway)

    def bottoms_above(self, label: LcaLabel) -> tuple[int, ...]:
        """Fragments whose bottom is the vertex or one of its ancestors, bottom-up."""
        best: SkeletonEntry | None = None
        for e in self._entries.values():
            if e.bottom_pre <= label.pre < e.bottom_pre + e.bottom_size:
                if best is None or e.bottom_depth > best.bottom_depth:
                    best = e
        return () if best is None else self.chain(best.fid)

    def nh_owners(self, pid: PathId) -> list[int]:
        """Fragments that may own the non-highway start of the path `pid`."""
        owners = list(self.rooted_at(pid.fragment))
        if pid.fragment in self._entries:
            owners.append(pid.fragment)
        return sorted(owners)

    def validate(self) -> None:
        """The skeleton is a tree hanging from the tree root.

        Raises:
            DecompositionInvariantViolation: a fragment root is neither the
                tree root nor the bottom of another fragment, or a cycle.
        """
        for e in self._entries.values():
            if e.root != self.tree_root and e.root not in self._entries:
                raise DecompositionInvariantViolation(
                    f"fragment {e.fid} hangs from {e.root}, which is not a skeleton vertex"
                )
            if len(self.chain(e.fid)) > len(self._entries):
                raise DecompositionInvariantViolation("skeleton contains a cycle")
