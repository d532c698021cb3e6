"""Keyed forests over tree edges, the scopes of every aggregate computation.

A scope maps an integer key to a set of child -> parent edges. The edges of
one key form a forest; different keys may share vertices (fragments sharing
their root) and even directed edges. A key may carry a reverse root: the
reoriented scope flips the edges between that vertex and the key's root so
that it becomes the new root.
"""

from collections.abc import Iterable, Mapping

from congestcut.exceptions import DecompositionInvariantViolation
from congestcut.graph.weighted import RootedSpanningTree

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


class TreeScope:
    """Forest of keyed trees."""

    def __init__(
        self,
        parents: Mapping[int, Mapping[int, int]],
        reverse_roots: Mapping[int, int] | None = None,
        members: Mapping[int, Iterable[int]] | None = None,
    ) -> None:
        self._parents = {k: dict(p) for k, p in parents.items()}
        self._reverse_roots = dict(reverse_roots or {})
        self._children: dict[int, dict[int, list[int]]] = {}
        self._vertices: dict[int, set[int]] = {}
        for key, par in self._parents.items():
            ch: dict[int, list[int]] = {}
            verts: set[int] = set()
            for c, p in par.items():
                ch.setdefault(p, []).append(c)
                verts.add(c)
                verts.add(p)
            for lst in ch.values():
                lst.sort()
            self._children[key] = ch
            self._vertices[key] = verts
        for key, extra in (members or {}).items():
            self._parents.setdefault(key, {})
            self._children.setdefault(key, {})
            self._vertices.setdefault(key, set()).update(extra)
        self._memberships: dict[int, list[int]] = {}
        for key in sorted(self._vertices):
            for v in self._vertices[key]:
                self._memberships.setdefault(v, []).append(key)

    @property
    def keys(self) -> list[int]:
        return sorted(self._vertices)

    def parent(self, key: int, v: int) -> int | None:
        return self._parents[key].get(v)

    def children(self, key: int, v: int) -> list[int]:
        return self._children[key].get(v, [])

    def vertices(self, key: int) -> set[int]:
        return self._vertices[key]

    def memberships(self, v: int) -> list[int]:
        """Keys whose forest contains v, ascending."""
        return self._memberships.get(v, [])

    def roots(self, key: int) -> list[int]:
        par = self._parents[key]
        return sorted(v for v in self._vertices[key] if v not in par)

    def edges(self, key: int) -> Mapping[int, int]:
        return self._parents[key]

    def reoriented(self) -> "TreeScope":
        """Scope in which every key with a reverse root is rooted there.

        Raises:
            DecompositionInvariantViolation: a reverse root outside its key.
        """
        flipped: dict[int, dict[int, int]] = {}
        for key, par in self._parents.items():
            d = self._reverse_roots.get(key)
            if d is None:
                flipped[key] = dict(par)
                continue
            if d not in self._vertices[key]:
                raise DecompositionInvariantViolation(
                    f"reverse root {d} is not in scope key {key}"
                )
            new = dict(par)
            path = [d]
            while path[-1] in par:
                path.append(par[path[-1]])
            new.pop(d, None)
            for child, parent in zip(path, path[1:]):
                new[parent] = child
            flipped[key] = new
        return TreeScope(flipped, members=self._vertices)

    def restricted(self, keys: Iterable[int]) -> "TreeScope":
        """Sub-scope made of the given keys only."""
        wanted = set(keys)
        return TreeScope(
            {k: p for k, p in self._parents.items() if k in wanted},
            {k: d for k, d in self._reverse_roots.items() if k in wanted},
            {k: v for k, v in self._vertices.items() if k in wanted},
        )

    def replicated(self, bases: Mapping[int, int]) -> "TreeScope":
        """Scope whose key k is a copy of key `bases[k]` of this scope.

        Requests sharing one tree run as separate keys of a single batch.
        """
        return TreeScope(
            {k: self._parents[b] for k, b in bases.items()},
            {k: self._reverse_roots[b] for k, b in bases.items() if b in self._reverse_roots},
            {k: self._vertices[b] for k, b in bases.items()},
        )

    @staticmethod
    def whole_tree(tree: RootedSpanningTree, key: int = 0) -> "TreeScope":
        """The whole tree as a single key."""
        return TreeScope({key: tree.parents}, members={key: range(tree.n)})

    def __repr__(self) -> str:
        return f"TreeScope(keys={len(self._vertices)})"
