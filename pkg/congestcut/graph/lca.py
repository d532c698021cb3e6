"""Short labels answering LCA and subtree-membership queries.

A label holds the heavy-first preorder number of the vertex, the size of its
subtree, its depth and the heads of the heavy paths met on the way from the
root. Heavy paths occupy consecutive preorder numbers, so the LCA of two
vertices is recovered from their labels alone: it lies on the last heavy path
both root paths share, at the smaller of the two exit depths.
"""

from collections import namedtuple
from collections.abc import Sequence

from congestcut.graph.weighted import RootedSpanningTree
from congestcut.mathutils import word_bits

__author__ = "congestcut contributors"
__license__ = "MIT"
__version__ = "0.0.1"


LcaLabel = namedtuple("LcaLabel", "pre size depth heads")
LcaLabel.__doc__ = """Label of one vertex.

Args:
    pre: heavy-first preorder number, the vertex identifier inside labels.
    size: number of vertices in the subtree.
    depth: distance from the root.
    heads: ((head_pre, head_depth), ...) of the heavy paths on the root path,
        starting with the root's path.
"""


def is_ancestor(a: LcaLabel, b: LcaLabel) -> bool:
    """True if the vertex labelled `a` is an ancestor of (or equal to) `b`."""
    return a.pre <= b.pre < a.pre + a.size


def in_subtree(x: LcaLabel, c: LcaLabel) -> bool:
    """True if the vertex labelled `x` lies in the subtree below `c`."""
    return c.pre <= x.pre < c.pre + c.size


def _exit_depth(label: LcaLabel, k: int) -> int:
    if k == len(label.heads) - 1:
        return label.depth
    return label.heads[k + 1][1] - 1


def lca_from_labels(a: LcaLabel, b: LcaLabel) -> tuple[int, int]:
    """Identifier (preorder number) and depth of the LCA of two labelled vertices.

    Args:
        a: label of the first vertex
        b: label of the second vertex

    Returns:
        (pre, depth) of the lowest common ancestor
    """
    if is_ancestor(a, b):
        return a.pre, a.depth
    if is_ancestor(b, a):
        return b.pre, b.depth
    k = 0
    common = min(len(a.heads), len(b.heads))
    while k + 1 < common and a.heads[k + 1] == b.heads[k + 1]:
        k += 1
    depth = min(_exit_depth(a, k), _exit_depth(b, k))
    head_pre, head_depth = a.heads[k]
    return head_pre + depth - head_depth, depth


def label_words(label: LcaLabel) -> int:
    """Number of integers the label occupies on the wire."""
    return 4 + 2 * len(label.heads)


def encode_label(label: LcaLabel) -> tuple[int, ...]:
    """Flatten a label into a tuple of integers.

    >>> encode_label(LcaLabel(3, 1, 2, ((0, 0), (3, 2))))
    (3, 1, 2, 2, 0, 0, 3, 2)
    """
    flat: list[int] = [label.pre, label.size, label.depth, len(label.heads)]
    for head_pre, head_depth in label.heads:
        flat.extend((head_pre, head_depth))
    return tuple(flat)


def decode_label(words: Sequence[int], start: int = 0) -> tuple[LcaLabel, int]:
    """Inverse of `encode_label`; returns the label and the next offset."""
    pre, size, depth, k = words[start : start + 4]
    pos = start + 4
    heads = tuple((words[pos + 2 * i], words[pos + 2 * i + 1]) for i in range(k))
    return LcaLabel(pre, size, depth, heads), pos + 2 * k


class LcaLabeling:
    """Labels of every vertex of a rooted tree."""

    def __init__(self, tree: RootedSpanningTree) -> None:
        n = tree.n
        size = [1] * n
        for v in reversed(tree.order):
            p = tree.parent(v)
            if p is not None:
                size[p] += size[v]
        heavy: list[int | None] = [None] * n
        for v in range(n):
            ch = tree.children(v)
            if ch:
                heavy[v] = max(ch, key=lambda c: (size[c], -c))
        pre = [0] * n
        heads: list[tuple[tuple[int, int], ...]] = [()] * n
        clock = 0
        stack = [tree.root]
        while stack:
            v = stack.pop()
            pre[v] = clock
            clock += 1
            p = tree.parent(v)
            if p is None:
                heads[v] = ((pre[v], 0),)
            elif heavy[p] == v:
                heads[v] = heads[p]
            else:
                heads[v] = heads[p] + ((pre[v], tree.depth(v)),)
            light = [c for c in tree.children(v) if c != heavy[v]]
            stack.extend(reversed(light))
            if heavy[v] is not None:
                stack.append(heavy[v])
        self._labels = tuple(
            LcaLabel(pre[v], size[v], tree.depth(v), heads[v]) for v in range(n)
        )
        self._vertex_of = [0] * n
        for v in range(n):
            self._vertex_of[pre[v]] = v

    def __getitem__(self, v: int) -> LcaLabel:
        return self._labels[v]

    def __len__(self) -> int:
        return len(self._labels)

    def vertex_of(self, pre: int) -> int:
        """Vertex whose preorder number is `pre`."""
        return self._vertex_of[pre]

    def lca(self, u: int, v: int) -> int:
        """LCA vertex of u and v computed from their labels."""
        return self._vertex_of[lca_from_labels(self._labels[u], self._labels[v])[0]]

    def max_words(self) -> int:
        return max(label_words(lb) for lb in self._labels)

    def max_bits(self) -> int:
        """Longest label in bits, one word per integer."""
        return self.max_words() * word_bits(len(self._labels))


def build_lca_labels(tree: RootedSpanningTree) -> LcaLabeling:
    """Label every vertex of `tree`.

    Args:
        tree: a valid rooted spanning tree

    Returns:
        the labeling; `labeling[v]` is the label of v
    """
    return LcaLabeling(tree)
