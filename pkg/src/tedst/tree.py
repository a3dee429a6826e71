"""Ordered labeled trees indexed in postorder.

Every algorithm in the package works on :class:`OrderedTree`.  Node indices
are 1-based postorder positions, so the root of an ``n``-node tree is ``n``
and the leftmost leaf of the whole tree is ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence


class TreeError(ValueError):
    """Raised when a parent array does not describe a single rooted tree."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class NodeLabel:
    """Token carried by a tree node.

    ``key`` is what comparisons look at.  When not given it falls back to the
    lemma, then to the surface form.
    """

    surface: str
    key: str = ""
    tag: Optional[str] = None
    rel: Optional[str] = None
    lemma: Optional[str] = None
    ctag: Optional[str] = None
    feats: Optional[str] = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("node surface form must be non-empty")
        if not self.key:
            object.__setattr__(self, "key", self.lemma or self.surface)

    @classmethod
    def of(cls, text: str) -> "NodeLabel":
        return cls(surface=text)

    def __str__(self):
        return self.surface


@dataclass(frozen=True)
class OrderedTree:
    """Immutable postorder-indexed tree.

    The tuples are stored 0-based (entry ``k`` describes postorder node
    ``k + 1``) but every accessor and every stored index value is 1-based.
    ``parents`` uses ``0`` for the root.  ``positions`` holds each node's
    1-based surface position (token order) as given to :func:`build_tree`.
    """

    labels: tuple
    parents: tuple
    children: tuple
    lld: tuple
    positions: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    @property
    def root(self) -> int:
        return len(self.labels)

    def label(self, i: int) -> NodeLabel:
        return self.labels[i - 1]

    def parent(self, i: int) -> int:
        return self.parents[i - 1]

    def kids(self, i: int) -> tuple:
        return self.children[i - 1]

    def leftmost(self, i: int) -> int:
        return self.lld[i - 1]

    def is_leaf(self, i: int) -> bool:
        return not self.children[i - 1]

    def size(self, i: int) -> int:
        """Number of nodes in the subtree rooted at ``i``."""
        return i - self.lld[i - 1] + 1

    def surface_order(self) -> list:
        """Postorder indices sorted by surface position."""
        if not self.positions:
            return list(range(1, self.n + 1))
        return sorted(range(1, self.n + 1), key=lambda i: self.positions[i - 1])

    def subtree(self, i: int) -> "OrderedTree":
        """Return the subtree rooted at ``i`` as a tree of its own."""
        first = self.lld[i - 1]
        offset = first - 1
        parents = [p - offset for p in self.parents[first - 1 : i]]
        parents[-1] = 0
        return OrderedTree(
            labels=self.labels[first - 1 : i],
            parents=tuple(parents),
            children=tuple(tuple(c - offset for c in cs) for cs in self.children[first - 1 : i]),
            lld=tuple(v - offset for v in self.lld[first - 1 : i]),
            positions=self.positions[first - 1 : i] if self.positions else (),
        )

    def __str__(self):
        from tedst.io import render_bracket

        return render_bracket(self)


def build_tree(parents: Sequence[int], labels: Sequence[NodeLabel]) -> OrderedTree:
    """Build an :class:`OrderedTree` from a head array in surface order.

    ``parents[k]`` is the 1-based surface position of the head of token
    ``k + 1``, or ``0`` for the root, exactly like the CoNLL HEAD column.
    Children are ordered by surface position, on both sides of the head.
    """
    k = len(parents)
    if k == 0:
        raise TreeError("empty tree")
    if len(labels) != k:
        raise TreeError(f"{len(labels)} labels for {k} parent entries")
    kids = [[] for _ in range(k + 1)]
    roots = []
    for pos, head in enumerate(parents, start=1):
        if head == 0:
            roots.append(pos)
        elif not 1 <= head <= k:
            raise TreeError(f"token {pos}: head {head} out of range 0..{k}", pos)
        elif head == pos:
            raise TreeError(f"token {pos}: cycle (token is its own head)", pos)
        else:
            kids[head].append(pos)
    if not roots:
        raise TreeError("no root (no token has head 0)")
    if len(roots) > 1:
        raise TreeError(f"multiple roots at tokens {roots}", roots[1])

    # Cycles leave some tokens unreachable from the root.
    seen = {roots[0]}
    stack = [roots[0]]
    while stack:
        for c in kids[stack.pop()]:
            seen.add(c)
            stack.append(c)
    if len(seen) != k:
        stray = min(set(range(1, k + 1)) - seen)
        raise TreeError(f"token {stray}: cycle (not reachable from root)", stray)

    order = []
    stack = [(roots[0], False)]
    while stack:
        pos, expanded = stack.pop()
        if expanded:
            order.append(pos)
            continue
        stack.append((pos, True))
        for c in reversed(kids[pos]):
            stack.append((c, False))

    post = {pos: i for i, pos in enumerate(order, start=1)}
    node_parents = []
    node_children = []
    lld = []
    for pos in order:
        head = parents[pos - 1]
        node_parents.append(post[head] if head else 0)
        cs = tuple(post[c] for c in kids[pos])
        node_children.append(cs)
        lld.append(lld[cs[0] - 1] if cs else post[pos])
    return OrderedTree(
        labels=tuple(labels[pos - 1] for pos in order),
        parents=tuple(node_parents),
        children=tuple(node_children),
        lld=tuple(lld),
        positions=tuple(order),
    )


def leftmost_leaf_descendants(tree: OrderedTree) -> list:
    return list(tree.lld)


def keyroots(tree: OrderedTree) -> list:
    """Sorted keyroots: for each distinct leftmost leaf, its highest node."""
    highest = {}
    for i, leaf in enumerate(tree.lld, start=1):
        highest[leaf] = i
    return sorted(highest.values())


def is_subtree_span(tree: OrderedTree, first: int, last: int) -> bool:
    """True iff postorder nodes ``first..last`` are exactly the subtree at ``last``."""
    return tree.is_leaf(first) and tree.lld[last - 1] == first
