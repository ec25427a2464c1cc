from __future__ import annotations

from collections.abc import Sequence
from functools import cached_property


class TreeDecomp:
    """Rooted tree decomposition.

    Node ids are ``0..len-1`` in breadth-first order, so every parent id is smaller than its
    children's ids. Builder output keeps every bag (k, k)-unbreakable in G[cone(x)].
    """

    def __init__(
        self,
        n: int,
        k: int,
        parent: Sequence[int],
        bags: Sequence[frozenset[int]],
        virtual_root: bool = False,
    ):
        if not parent or parent[0] != -1:
            raise ValueError("node 0 must be the root")
        self.n = n
        self.k = k
        self.parent: tuple[int, ...] = tuple(parent)
        self.bag: tuple[frozenset[int], ...] = tuple(frozenset(b) for b in bags)
        self.virtual_root = virtual_root
        self.root = 0

        children: list[list[int]] = [[] for _ in self.parent]
        depth = [0] * len(self.parent)
        for x in range(1, len(self.parent)):
            p = self.parent[x]
            if not 0 <= p < x:
                raise ValueError(f"node {x} has parent {p}; parents must precede children")
            children[p].append(x)
            depth[x] = depth[p] + 1
        self.children: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in children)
        self.depth: tuple[int, ...] = tuple(depth)

        self.adh: tuple[frozenset[int], ...] = tuple(
            frozenset() if x == 0 else self.bag[x] & self.bag[self.parent[x]] for x in range(len(self.parent))
        )
        self.mrg: tuple[frozenset[int], ...] = tuple(b - a for b, a in zip(self.bag, self.adh))

        home = [-1] * n
        for x in range(len(self.parent)):
            for v in self.mrg[x]:
                if home[v] == -1:
                    home[v] = x
        self.vertex_home: tuple[int, ...] = tuple(home)

        # Sorted tuples for deterministic iteration.
        self.bag_order: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(b)) for b in self.bag)
        self.adh_order: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in self.adh)

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def nodes(self) -> range:
        return range(len(self.parent))

    @property
    def height(self) -> int:
        return max(self.depth, default=0)

    @property
    def max_adhesion(self) -> int:
        return max((len(a) for a in self.adh), default=0)

    @cached_property
    def cones(self) -> tuple[frozenset[int], ...]:
        cones: list[frozenset[int]] = list(self.bag)
        for x in reversed(range(1, len(self.parent))):
            p = self.parent[x]
            cones[p] = cones[p] | cones[x]
        return tuple(cones)

    def cone(self, x: int) -> frozenset[int]:
        return self.cones[x]

    def comp(self, x: int) -> frozenset[int]:
        return self.cones[x] - self.adh[x]

    def subtree(self, x: int) -> list[int]:
        out, stack = [], [x]
        while stack:
            y = stack.pop()
            out.append(y)
            stack.extend(reversed(self.children[y]))
        return out

    def is_ancestor(self, x: int, y: int) -> bool:
        """Naive check, ``x`` ancestor of ``y`` (inclusive)."""
        while self.depth[y] > self.depth[x]:
            y = self.parent[y]
        return x == y

    def same_shape(self, other: TreeDecomp) -> bool:
        return self.parent == other.parent and self.bag == other.bag

    def __repr__(self):
        return f"TreeDecomp(nodes={len(self)}, height={self.height}, k={self.k})"


def renumber(
    n: int,
    k: int,
    parent: dict[int, int],
    bags: dict[int, frozenset[int]],
    root: int,
    virtual_root: bool = False,
) -> TreeDecomp:
    """Build a :class:`TreeDecomp` from keyed nodes, renumbering breadth-first.

    Siblings keep the order of their keys.
    """
    children: dict[int, list[int]] = {x: [] for x in bags}
    for x, p in parent.items():
        if x != root:
            children[p].append(x)
    order = [root]
    for x in order:
        order.extend(sorted(children[x]))
    index = {x: i for i, x in enumerate(order)}
    return TreeDecomp(
        n,
        k,
        [-1] + [index[parent[x]] for x in order[1:]],
        [bags[x] for x in order],
        virtual_root,
    )
