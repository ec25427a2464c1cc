from __future__ import annotations

import logging
from collections import deque

from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp, renumber
from vfc_oracle.core.graph import Graph

logger = logging.getLogger(__name__)


class _Draft:
    """Mutable keyed copy of a decomposition; keys of copies sort after their originals."""

    def __init__(self, d: TreeDecomp):
        self.parent: dict[tuple, tuple] = {}
        self.bag: dict[tuple, set[int]] = {}
        self.root: tuple = (0,)
        for x in d.nodes:
            key = (x,)
            self.bag[key] = set(d.bag[x])
            if x != 0:
                self.parent[key] = (d.parent[x],)

    def children(self) -> dict[tuple, list[tuple]]:
        out: dict[tuple, list[tuple]] = {x: [] for x in self.bag}
        for x, p in self.parent.items():
            out[p].append(x)
        for c in out.values():
            c.sort()
        return out

    def order(self, children: dict[tuple, list[tuple]]) -> list[tuple]:
        order = [self.root]
        for x in order:
            order.extend(children[x])
        return order

    def subtree(self, x: tuple, children: dict[tuple, list[tuple]]) -> list[tuple]:
        out = [x]
        for y in out:
            out.extend(children[y])
        return out

    def cone(self, x: tuple, children: dict[tuple, list[tuple]]) -> set[int]:
        cone: set[int] = set()
        for y in self.subtree(x, children):
            cone |= self.bag[y]
        return cone


def _pieces(g: Graph, vertices: set[int]) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for start in sorted(vertices):
        if start in seen:
            continue
        seen.add(start)
        piece = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in vertices and w not in seen:
                    seen.add(w)
                    piece.add(w)
                    queue.append(w)
        out.append(piece)
    return out


def _step(draft: _Draft, g: Graph) -> bool:
    """Apply the first applicable repair in breadth-first order. Returns whether anything changed."""
    children = draft.children()
    for x in draft.order(children)[1:]:
        p = draft.parent[x]
        adh = draft.bag[x] & draft.bag[p]
        subtree = draft.subtree(x, children)
        cone = draft.cone(x, children)
        comp = cone - adh

        if not draft.bag[x] - adh:
            for c in children[x]:
                draft.parent[c] = p
            del draft.parent[x], draft.bag[x]
            return True

        useless = {u for u in adh if not any(w in comp for w in g.adjacency[u])}
        if useless:
            for y in subtree:
                draft.bag[y] -= useless
            return True

        pieces = _pieces(g, comp)
        if len(pieces) > 1:
            for i, piece in enumerate(pieces):
                keep = piece | adh
                for y in subtree:
                    copy = y + (i,)
                    draft.bag[copy] = draft.bag[y] & keep
                    draft.parent[copy] = p if y == x else draft.parent[y] + (i,)
            for y in subtree:
                del draft.parent[y], draft.bag[y]
            return True
    return False


def regularize(d: TreeDecomp, g: Graph) -> TreeDecomp:
    """Contract empty margins, split disconnected components and drop unwired adhesion vertices."""
    draft = _Draft(d)
    steps = 0
    while _step(draft, g):
        steps += 1
    if steps == 0:
        return d
    logger.debug(f"regularize applied {steps} repairs")
    return renumber(
        d.n,
        d.k,
        draft.parent,
        {x: frozenset(b) for x, b in draft.bag.items()},
        draft.root,
        d.virtual_root,
    )
