"""Desk-scale construction of unbreakable tree decompositions.

Each node starts from its cone C (a connected piece plus the adhesion W it hangs from). Its bag
starts as C and loses W-free pieces cut off by breaking separators until no separator of order
<= k leaves more than k bag vertices on two sides. A carve is kept only when every component of
the carved region still sees at most k bag vertices, so child adhesions stay within budget.

Carves are explored depth first. A cone that runs out of carves hands the failure back to its
parent, which moves on to its next certified bag. Construction aborts when the root runs out or
the work meter trips; it never emits a bag it could not certify.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass, field
from itertools import chain

from vfc_oracle.core.decomposition.separations import (
    EXHAUSTIVE_LIMIT,
    WorkMeter,
    choose_subset,
    iter_witnesses,
    restricted_adjacency,
    split_pieces,
)
from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp
from vfc_oracle.core.exceptions import ContractViolation, DecompositionBudgetExceeded
from vfc_oracle.core.graph import Graph

logger = logging.getLogger(__name__)

Cone = tuple[frozenset[int], frozenset[int]]


@dataclass(slots=True)
class _Node:
    bag: frozenset[int]
    children: list[_Node]


@dataclass(slots=True)
class _Frame:
    cone: frozenset[int]
    adhesion: frozenset[int]
    options: Iterator[frozenset[int]]
    bag: frozenset[int] | None = None
    pending: list[Cone] = field(default_factory=list)
    built: list[_Node] = field(default_factory=list)


def build_unbreakable_decomposition(
    g: Graph, k: int, work_limit: int = 5_000_000, exhaustive_limit: int = EXHAUSTIVE_LIMIT
) -> TreeDecomp:
    if k < 1:
        raise ContractViolation(f"failure budget must be at least 1, got {k}")
    builder = _Builder(g, k, WorkMeter(work_limit, "decomposition builder"), exhaustive_limit)

    components = g.components()
    virtual_root = len(components) != 1
    tops = []
    for members in components:
        node = builder.decompose(frozenset(members))
        if node is None:
            raise DecompositionBudgetExceeded(
                f"no (k, k)-unbreakable decomposition found for the component of vertex {min(members)} "
                f"with k={k} (work {builder.meter.used})"
            )
        tops.append(node)

    parent: list[int] = []
    bags: list[frozenset[int]] = []
    queue: deque[tuple[_Node, int]] = deque()
    if virtual_root:
        parent.append(-1)
        bags.append(frozenset())
        queue.extend((node, 0) for node in tops)
    else:
        queue.append((tops[0], -1))
    while queue:
        node, p = queue.popleft()
        x = len(parent)
        parent.append(p)
        bags.append(node.bag)
        queue.extend((child, x) for child in node.children)

    d = TreeDecomp(g.n, k, parent, bags, virtual_root)
    max_bag = max((len(b) for b in d.bag), default=0)
    logger.info(
        f"decomposition: {len(d)} nodes, height {d.height}, max bag {max_bag}, "
        f"max adhesion {d.max_adhesion}, {builder.backtracks} backtracks (work {builder.meter.used})"
    )
    return d


class _Builder:
    def __init__(self, g: Graph, k: int, meter: WorkMeter, exhaustive_limit: int):
        self.g = g
        self.k = k
        self.meter = meter
        self.exhaustive_limit = exhaustive_limit
        self.backtracks = 0
        self.dead: set[Cone] = set()

    def decompose(self, cone: frozenset[int]) -> _Node | None:
        """Certified subtree for a connected cone without adhesion, or None when none was found.

        Runs on an explicit stack; a child that fails sends its parent to the parent's next bag.
        """
        stack = [self._frame(cone, frozenset())]
        result: _Node | None = None
        returning = False
        while stack:
            top = stack[-1]
            if returning:
                returning = False
                if result is None:
                    self.backtracks += 1
                    top.bag = None
                else:
                    top.built.append(result)
            if top.bag is None:
                bag = next(top.options, None)
                if bag is None:
                    self.dead.add((top.cone, top.adhesion))
                    stack.pop()
                    result, returning = None, True
                    continue
                top.bag = bag
                regions = _regions(self.g, top.cone - bag, bag)
                top.pending = [(piece | boundary, boundary) for piece, boundary in reversed(regions)]
                top.built = []
            if top.pending:
                child = top.pending.pop()
                if child in self.dead:
                    self.backtracks += 1
                    top.bag = None
                else:
                    stack.append(self._frame(*child))
                continue
            stack.pop()
            result, returning = _Node(top.bag, top.built), True
        return result

    def _frame(self, cone: frozenset[int], adhesion: frozenset[int]) -> _Frame:
        return _Frame(cone, adhesion, self._bags(cone, adhesion))

    def _bags(self, cone: frozenset[int], adhesion: frozenset[int]) -> Iterator[frozenset[int]]:
        """Certified bags of a cone, in the order the carve search reaches them."""
        adj = restricted_adjacency(self.g, cone)
        seen: set[frozenset[int]] = set()
        stack: list[Iterator[frozenset[int]]] = [iter((cone,))]
        while stack:
            bag = next(stack[-1], None)
            if bag is None:
                stack.pop()
                continue
            if bag in seen:
                continue
            seen.add(bag)
            witnesses = iter_witnesses(adj, bag, self.k, self.k, self.meter, self.exhaustive_limit)
            first = next(witnesses, None)
            if first is None:
                yield bag
            else:
                stack.append(self._carves(adj, cone, bag, adhesion, chain((first,), witnesses)))

    def _carves(
        self,
        adj: dict[int, tuple[int, ...]],
        cone: frozenset[int],
        bag: frozenset[int],
        adhesion: frozenset[int],
        witnesses: Iterator[tuple[int, ...]],
    ) -> Iterator[frozenset[int]]:
        """Smaller bags cut along each witness: a balanced union of W-free pieces, then single pieces."""
        k = self.k
        offered: set[frozenset[int]] = set()
        for separator in witnesses:
            pieces = split_pieces(adj, separator, bag, adhesion)
            total = sum(p.weight for p in pieces)
            free = sorted((p for p in pieces if p.weight and not p.touches), key=lambda p: -p.weight)
            groups = [[p] for p in free]
            chosen = choose_subset([p.weight for p in free], k + 1, total - (k + 1))
            if chosen is not None:
                groups.insert(0, [free[i] for i in chosen])
            for group in groups:
                smaller = bag.difference(v for p in group for v in p.members)
                if smaller in offered or not smaller - adhesion:
                    continue
                offered.add(smaller)
                self.meter.charge(len(cone))
                if _carve_keeps_adhesion(adj, cone - smaller, k):
                    yield smaller


def _regions(g: Graph, region: frozenset[int], bag: frozenset[int]) -> list[Cone]:
    """Components of ``G[region]`` with their neighborhoods in the bag, ordered by smallest vertex."""
    seen: set[int] = set()
    out = []
    for start in sorted(region):
        if start in seen:
            continue
        seen.add(start)
        members, boundary = {start}, set()
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in region:
                    if w not in seen:
                        seen.add(w)
                        members.add(w)
                        queue.append(w)
                elif w in bag:
                    boundary.add(w)
        out.append((frozenset(members), frozenset(boundary)))
    return out


def _carve_keeps_adhesion(adj: dict[int, tuple[int, ...]], region: frozenset[int], k: int) -> bool:
    seen: set[int] = set()
    for start in region:
        if start in seen:
            continue
        seen.add(start)
        boundary: set[int] = set()
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in region:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
                else:
                    boundary.add(w)
        if len(boundary) > k:
            return False
    return True
