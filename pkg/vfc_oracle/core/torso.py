"""Torsos: how the adhesions of an ancestor and a descendant connect through the region between them."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from itertools import combinations

from vfc_oracle.core.baseline import BaselineOracle
from vfc_oracle.core.counters import OpCounters
from vfc_oracle.core.decomposition import BagGraph, TreeDecomp
from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.graph import Graph
from vfc_oracle.core.models import SmallGraphKind
from vfc_oracle.core.smallgraph import SmallGraph, bit_pairs, pair_bit, reindex
from vfc_oracle.core.tree import ShortcutIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Torso:
    upper: tuple[int, ...]  # adh of the ancestor
    lower: tuple[int, ...]  # adh of the descendant
    graph: SmallGraph


def make_torso(upper, lower, edges) -> Torso:
    upper, lower = tuple(sorted(upper)), tuple(sorted(lower))
    return Torso(upper, lower, SmallGraph.from_edges(set(upper) | set(lower), edges, SmallGraphKind.TORSO))


class Memo(dict):
    """Dictionary memo that stops growing at ``limit`` entries (0 = unbounded)."""

    def __init__(self, limit: int = 0):
        super().__init__()
        self.limit = limit

    def remember(self, key, value):
        if not self.limit or len(self) < self.limit:
            self[key] = value
        return value


def relay_pairs(size: int, adjacency: int, terminal: list[bool]) -> int:
    """Pairs of terminals joined by a path whose interior avoids terminals, as a bitset."""
    nbrs: list[list[int]] = [[] for _ in range(size)]
    for i, j in bit_pairs(adjacency, size):
        nbrs[i].append(j)
        nbrs[j].append(i)
    out = 0
    for t in range(size):
        if not terminal[t]:
            continue
        seen = {t}
        stack = [t]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w in seen:
                    continue
                seen.add(w)
                if terminal[w]:
                    if w > t:
                        out |= pair_bit(t, w, size)
                else:
                    stack.append(w)
    return out


def compose_torsos(
    t1: Torso, t2: Torso, memo: Memo | None = None, counters: OpCounters | None = None
) -> Torso:
    """torso(x, y) and torso(y, z) into torso(x, z)."""
    if t1.lower != t2.upper:
        raise ContractViolation(f"torso mismatch: {t1.lower} vs {t2.upper}")
    top, mid, bottom = set(t1.upper), set(t1.lower), set(t2.lower)
    union = sorted(top | mid | bottom)
    size = len(union)
    position = {v: i for i, v in enumerate(union)}
    roles = tuple((v in top) | (v in mid) << 1 | (v in bottom) << 2 for v in union)
    a1 = reindex(t1.graph.adjacency, t1.graph.vertices, position, size)
    a2 = reindex(t2.graph.adjacency, t2.graph.vertices, position, size)
    key = (roles, a1, a2)
    if counters is not None:
        counters.charge("memo_lookup")
    result = memo.get(key) if memo is not None else None
    if result is None:
        if counters is not None:
            counters.charge("compose", size * size)
        result = relay_pairs(size, a1 | a2, [bool(r & 5) for r in roles])
        if memo is not None:
            memo.remember(key, result)
    elif counters is not None:
        counters.charge("memo_hit")
    edges = [(union[i], union[j]) for i, j in bit_pairs(result, size)]
    return make_torso(top, bottom, edges)


def direct_torso(g: Graph, d: TreeDecomp, x: int, y: int) -> Torso:
    """torso(x, y) straight from its definition, by search in G[cone(x) - comp(y)]."""
    if x == y or not d.is_ancestor(x, y):
        raise ContractViolation(f"direct_torso({x}, {y}): {x} is not a strict ancestor of {y}")
    region = d.cone(x) - d.comp(y)
    terminals = d.adh[x] | d.adh[y]
    edges = []
    for t in terminals:
        seen = {t}
        stack = [t]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in seen or w not in region:
                    continue
                seen.add(w)
                if w in terminals:
                    edges.append((t, w))
                else:
                    stack.append(w)
    return make_torso(d.adh[x], d.adh[y], edges)


def compute_parent_child_torsos(
    d: TreeDecomp,
    bag_graphs: list[BagGraph],
    oracle_factory: Callable[[Graph, int], BaselineOracle] = BaselineOracle,
) -> dict[tuple[int, int], Torso]:
    """torso(x, z) for every tree edge, through the bag graph of x with subdivided adhesion edges.

    Failing every other torso vertex and the subdivision vertex of the z-supported edge (u, v)
    leaves exactly the paths allowed by the definition.
    """
    torsos: dict[tuple[int, int], Torso] = {}
    for x in d.nodes:
        if not d.children[x]:
            continue
        bg = bag_graphs[x]
        index = {v: i for i, v in enumerate(bg.vertices)}
        edges = [(index[u], index[w]) for u, w in bg.normal_edges()]
        subdivision: dict[tuple[int, int, int], int] = {}
        for u, v, z in bg.adhesion_edges:
            w = len(index) + len(subdivision)
            subdivision[(u, v, z)] = w
            edges.extend([(index[u], w), (index[v], w)])
        oracle = oracle_factory(Graph.from_edges(len(index) + len(subdivision), edges), 2 * d.k + 1)
        for z in d.children[x]:
            terminals = sorted(d.adh[x] | d.adh[z])
            found = []
            for u, v in combinations(terminals, 2):
                failed = [index[t] for t in terminals if t != u and t != v]
                if u in d.adh[z] and v in d.adh[z]:
                    failed.append(subdivision[(u, v, z)])
                oracle.update(failed)
                if oracle.query(index[u], index[v]):
                    found.append((u, v))
            torsos[(x, z)] = make_torso(d.adh[x], d.adh[z], found)
    logger.debug(f"computed {len(torsos)} parent-child torsos")
    return torsos


class TorsoStore:
    """Torsos on every shortcut edge, answering torso(x, y) by composing along a hop path."""

    def __init__(
        self,
        d: TreeDecomp,
        shortcuts: ShortcutIndex,
        parent_child: dict[tuple[int, int], Torso],
        memoize: bool = True,
        memo_limit: int = 0,
        counters: OpCounters | None = None,
    ):
        self.decomposition = d
        self.shortcuts = shortcuts
        self.memo: Memo | None = Memo(memo_limit) if memoize else None
        self.counters = counters
        self.stored: dict[tuple[int, int], Torso] = dict(parent_child)
        preprocessing_memo = self.memo if self.memo is not None else Memo()
        for part in shortcuts.parts:
            s = part.separator
            for v in part.below:
                p = d.parent[v]
                if p != s:
                    self.stored[(s, v)] = compose_torsos(self.stored[(s, p)], parent_child[(p, v)], preprocessing_memo)
            previous = s
            for a in part.above:
                if previous != s:
                    self.stored[(a, s)] = compose_torsos(
                        parent_child[(a, previous)], self.stored[(previous, s)], preprocessing_memo
                    )
                previous = a
        logger.debug(f"stored {len(self.stored)} torsos on {len(shortcuts.edges)} shortcut edges")

    def query(self, x: int, y: int) -> Torso:
        """torso(x, y) for a strict ancestor ``x`` of ``y``."""
        if x == y:
            raise ContractViolation(f"torso_query({x}, {y}) needs a strict ancestor")
        path = self.shortcuts.hop_path(x, y)
        if len(path) == 1:
            return self.stored[(x, y)]
        (_, s), _ = path
        return compose_torsos(self.stored[(x, s)], self.stored[(s, y)], self.memo, self.counters)
