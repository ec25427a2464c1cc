"""Separation search shared by the builder and the certifier."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import combinations
from math import comb

import networkx as nx

from vfc_oracle.core.exceptions import DecompositionBudgetExceeded
from vfc_oracle.core.graph import Graph

# Separator count above which the seeded search replaces full enumeration.
EXHAUSTIVE_LIMIT = 200_000


class WorkMeter:
    def __init__(self, limit: int, what: str):
        self.limit = limit
        self.what = what
        self.used = 0

    def charge(self, amount: int) -> None:
        self.used += amount
        if self.used > self.limit:
            raise DecompositionBudgetExceeded(f"{self.what} exceeded its work limit of {self.limit}")


@dataclass(frozen=True, slots=True)
class Piece:
    """A component of ``G[cone] - S``."""

    members: tuple[int, ...]
    weight: int  # bag vertices inside
    touches: bool  # contains a vertex of the protected set


def restricted_adjacency(g: Graph, vertices: frozenset[int]) -> dict[int, tuple[int, ...]]:
    return {v: tuple(w for w in g.adjacency[v] if w in vertices) for v in sorted(vertices)}


def separator_candidates(adj: dict[int, tuple[int, ...]]) -> list[int]:
    # A vertex of degree <= 1 never belongs to a minimal separator.
    return [v for v, nbrs in adj.items() if len(nbrs) >= 2]


def iter_separators(candidates: list[int], k: int) -> Iterator[tuple[int, ...]]:
    """Separators by size, then lexicographically."""
    for size in range(1, min(k, len(candidates)) + 1):
        yield from combinations(candidates, size)


def separator_count(candidates: int, k: int) -> int:
    return sum(comb(candidates, size) for size in range(1, min(k, candidates) + 1))


def split_pieces(
    adj: dict[int, tuple[int, ...]],
    separator: tuple[int, ...],
    bag: frozenset[int],
    protected: frozenset[int] = frozenset(),
) -> list[Piece]:
    removed = set(separator)
    seen: set[int] = set(removed)
    pieces = []
    for start in adj:
        if start in seen:
            continue
        seen.add(start)
        members = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    members.append(w)
                    queue.append(w)
        pieces.append(
            Piece(
                tuple(members),
                sum(1 for v in members if v in bag),
                any(v in protected for v in members),
            )
        )
    return pieces


def subset_sums(weights: list[int]) -> int:
    """Bitset of achievable sums of sub-multisets of ``weights``."""
    reach = 1
    for w in weights:
        reach |= reach << w
    return reach


def best_split(weights: list[int]) -> int:
    """Largest ``min(s, total - s)`` over groupings of the pieces into two sides."""
    total = sum(weights)
    reach = subset_sums(weights)
    for s in range(total // 2, -1, -1):
        if reach >> s & 1:
            return s
    return 0


def choose_subset(weights: list[int], lo: int, hi: int) -> list[int] | None:
    """Indices of a subset with the largest achievable sum in ``[lo, hi]``."""
    layers = [1]
    for w in weights:
        layers.append(layers[-1] | layers[-1] << w)
    target = next((s for s in range(hi, lo - 1, -1) if layers[-1] >> s & 1), None)
    if target is None:
        return None
    chosen = []
    for i in range(len(weights), 0, -1):
        if not layers[i - 1] >> target & 1:
            chosen.append(i - 1)
            target -= weights[i - 1]
    return sorted(chosen)


def breaks(adj: dict[int, tuple[int, ...]], separator: Iterable[int], bag: frozenset[int], q: int) -> bool:
    """Whether removing ``separator`` leaves more than ``q`` bag vertices on two sides."""
    return best_split([p.weight for p in split_pieces(adj, tuple(separator), bag)]) > q


def iter_witnesses(
    adj: dict[int, tuple[int, ...]],
    bag: frozenset[int],
    q: int,
    k: int,
    meter: WorkMeter,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> Iterator[tuple[int, ...]]:
    """Nonempty separators of size <= k that break ``bag`` inside the connected cone ``adj``.

    Full enumeration reports them by size, then lexicographically. Cones with more than
    ``exhaustive_limit`` candidate separators go through :func:`seeded_witnesses` instead, which
    reports them in discovery order. Either search is complete; the meter bounds both.
    """
    if len(bag) <= 2 * q + 1:
        return
    candidates = separator_candidates(adj)
    if separator_count(len(candidates), k) > exhaustive_limit:
        yield from seeded_witnesses(adj, bag, q, k, meter)
        return
    for separator in iter_separators(candidates, k):
        meter.charge(len(adj))
        if breaks(adj, separator, bag, q):
            yield separator


def seeded_witnesses(
    adj: dict[int, tuple[int, ...]], bag: frozenset[int], q: int, k: int, meter: WorkMeter
) -> Iterator[tuple[int, ...]]:
    """Breaking separators assembled from minimal separators between seed pairs.

    A separator of size <= k misses one of the first k+1 bag vertices, and some other bag vertex
    lies on the far side from it, so a minimal separator between that seed and that vertex sits
    inside every witness. Seed pairs are searched first. A minimal separator that does not break
    the bag by itself is extended, one level at a time, by minimal separators between vertices of
    a component it leaves behind.
    """
    h = nx.Graph()
    h.add_nodes_from(adj)
    h.add_edges_from((u, w) for u, nbrs in adj.items() for w in nbrs if u < w)
    tried: set[frozenset[int]] = set()
    level: list[tuple[frozenset[int], Iterable[tuple[int, int]]]] = [(frozenset(), _seed_pairs(h, bag, k))]
    while level:
        deeper: list[frozenset[int]] = []
        for removed, pairs in level:
            view = nx.restricted_view(h, removed, []) if removed else h
            for u, v in pairs:
                for cut in minimal_separators(view, u, v, k - len(removed), meter, len(adj)):
                    separator = removed | cut
                    if separator in tried:
                        continue
                    tried.add(separator)
                    meter.charge(len(adj))
                    if breaks(adj, separator, bag, q):
                        yield tuple(sorted(separator))
                    elif len(separator) < k:
                        deeper.append(separator)
        level = [(removed, _inner_pairs(h, removed)) for removed in deeper]


def _seed_pairs(h: nx.Graph, bag: frozenset[int], k: int) -> Iterator[tuple[int, int]]:
    """Seed to bag-vertex pairs, farthest partners first."""
    seeds = sorted(bag)[: k + 1]
    for p in seeds:
        distance = nx.single_source_shortest_path_length(h, p)
        for v in sorted(bag, key=lambda v: (-distance.get(v, 0), v)):
            if v == p or (v in seeds and v < p) or h.has_edge(p, v):
                continue
            yield p, v


def _inner_pairs(h: nx.Graph, removed: frozenset[int]) -> Iterator[tuple[int, int]]:
    view = nx.restricted_view(h, removed, [])
    for members in sorted((sorted(c) for c in nx.connected_components(view)), key=lambda c: c[0]):
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                if not view.has_edge(u, v):
                    yield u, v


def minimal_separators(
    h: nx.Graph, u: int, v: int, budget: int, meter: WorkMeter, cost: int
) -> Iterator[frozenset[int]]:
    """Inclusion-minimal u-v vertex separators of size at most ``budget``.

    Every such separator meets each u-v path, so branching on the inner vertices of a shortest
    path reaches all of them within ``budget`` levels.
    """
    found: set[frozenset[int]] = set()
    visited: set[frozenset[int]] = set()
    stack: list[frozenset[int]] = [frozenset()]
    while stack:
        cut = stack.pop()
        if cut in visited:
            continue
        visited.add(cut)
        meter.charge(cost)
        route = _route(h, cut, u, v)
        if route is None:
            minimal = _trim(h, cut, u, v)
            if minimal not in found:
                found.add(minimal)
                yield minimal
        elif len(cut) < budget:
            stack.extend(cut | {x} for x in reversed(route[1:-1]))


def _route(h: nx.Graph, cut: frozenset[int], u: int, v: int) -> list[int] | None:
    try:
        return nx.shortest_path(nx.restricted_view(h, cut, []), u, v)
    except nx.NetworkXNoPath:
        return None


def _trim(h: nx.Graph, cut: frozenset[int], u: int, v: int) -> frozenset[int]:
    kept = set(cut)
    for x in sorted(cut):
        if _route(h, frozenset(kept - {x}), u, v) is None:
            kept.discard(x)
    return frozenset(kept)
