"""Profiles, restricted bag graphs and the connectivity summaries derived from them.

Component labels are canonical: :data:`BIG` for the unique component with more than q bag
vertices, otherwise the smallest vertex id of the (fully explored) component. Any two
procedures that label the same vertex of the same restricted bag graph therefore agree.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

from vfc_oracle.core.counters import OpCounters
from vfc_oracle.core.decomposition import NORMAL, BagGraph, TreeDecomp
from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.models import SmallGraphKind
from vfc_oracle.core.smallgraph import SmallGraph, reindex
from vfc_oracle.core.torso import Memo, Torso, TorsoStore
from vfc_oracle.core.tree import TreeIndex

BIG = -1


@dataclass(frozen=True, slots=True)
class Coloring:
    col: dict[int, int]
    invcol: dict[int, int | None]

    def representative(self, v: int) -> int | None:
        """Smallest upper-adhesion vertex sharing a component with ``v``."""
        color = self.col.get(v)
        return None if color is None else self.invcol.get(color)


class RestrictedBagGraph:
    """Bag graph of a node with failed vertices removed and some adhesion edges masked."""

    __slots__ = ("bag_graph", "failed", "masked", "limit", "counters")

    def __init__(
        self,
        bag_graph: BagGraph,
        failed: frozenset[int],
        masked: frozenset[tuple[int, int, int]] = frozenset(),
        limit: int = 1,
        counters: OpCounters | None = None,
    ):
        self.bag_graph = bag_graph
        self.failed = failed
        self.masked = masked
        self.limit = limit  # q + 1
        self.counters = counters

    @property
    def owner(self) -> int:
        return self.bag_graph.owner

    def is_live(self, v: int) -> bool:
        return v not in self.failed

    def edge_present(self, u: int, w: int, label: int) -> bool:
        if w in self.failed:
            return False
        if label == NORMAL or not self.masked:
            return True
        return (min(u, w), max(u, w), label) not in self.masked

    def neighbors(self, u: int) -> Iterable[int]:
        for w, label in self.bag_graph.incident[u]:
            if self.edge_present(u, w, label):
                yield w

    def explore(self, start: int, limit: int | None = None) -> tuple[list[int], bool]:
        """BFS from ``start`` visiting at most ``limit`` vertices; reports whether it ran out."""
        limit = self.limit if limit is None else limit
        seen = {start}
        order = [start]
        queue = deque([start])
        steps = 0
        while queue and len(order) < limit:
            u = queue.popleft()
            for w in self.neighbors(u):
                steps += 1
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
                    if len(order) >= limit:
                        break
        if self.counters is not None:
            self.counters.charge("bfs_step", steps + 1)
        return order, len(order) < limit

    def label(self, v: int) -> int:
        order, exhausted = self.explore(v)
        return min(order) if exhausted else BIG


def subset_connectivity(bg: RestrictedBagGraph, vertices: Iterable[int]) -> dict[int, int]:
    """Canonical component labels of the live vertices in ``vertices``.

    Two labelled vertices are connected in the restricted bag graph iff their labels match.
    """
    labels: dict[int, int] = {}
    for v in sorted(set(vertices)):
        if v in labels or not bg.is_live(v):
            continue
        order, exhausted = bg.explore(v)
        if not exhausted:
            labels[v] = BIG
            continue
        label = min(order)
        for w in order:
            labels[w] = label
    return {v: labels[v] for v in vertices if v in labels}


def graph_of_labels(vertices: Iterable[int], labels: dict[int, int], kind: SmallGraphKind) -> SmallGraph:
    vertices = sorted(set(vertices))
    edges = [(u, v) for u, v in combinations(vertices, 2) if u in labels and v in labels and labels[u] == labels[v]]
    return SmallGraph.from_edges(vertices, edges, kind)


def representatives(labels: dict[int, int], among: Iterable[int]) -> dict[int, int]:
    """Smallest vertex of ``among`` per label."""
    out: dict[int, int] = {}
    for v in sorted(among):
        if v in labels:
            out.setdefault(labels[v], v)
    return out


def masked_edges(d: TreeDecomp, z: int, profile: SmallGraph) -> set[tuple[int, int, int]]:
    """Adhesion edges supported by an affected child that its profile does not confirm."""
    return {(u, v, z) for u, v in combinations(d.adh_order[z], 2) if not profile.has_edge(u, v)}


def build_profile_from_children(
    d: TreeDecomp,
    bag_graph: BagGraph,
    failed: frozenset[int],
    child_profiles: dict[int, SmallGraph],
    counters: OpCounters | None = None,
) -> tuple[RestrictedBagGraph, SmallGraph]:
    x = bag_graph.owner
    masked: set[tuple[int, int, int]] = set()
    for z, profile in child_profiles.items():
        masked |= masked_edges(d, z, profile)
    bg = RestrictedBagGraph(bag_graph, failed, frozenset(masked), d.k + 1, counters)
    labels = subset_connectivity(bg, d.adh_order[x])
    return bg, graph_of_labels(d.adh_order[x], labels, SmallGraphKind.PROFILE)


@dataclass(slots=True)
class CombineResult:
    profile: SmallGraph
    coloring: Coloring


def combine_profile_torso(
    p: SmallGraph,
    t: Torso,
    failed: frozenset[int],
    memo: Memo | None = None,
    counters: OpCounters | None = None,
) -> CombineResult:
    """profile(y) and torso(x, y) into profile(x) plus a coloring of adh(x) and adh(y).

    Colors are the smallest vertex of each component of the union; ``invcol`` maps a color to
    the smallest adh(x) vertex in it, if any.
    """
    if set(p.vertices) != set(t.lower):
        raise ContractViolation(f"profile on {p.vertices} does not match torso bottom {t.lower}")
    union = t.graph.vertices
    size = len(union)
    position = {v: i for i, v in enumerate(union)}
    upper = set(t.upper)
    roles = tuple((v in upper) | (v in failed) << 1 for v in union)
    profile_bits = reindex(p.adjacency, p.vertices, position, size)
    key = (roles, t.graph.adjacency, profile_bits)
    if counters is not None:
        counters.charge("memo_lookup")
    components = memo.get(key) if memo is not None else None
    if components is None:
        if counters is not None:
            counters.charge("combine", size * size)
        components = _component_indices(size, t.graph.adjacency | profile_bits, [bool(r & 2) for r in roles])
        if memo is not None:
            memo.remember(key, components)
    elif counters is not None:
        counters.charge("memo_hit")

    col: dict[int, int] = {}
    invcol: dict[int, int | None] = {}
    for i, c in enumerate(components):
        if c < 0:
            continue
        color = union[c]
        col[union[i]] = color
        invcol.setdefault(color, None)
        if union[i] in upper and invcol[color] is None:
            invcol[color] = union[i]
    profile = graph_of_labels(t.upper, {v: col[v] for v in t.upper if v in col}, SmallGraphKind.PROFILE)
    return CombineResult(profile, Coloring(col, invcol))


def _component_indices(size: int, adjacency: int, dead: list[bool]) -> tuple[int, ...]:
    """Per index, the smallest index of its component among live indices (-1 when dead)."""
    parent = list(range(size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(size):
        row = adjacency >> (i * size)
        if not row:
            break
        if dead[i]:
            continue
        for j in range(i + 1, size):
            if row >> j & 1 and not dead[j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    return tuple(-1 if dead[i] else find(i) for i in range(size))


def lift_profile_to_affected_child(
    z: int,
    y: int,
    profile_y: SmallGraph,
    torsos: TorsoStore,
    failed: frozenset[int],
    memo: Memo | None = None,
    counters: OpCounters | None = None,
) -> CombineResult:
    """profile(z) from the topmost important node y below it."""
    return combine_profile_torso(profile_y, torsos.query(z, y), failed, memo, counters)


@dataclass(slots=True)
class ImportantProfiles:
    """Profiles of the important nodes and of the affected children hanging above them."""

    profiles: dict[int, SmallGraph] = field(default_factory=dict)
    restricted: dict[int, RestrictedBagGraph] = field(default_factory=dict)
    affected_children: dict[int, list[int]] = field(default_factory=dict)


def compute_important_profiles(
    d: TreeDecomp,
    index: TreeIndex,
    bag_graphs: list[BagGraph],
    torsos: TorsoStore,
    important: list[int],
    important_parent: dict[int, int],
    failed: frozenset[int],
    memo: Memo | None = None,
    counters: OpCounters | None = None,
) -> ImportantProfiles:
    """Bottom-up over the contracted tree of important nodes."""
    out = ImportantProfiles()
    below: dict[int, list[int]] = {y: [] for y in important}
    for y in important:
        if important_parent.get(y, -1) != -1:
            below[important_parent[y]].append(y)
    for x in sorted(important, key=lambda y: (-index.depth[y], y)):
        child_profiles: dict[int, SmallGraph] = {}
        for y in sorted(below[x]):
            z = index.dir(x, y)
            if z == y:
                profile = out.profiles[y]
            else:
                profile = lift_profile_to_affected_child(z, y, out.profiles[y], torsos, failed, memo, counters).profile
            out.profiles[z] = profile
            child_profiles[z] = profile
        bg, profile_x = build_profile_from_children(d, bag_graphs[x], failed, child_profiles, counters)
        out.restricted[x] = bg
        out.profiles[x] = profile_x
        out.affected_children[x] = sorted(child_profiles)
    return out


def compute_adhconn(d: TreeDecomp, bg: RestrictedBagGraph, affected: Iterable[int]) -> tuple[SmallGraph, Coloring]:
    """Connectivity among the adhesions of a node and of its affected children."""
    x = bg.owner
    vertices = set(d.adh[x])
    for z in affected:
        vertices |= d.adh[z]
    labels = subset_connectivity(bg, vertices)
    invcol: dict[int, int | None] = dict.fromkeys(labels.values())
    invcol.update(representatives(labels, d.adh[x]))
    return graph_of_labels(vertices, labels, SmallGraphKind.ADHCONN), Coloring(labels, invcol)
