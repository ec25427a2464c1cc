"""Patch sets over bag graphs and the per-update state built on them.

A patch set carves a bag into connected pieces by breadth-first search capped at q+1
vertices. Capped pieces are big; the leftovers are small and, by construction, border only
big patches. A small patch records its normal neighbors (truncated) and its adhesion
neighbors with edge multiplicities, so a masked adhesion edge only decrements a counter.
"""

from __future__ import annotations

import hashlib
import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

from vfc_oracle.core.counters import OpCounters
from vfc_oracle.core.decomposition import NORMAL, BagGraph, TreeDecomp
from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.models import SmallGraphKind
from vfc_oracle.core.profile import (
    BIG,
    Coloring,
    RestrictedBagGraph,
    graph_of_labels,
    masked_edges,
    representatives,
    subset_connectivity,
)
from vfc_oracle.core.smallgraph import SmallGraph
from vfc_oracle.core.torso import Memo

logger = logging.getLogger(__name__)


def adhesion_neighbor_limit(k: int) -> int:
    # Masked edges remove at most k * C(k, 2) entries and at most k entries are failed.
    return k**3 + k + 1


@dataclass(slots=True)
class PatchSet:
    owner: int
    patches: list[tuple[int, ...]]
    big: list[bool]
    patch_of: dict[int, int]
    normal_neighbors: list[tuple[int, ...]]
    adhesion_neighbors: list[dict[int, int]]


def build_patch_set(bg: BagGraph, limit: int, adhesion_limit: int) -> PatchSet:
    patches: list[tuple[int, ...]] = []
    big: list[bool] = []
    patch_of: dict[int, int] = {}
    for start in bg.vertices:
        if start in patch_of:
            continue
        pid = len(patches)
        patch_of[start] = pid
        members = [start]
        queue = deque([start])
        while queue and len(members) < limit:
            u = queue.popleft()
            for w, _ in bg.incident[u]:
                if w not in patch_of:
                    patch_of[w] = pid
                    members.append(w)
                    queue.append(w)
                    if len(members) >= limit:
                        break
        patches.append(tuple(members))
        big.append(len(members) >= limit)

    normal_neighbors: list[tuple[int, ...]] = []
    adhesion_neighbors: list[dict[int, int]] = []
    for pid, members in enumerate(patches):
        if big[pid]:
            normal_neighbors.append(())
            adhesion_neighbors.append({})
            continue
        inside = set(members)
        normal: set[int] = set()
        counts: dict[int, int] = {}
        for u in members:
            for w, label in bg.incident[u]:
                if w in inside:
                    continue
                if label == NORMAL:
                    normal.add(w)
                else:
                    counts[w] = counts.get(w, 0) + 1
        normal_neighbors.append(tuple(sorted(normal)[:limit]))
        adhesion_neighbors.append({w: counts[w] for w in sorted(counts)[:adhesion_limit]})
    return PatchSet(bg.owner, patches, big, patch_of, normal_neighbors, adhesion_neighbors)


def build_patch_sets(d: TreeDecomp, bag_graphs: list[BagGraph]) -> list[PatchSet]:
    """One patch set per node, with patch size capped at k + 1."""
    limit = adhesion_neighbor_limit(d.k)
    return [build_patch_set(bag_graphs[x], d.k + 1, limit) for x in d.nodes]


class NeighborJournal:
    """Saved adhesion-neighbor dictionaries of patches mutated in place during an update."""

    def __init__(self):
        self._saved: dict[tuple[int, int], dict[int, int]] = {}

    def save(self, ps: PatchSet, pid: int) -> None:
        self._saved.setdefault((ps.owner, pid), dict(ps.adhesion_neighbors[pid]))

    def rollback(self, patch_sets: list[PatchSet]) -> int:
        restored = len(self._saved)
        for (x, pid), saved in self._saved.items():
            patch_sets[x].adhesion_neighbors[pid] = saved
        self._saved.clear()
        return restored

    def __len__(self) -> int:
        return len(self._saved)


@dataclass(slots=True)
class TouchState:
    """Touched patches of one node with canonical labels for their live vertices.

    ``overrides`` holds copy-on-write adhesion-neighbor dictionaries; without it the patch
    set's own (journaled) dictionaries are current.
    """

    touched: frozenset[int] = frozenset()
    labels: dict[int, int] = field(default_factory=dict)
    overrides: dict[int, dict[int, int]] | None = None

    def adhesion_neighbors(self, ps: PatchSet, pid: int) -> dict[int, int]:
        if self.overrides is not None and pid in self.overrides:
            return self.overrides[pid]
        return ps.adhesion_neighbors[pid]


def compute_touched_patches(
    ps: PatchSet,
    bg: RestrictedBagGraph,
    journal: NeighborJournal | None = None,
) -> TouchState:
    """Touched patches and decremented adhesion-neighbor counters.

    With a journal the patch set is mutated in place; otherwise changes go to overrides.
    """
    touched = {ps.patch_of[v] for v in bg.failed if v in ps.patch_of}
    state = TouchState(overrides=None if journal is not None else {})
    for u, v, _ in sorted(bg.masked):
        pu, pv = ps.patch_of[u], ps.patch_of[v]
        if pu == pv:
            touched.add(pu)
            continue
        for pid, other in ((pu, v), (pv, u)):
            if ps.big[pid]:
                continue
            if journal is not None:
                journal.save(ps, pid)
                counts = ps.adhesion_neighbors[pid]
            else:
                if pid not in state.overrides:
                    state.overrides[pid] = dict(ps.adhesion_neighbors[pid])
                counts = state.overrides[pid]
            if other in counts:
                counts[other] -= 1
                if counts[other] == 0:
                    del counts[other]
    state.touched = frozenset(touched)
    return state


def precompute_patch_connectivity(ps: PatchSet, bg: RestrictedBagGraph, state: TouchState) -> TouchState:
    """Canonical labels of every live vertex in a touched patch."""
    vertices = [v for pid in sorted(state.touched) for v in ps.patches[pid] if bg.is_live(v)]
    state.labels = subset_connectivity(bg, vertices)
    return state


def patch_label(ps: PatchSet, bg: RestrictedBagGraph, state: TouchState, w: int) -> int:
    """Canonical label of a live bag vertex from the patch structure alone."""
    counters = bg.counters
    if counters is not None:
        counters.charge("color_read")
    pid = ps.patch_of[w]
    if pid in state.touched:
        return state.labels[w]
    if ps.big[pid]:
        return BIG
    candidates = [u for u in ps.normal_neighbors[pid] if bg.is_live(u)]
    if not candidates:
        candidates = [u for u in state.adhesion_neighbors(ps, pid) if bg.is_live(u)]
    if counters is not None:
        counters.charge("color_read", len(ps.normal_neighbors[pid]))
    if not candidates:
        return min(ps.patches[pid])
    u = candidates[0]
    if ps.patch_of[u] in state.touched:
        return state.labels[u]
    return BIG


@dataclass(slots=True)
class SingleChildEntry:
    """Everything needed to label bag vertices of a node whose only affected child is fixed."""

    bg: RestrictedBagGraph
    state: TouchState | None
    adhesion_labels: dict[int, int]
    coloring: Coloring
    profile: SmallGraph

    def in_big(self) -> list[int]:
        return sorted(v for v, label in self.adhesion_labels.items() if label == BIG)

    def small_colors(self) -> dict[int, int]:
        return {v: label for v, label in self.adhesion_labels.items() if label != BIG}


class SingleChildTables:
    """Memoized single-child-failure lookups keyed by node, child profile and failed adhesion."""

    def __init__(
        self,
        d: TreeDecomp,
        bag_graphs: list[BagGraph],
        patch_sets: list[PatchSet] | None,
        memoize: bool = True,
        memo_limit: int = 0,
        counters: OpCounters | None = None,
    ):
        self.decomposition = d
        self.bag_graphs = bag_graphs
        self.patch_sets = patch_sets
        self.memo: Memo | None = Memo(memo_limit) if memoize else None
        self.counters = counters

    def entry(self, x: int, z: int, profile_z: SmallGraph, failed: Iterable[int]) -> SingleChildEntry:
        d = self.decomposition
        if d.parent[z] != x:
            raise ContractViolation(f"node {z} is not a child of {x}")
        local_failed = frozenset(v for v in failed if v in d.bag[x])
        if local_failed - d.adh[x]:
            raise ContractViolation(f"node {x} holds a failed margin vertex")
        key = (x, z, profile_z.adjacency, tuple(v in local_failed for v in d.adh_order[x]))
        if self.counters is not None:
            self.counters.charge("memo_lookup")
        if self.memo is not None and key in self.memo:
            if self.counters is not None:
                self.counters.charge("memo_hit")
            return self.memo[key]

        bg = RestrictedBagGraph(
            self.bag_graphs[x], local_failed, frozenset(masked_edges(d, z, profile_z)), d.k + 1, None
        )
        labels = subset_connectivity(bg, d.adh_order[x])
        state = None
        if self.patch_sets is not None:
            ps = self.patch_sets[x]
            state = precompute_patch_connectivity(ps, bg, compute_touched_patches(ps, bg))
        invcol: dict[int, int | None] = dict.fromkeys(labels.values())
        invcol.update(representatives(labels, d.adh[x]))
        entry = SingleChildEntry(
            bg=bg,
            state=state,
            adhesion_labels=labels,
            coloring=Coloring(labels, invcol),
            profile=graph_of_labels(d.adh_order[x], labels, SmallGraphKind.PROFILE),
        )
        if self.memo is not None:
            self.memo.remember(key, entry)
        return entry

    def label(self, entry: SingleChildEntry, u: int) -> int:
        if u in entry.adhesion_labels:
            return entry.adhesion_labels[u]
        entry.bg.counters = self.counters
        if entry.state is None:
            label = entry.bg.label(u)
        else:
            label = patch_label(self.patch_sets[entry.bg.owner], entry.bg, entry.state, u)
        entry.bg.counters = None
        return label

    def query(self, x: int, z: int, profile_z: SmallGraph, failed: Iterable[int], u: int) -> tuple[SingleChildEntry, int]:
        """(entry, canonical label of u) for node x whose single affected child is z."""
        entry = self.entry(x, z, profile_z, failed)
        return entry, self.label(entry, u)


def checksum(patch_sets: list[PatchSet]) -> str:
    """Digest of every adhesion-neighbor dictionary, order included."""
    digest = hashlib.sha256()
    for ps in patch_sets:
        for pid, counts in enumerate(ps.adhesion_neighbors):
            if counts:
                digest.update(f"{ps.owner}:{pid}:{list(counts.items())};".encode())
    return digest.hexdigest()
