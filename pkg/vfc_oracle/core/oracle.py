"""Vertex-failure connectivity oracle: preprocess once, then alternate batch updates and queries.

A query lifts each endpoint to a canonical key ``(t, label)``: ``t`` is the highest
decomposition node whose bag meets the endpoint's component of ``G - S`` and ``label`` is the
canonical label of that component in the restricted bag graph of ``t``. Two live vertices are
connected iff their keys match.
"""

from __future__ import annotations

import hashlib
import logging
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import pairwise

from pydantic import ValidationError

from vfc_oracle.core.counters import OpCounters, Phase
from vfc_oracle.core.decomposition import (
    BagGraph,
    TreeDecomp,
    build_bag_graphs,
    build_unbreakable_decomposition,
    regularize,
)
from vfc_oracle.core.exceptions import BudgetExceededError, ContractViolation
from vfc_oracle.core.graph import Graph, sparsify
from vfc_oracle.core.models import (
    BuildSummary,
    DecompositionStats,
    FailureSet,
    OracleConfigTag,
    PhaseStats,
)
from vfc_oracle.core.patch import (
    NeighborJournal,
    PatchSet,
    SingleChildTables,
    TouchState,
    build_patch_sets,
    checksum,
    compute_touched_patches,
    patch_label,
    precompute_patch_connectivity,
)
from vfc_oracle.core.profile import (
    Coloring,
    CombineResult,
    ImportantProfiles,
    combine_profile_torso,
    compute_adhconn,
    compute_important_profiles,
    representatives,
    subset_connectivity,
)
from vfc_oracle.core.smallgraph import SmallGraph
from vfc_oracle.core.torso import Memo, TorsoStore, compute_parent_child_torsos
from vfc_oracle.core.tree import ShortcutIndex, TreeIndex, build_shortcuts, build_tree_index
from vfc_oracle.settings import AppConfig, get_config

logger = logging.getLogger(__name__)

Key = tuple[int, int | None]


@dataclass(slots=True)
class UpdateState:
    failed: frozenset[int]
    important_bags: list[int]
    important: list[int]  # Euler order
    important_parent: dict[int, int]
    profiles: ImportantProfiles
    adhconn: dict[int, tuple[SmallGraph, Coloring]] = field(default_factory=dict)
    touch: dict[int, TouchState] = field(default_factory=dict)
    firsts: list[int] = field(default_factory=list)


class Oracle:
    """Answers "are u and v connected in G - S" for batches S of at most k failed vertices."""

    def __init__(
        self,
        graph: Graph,
        k: int,
        config: OracleConfigTag,
        decomposition: TreeDecomp,
        bag_graphs: list[BagGraph],
        index: TreeIndex,
        shortcuts: ShortcutIndex,
        torsos: TorsoStore,
        patch_sets: list[PatchSet] | None,
        counters: OpCounters,
        sparsified: Graph,
    ):
        self.graph = graph
        self.k = k
        self.config = config
        self.decomposition = decomposition
        self.bag_graphs = bag_graphs
        self.index = index
        self.shortcuts = shortcuts
        self.torsos = torsos
        self.patch_sets = patch_sets
        self.counters = counters
        self.sparsified = sparsified
        memoize = config is not OracleConfigTag.LOW_SPACE
        self.combine_memo: Memo | None = Memo(torsos.memo.limit) if torsos.memo is not None else None
        self.tables = SingleChildTables(
            decomposition,
            bag_graphs,
            patch_sets if config is OracleConfigTag.MAIN else None,
            memoize=memoize,
            memo_limit=torsos.memo.limit if torsos.memo is not None else 0,
            counters=counters,
        )
        self.journal = NeighborJournal()
        self.preprocessing = PhaseStats()
        self.update_stats = PhaseStats()
        self.query_stats = PhaseStats()
        self._state: UpdateState | None = None

    @classmethod
    def preprocess(
        cls,
        g: Graph,
        k: int,
        config: OracleConfigTag | str | None = None,
        app_config: AppConfig | None = None,
    ) -> Oracle:
        """Build every structure the update and query phases read."""
        app_config = app_config or get_config()
        config = OracleConfigTag(config) if config is not None else app_config.oracle.default_config
        if k < 1:
            raise ContractViolation(f"failure budget must be at least 1, got {k}")
        started = time.perf_counter()
        counters = OpCounters()

        sparse = sparsify(g, k) if app_config.oracle.sparsify else g
        d = build_unbreakable_decomposition(
            sparse, k, app_config.decomposition.work_limit, app_config.decomposition.exhaustive_limit
        )
        d = regularize(d, sparse)
        bag_graphs = build_bag_graphs(d, sparse)
        index = build_tree_index(d.parent)
        shortcuts = build_shortcuts(d.parent, app_config.oracle.hop_bound)
        parent_child = compute_parent_child_torsos(d, bag_graphs)
        torsos = TorsoStore(
            d,
            shortcuts,
            parent_child,
            memoize=config is not OracleConfigTag.LOW_SPACE,
            memo_limit=app_config.oracle.memo_limit,
            counters=counters,
        )
        patch_sets = build_patch_sets(d, bag_graphs) if config is not OracleConfigTag.LOW_SPACE else None

        oracle = cls(g, k, config, d, bag_graphs, index, shortcuts, torsos, patch_sets, counters, sparse)
        oracle.preprocessing = PhaseStats(
            wall_seconds=time.perf_counter() - started, operations=counters.total(Phase.PREPROCESS)
        )
        logger.info(
            f"preprocessed n={g.n} m={g.m} (sparsified {sparse.m}) k={k} config={config.value}: "
            f"{len(d)} nodes, {len(shortcuts.edges)} shortcut edges, {len(torsos.stored)} torsos"
        )
        return oracle

    @property
    def n(self) -> int:
        return self.graph.n

    def build_summary(self) -> BuildSummary:
        d = self.decomposition
        return BuildSummary(
            n=self.graph.n,
            m=self.graph.m,
            m_sparsified=self.sparsified.m,
            k=self.k,
            config=self.config,
            decomposition=DecompositionStats(
                nodes=len(d),
                height=d.height,
                max_bag=max((len(b) for b in d.bag), default=0),
                max_adhesion=d.max_adhesion,
                virtual_root=d.virtual_root,
            ),
            shortcut_edges=len(self.shortcuts.edges),
            stored_torsos=len(self.torsos.stored),
            preprocessing=self.preprocessing,
        )

    def _validate(self, s) -> FailureSet:
        if isinstance(s, FailureSet):
            vertices = s.vertices
        else:
            vertices = frozenset(s)
        try:
            failures = FailureSet(vertices=vertices, k=self.k)
        except ValidationError as exc:
            if len(vertices) > self.k:
                raise BudgetExceededError(f"{len(vertices)} failures exceed budget k={self.k}") from exc
            raise ContractViolation(str(exc)) from exc
        bad = [v for v in failures.vertices if v >= self.n]
        if bad:
            raise ContractViolation(f"failed vertices {sorted(bad)} outside 0..{self.n - 1}")
        return failures

    def update(self, s) -> None:
        """Replace the current failure set with ``s``."""
        failures = self._validate(s)
        started = time.perf_counter()
        with self.counters.running(Phase.UPDATE):
            if self.patch_sets is not None:
                self.journal.rollback(self.patch_sets)
            self._state = self._compute_state(failures.vertices)
        self.update_stats.wall_seconds += time.perf_counter() - started
        self.update_stats.operations = self.counters.total(Phase.UPDATE)
        logger.debug(f"update {failures}: |Y|={len(self._state.important)}")

    def _compute_state(self, failed: frozenset[int]) -> UpdateState:
        d, index = self.decomposition, self.index
        important_bags = sorted({d.vertex_home[v] for v in failed}, key=lambda x: index.first[x])
        closure = set(important_bags) | {d.root}
        for a, b in pairwise(important_bags):
            closure.add(index.lca(a, b))
        important = sorted(closure, key=lambda x: index.first[x])

        important_parent: dict[int, int] = {}
        stack: list[int] = []
        for y in important:
            while stack and not index.is_ancestor(stack[-1], y):
                stack.pop()
            important_parent[y] = stack[-1] if stack else -1
            stack.append(y)

        profiles = compute_important_profiles(
            d,
            index,
            self.bag_graphs,
            self.torsos,
            important,
            important_parent,
            failed,
            self.combine_memo,
            self.counters,
        )
        state = UpdateState(
            failed=failed,
            important_bags=important_bags,
            important=important,
            important_parent=important_parent,
            profiles=profiles,
            firsts=[index.first[y] for y in important],
        )
        if self.config is OracleConfigTag.LOW_SPACE:
            return state
        for y in important:
            bg = profiles.restricted[y]
            state.adhconn[y] = compute_adhconn(d, bg, profiles.affected_children[y])
            if self.config is OracleConfigTag.MAIN:
                ps = self.patch_sets[y]
                state.touch[y] = precompute_patch_connectivity(ps, bg, compute_touched_patches(ps, bg, self.journal))
        return state

    def query(self, u: int, v: int) -> bool:
        if self._state is None:
            raise ContractViolation("query before the first update")
        for w in (u, v):
            if not 0 <= w < self.n:
                raise ContractViolation(f"vertex {w} outside 0..{self.n - 1}")
        failed = self._state.failed
        if u in failed or v in failed:
            return False
        if u == v:
            return True
        started = time.perf_counter()
        with self.counters.running(Phase.QUERY):
            answer = self.resolve(u) == self.resolve(v)
        self.query_stats.wall_seconds += time.perf_counter() - started
        self.query_stats.operations = self.counters.total(Phase.QUERY)
        return answer

    def component_key(self, w: int) -> Key | None:
        """Canonical key of the component holding ``w`` in ``G - S``; None when ``w`` failed."""
        if self._state is None:
            raise ContractViolation("query before the first update")
        if not 0 <= w < self.n:
            raise ContractViolation(f"vertex {w} outside 0..{self.n - 1}")
        if w in self._state.failed:
            return None
        with self.counters.running(Phase.QUERY):
            return self.resolve(w)

    def resolve(self, w: int) -> Key:
        """Canonical key of the component of live vertex ``w``."""
        state = self._state
        x = self.decomposition.vertex_home[w]
        if x in state.important_parent:
            return self._climb(x, w)
        y = self._topmost_important_below(x)
        if y is not None:
            return self._single_child(x, y, w)

        # Nothing important below: hand over to a live adhesion vertex of a failure-free subtree.
        x1 = self._nearest_important_above(x)
        z1 = self.index.dir(x1, x)
        y = self._topmost_important_below(z1)
        if y is None:
            proxy = self._live_proxy(z1)
            return (z1, None) if proxy is None else self._climb(x1, proxy)
        top = self.index.lca(x, y)
        z = self.index.dir(top, x)
        proxy = self._live_proxy(z)
        return (z, None) if proxy is None else self._single_child(top, y, proxy)

    def _topmost_important_below(self, x: int) -> int | None:
        state = self._state
        self.counters.charge("y_scan")
        i = bisect_left(state.firsts, self.index.first[x])
        if i < len(state.firsts) and state.firsts[i] <= self.index.last[x]:
            return state.important[i]
        return None

    def _nearest_important_above(self, x: int) -> int:
        state = self._state
        if x in state.important_parent:
            return state.important_parent[x]
        self.counters.charge("y_scan", len(state.important))
        best = self.decomposition.root
        for y in state.important:
            if y != x and self.index.is_ancestor(y, x) and self.index.depth[y] > self.index.depth[best]:
                best = y
        return best

    def _live_proxy(self, z: int) -> int | None:
        failed = self._state.failed
        return next((a for a in self.decomposition.adh_order[z] if a not in failed), None)

    def _combine(self, profile_a: SmallGraph, c: int, a: int) -> CombineResult:
        return combine_profile_torso(
            profile_a, self.torsos.query(c, a), self._state.failed, self.combine_memo, self.counters
        )

    def _profile_of(self, z: int, y: int) -> SmallGraph:
        """profile(z) for an affected node whose topmost important descendant is ``y``."""
        profiles = self._state.profiles.profiles
        if z in profiles:
            return profiles[z]
        return self._combine(profiles[y], z, y).profile

    def _label_at_important(self, x: int, w: int) -> int:
        state = self._state
        if self.config is not OracleConfigTag.LOW_SPACE:
            coloring = state.adhconn[x][1]
            if w in coloring.col:
                self.counters.charge("color_read")
                return coloring.col[w]
        bg = state.profiles.restricted[x]
        if self.config is OracleConfigTag.MAIN:
            return patch_label(self.patch_sets[x], bg, state.touch[x], w)
        return bg.label(w)

    def _anchor_at_important(self, x: int, label: int) -> int | None:
        state = self._state
        if self.config is not OracleConfigTag.LOW_SPACE:
            return state.adhconn[x][1].invcol.get(label)
        adh = self.decomposition.adh_order[x]
        labels = subset_connectivity(state.profiles.restricted[x], adh)
        return representatives(labels, adh).get(label)

    def _climb(self, x: int, w: int) -> Key:
        """Key of live ``w`` in bag(x) for an important node ``x``."""
        label = self._label_at_important(x, w)
        if x == self.decomposition.root:
            return x, label
        anchor = self._anchor_at_important(x, label)
        if anchor is None:
            return x, label
        return self._jump(x, anchor, self._state.profiles.profiles[x])

    def _single_child(self, x: int, y: int, w: int) -> Key:
        """Key of live ``w`` in bag(x) for an unimportant ``x`` with important ``y`` below."""
        z = self.index.dir(x, y)
        entry = self.tables.entry(x, z, self._profile_of(z, y), self._state.failed)
        label = self.tables.label(entry, w)
        anchor = entry.coloring.invcol.get(label)
        if anchor is None:
            return x, label
        return self._jump(x, anchor, entry.profile)

    def _jump(self, a: int, p: int, profile_a: SmallGraph) -> Key:
        """Follow the component through live ``p`` in adh(a) to the next important ancestor."""
        index = self.index
        x1 = self._nearest_important_above(a)
        z1 = index.dir(x1, a)
        if z1 == a:
            return self._climb(x1, p)
        q = self._combine(profile_a, z1, a).coloring.representative(p)
        if q is not None:
            return self._climb(x1, q)

        # Closed below x1; being closed at a node is inherited by its ancestors.
        lo, hi = index.depth[z1], index.depth[a] - 1
        while lo < hi:
            self.counters.charge("closure_step")
            mid = (lo + hi + 1) // 2
            c = index.level_ancestor(a, mid)
            if self._combine(profile_a, c, a).coloring.representative(p) is None:
                lo = mid
            else:
                hi = mid - 1
        t = index.level_ancestor(a, lo)
        zt = index.level_ancestor(a, lo + 1)
        if zt == a:
            profile_zt, q = profile_a, p
        else:
            result = self._combine(profile_a, zt, a)
            profile_zt, q = result.profile, result.coloring.representative(p)
        entry = self.tables.entry(t, zt, profile_zt, self._state.failed)
        return t, self.tables.label(entry, q)

    def op_counters(self) -> dict[str, dict[str, int]]:
        return self.counters.snapshot()

    def state_checksum(self) -> str:
        """Digest of the observable update state."""
        digest = hashlib.sha256()
        if self.patch_sets is not None:
            digest.update(checksum(self.patch_sets).encode())
        state = self._state
        if state is not None:
            digest.update(repr((sorted(state.failed), state.important)).encode())
            for x in sorted(state.profiles.profiles):
                profile = state.profiles.profiles[x]
                digest.update(f"{x}:{profile.vertices}:{profile.adjacency};".encode())
        return digest.hexdigest()

    @property
    def state(self) -> UpdateState | None:
        return self._state


def preprocess(g: Graph, k: int, config: OracleConfigTag | str | None = None, app_config: AppConfig | None = None):
    return Oracle.preprocess(g, k, config, app_config)
