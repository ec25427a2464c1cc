"""Randomized differential harness: every oracle answer against brute force."""

import logging
from collections.abc import Iterable, Sequence
from itertools import combinations

import networkx as nx
import numpy as np

from vfc_oracle.core.cut import CutOracle, SteinerCutOracle
from vfc_oracle.core.decomposition import validate_decomposition, verify_unbreakable
from vfc_oracle.core.graph import Graph, brute_components, brute_connected
from vfc_oracle.core.models import Mismatch, OracleConfigTag, VerifySummary
from vfc_oracle.core.oracle import Oracle, UpdateState
from vfc_oracle.core.smallgraph import SmallGraph
from vfc_oracle.settings import AppConfig, HarnessConfig, get_config

logger = logging.getLogger(__name__)

ALL_CONFIGS = tuple(OracleConfigTag)


def random_graph(rng: np.random.Generator, n: int, m: int) -> Graph:
    m = min(m, n * (n - 1) // 2)
    return Graph.from_networkx(nx.gnm_random_graph(n, m, seed=int(rng.integers(2**31))))


def random_subset(rng: np.random.Generator, n: int, size: int) -> list[int]:
    size = min(size, n)
    return sorted(int(v) for v in rng.choice(n, size=size, replace=False)) if size else []


def is_k_connected(g: Graph, k: int) -> bool:
    return g.n > k and nx.is_connected(g.networkx) and nx.node_connectivity(g.networkx) >= k


FAULTS = ("flip-profile-edge",)


class FlippedProfileOracle(Oracle):
    """Known-bad oracle: after every update one profile gains an edge between two of its components.

    The deepest non-root important node with two disconnected live vertices is corrupted, so a
    correct harness has a deterministic bug to find and shrink.
    """

    def _compute_state(self, failed: frozenset[int]) -> UpdateState:
        state = super()._compute_state(failed)
        profiles = state.profiles.profiles
        for x in sorted(state.important, key=lambda y: (-self.index.depth[y], y)):
            if x == self.decomposition.root:
                continue
            live = [c for c in profiles[x].components() if any(v not in failed for v in c)]
            if len(live) >= 2:
                u = next(v for v in live[0] if v not in failed)
                v = next(v for v in live[1] if v not in failed)
                profile = profiles[x]
                profiles[x] = SmallGraph.from_edges(profile.vertices, [*profile.edges(), (u, v)], profile.kind)
                break
        return state


def build_oracle(
    g: Graph,
    k: int,
    config: OracleConfigTag | str | None = None,
    app_config: AppConfig | None = None,
    fault: str | None = None,
) -> Oracle:
    if fault is None:
        return Oracle.preprocess(g, k, config, app_config)
    if fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}, expected one of {FAULTS}")
    return FlippedProfileOracle.preprocess(g, k, config, app_config)


def certified(oracle: Oracle, app_config: AppConfig | None = None) -> bool:
    """Whether the oracle's decomposition is valid, regular and (k, k)-unbreakable in every cone."""
    limits = (app_config or get_config()).decomposition
    d, g, k = oracle.decomposition, oracle.sparsified, oracle.k
    if validate_decomposition(d, g, k):
        return False
    return verify_unbreakable(d, g, k, k, limits.certify_work_limit, limits.exhaustive_limit)


class InstanceChecker:
    """Builds every oracle for one graph and compares them with brute force."""

    def __init__(
        self,
        g: Graph,
        k: int,
        configs: Sequence[OracleConfigTag] = ALL_CONFIGS,
        terminals: Iterable[int] | None = None,
        fault: str | None = None,
        app_config: AppConfig | None = None,
        cuts: bool = True,
    ):
        self.graph = g
        self.k = k
        self.app_config = app_config
        self.oracles: dict[OracleConfigTag, Oracle] = {}
        for config in configs:
            self.oracles[config] = build_oracle(g, k, config, app_config, fault)
        self.terminals = sorted(set(terminals)) if terminals is not None else None
        self.cut: CutOracle | None = None
        self.steiner: SteinerCutOracle | None = None
        self.kconnected = False
        if cuts and self.oracles:
            conn = next(iter(self.oracles.values()))
            self.cut = CutOracle(g, k, conn)
            self.kconnected = is_k_connected(g, k)
            if self.terminals is not None:
                self.steiner = SteinerCutOracle(g, k, conn, self.terminals)
        self.checks = 0

    def _mismatch(self, check, failed, expected, actual, pair=None, terminals=None) -> Mismatch:
        return Mismatch(
            check=check,
            n=self.graph.n,
            edges=list(self.graph.edges()),
            k=self.k,
            failed=sorted(failed),
            pair=pair,
            terminals=terminals,
            expected=expected,
            actual=actual,
        )

    def certify(self) -> list[Mismatch]:
        """Decomposition soundness of the first oracle; decompositions do not depend on the config."""
        if not self.oracles:
            return []
        self.checks += 1
        if certified(next(iter(self.oracles.values())), self.app_config):
            return []
        return [self._mismatch("decomposition", [], True, False)]

    def check(self, failed: Sequence[int]) -> list[Mismatch]:
        g = self.graph
        out: list[Mismatch] = []
        for config, oracle in self.oracles.items():
            oracle.update(failed)
            for u, v in combinations(range(g.n), 2):
                expected = brute_connected(g, failed, u, v)
                actual = oracle.query(u, v)
                self.checks += 1
                if actual != expected:
                    out.append(self._mismatch(f"query:{config.value}", failed, expected, actual, pair=(u, v)))
        if self.cut is not None:
            expected = brute_components(g, failed)
            actual = self.cut.query(failed)
            self.checks += 1
            if actual != expected:
                out.append(self._mismatch("cut", failed, expected, actual))
            if self.kconnected and len(failed) == self.k:
                actual = self.cut.query_kconnected(failed)
                self.checks += 1
                if actual != expected:
                    out.append(self._mismatch("cut-kconnected", failed, expected, actual))
        if self.steiner is not None:
            expected = brute_components(g, failed, self.terminals)
            actual = self.steiner.query(failed)
            self.checks += 1
            if actual != expected:
                out.append(self._mismatch("steiner", failed, expected, actual, terminals=self.terminals))
        return out


def replay(m: Mismatch, fault: str | None = None, app_config: AppConfig | None = None) -> Mismatch | None:
    """Re-run one reproducer; the refreshed mismatch, or None when it no longer fails."""
    g = Graph.from_edges(m.n, m.edges)
    kind, _, config = m.check.partition(":")
    if kind == "decomposition":
        expected = True
        actual = certified(build_oracle(g, m.k, None, app_config, fault), app_config)
    elif kind == "query":
        oracle = build_oracle(g, m.k, config, app_config, fault)
        oracle.update(m.failed)
        expected = brute_connected(g, m.failed, *m.pair)
        actual = oracle.query(*m.pair)
    else:
        conn = build_oracle(g, m.k, None, app_config, fault)
        if kind == "steiner":
            expected = brute_components(g, m.failed, m.terminals)
            actual = SteinerCutOracle(g, m.k, conn, m.terminals).query(m.failed)
        else:
            expected = brute_components(g, m.failed)
            co = CutOracle(g, m.k, conn)
            actual = co.query_kconnected(m.failed) if kind == "cut-kconnected" else co.query(m.failed)
    if actual == expected:
        return None
    return m.model_copy(update={"expected": expected, "actual": actual})


def _without_vertex(m: Mismatch, w: int) -> Mismatch | None:
    if w in m.failed or (m.pair is not None and w in m.pair):
        return None

    def shift(v: int) -> int:
        return v - (v > w)

    terminals = None if m.terminals is None else [shift(a) for a in m.terminals if a != w]
    return m.model_copy(
        update={
            "n": m.n - 1,
            "edges": [(shift(u), shift(v)) for u, v in m.edges if w not in (u, v)],
            "failed": [shift(v) for v in m.failed],
            "pair": None if m.pair is None else (shift(m.pair[0]), shift(m.pair[1])),
            "terminals": terminals,
        }
    )


def minimize(m: Mismatch, fault: str | None = None, app_config: AppConfig | None = None) -> Mismatch:
    """Delete vertices, then edges, while the mismatch persists."""
    changed = True
    while changed:
        changed = False
        for w in reversed(range(m.n)):
            candidate = _without_vertex(m, w)
            if candidate is not None and m.check != "cut-kconnected":
                found = replay(candidate, fault, app_config)
                if found is not None:
                    m, changed = found, True
        for edge in list(m.edges):
            if m.check == "cut-kconnected":
                break
            found = replay(m.model_copy(update={"edges": [e for e in m.edges if e != edge]}), fault, app_config)
            if found is not None:
                m, changed = found, True
    return m


def run_verify(
    cfg: HarnessConfig | None = None,
    configs: Sequence[OracleConfigTag] = ALL_CONFIGS,
    fault: str | None = None,
    app_config: AppConfig | None = None,
    cuts: bool = True,
) -> VerifySummary:
    """Random graphs, random failure sets, exhaustive pairs; stops at the first failing graph."""
    app_config = app_config or get_config()
    cfg = cfg or app_config.harness
    rng = np.random.default_rng(cfg.seed)
    summary = VerifySummary(trials=0, checks=0)
    for trial in range(cfg.trials):
        n = int(rng.integers(1, cfg.n_max + 1))
        k = int(rng.integers(1, cfg.k_max + 1))
        m = int(rng.integers(0, int(cfg.edge_factor * n) + 1))
        g = random_graph(rng, n, m)
        terminals = random_subset(rng, n, int(rng.integers(0, n + 1)))
        checker = InstanceChecker(g, k, configs, terminals, fault, app_config, cuts)
        mismatches = checker.certify() if n <= cfg.certify_n_max else []
        for _ in range(cfg.failure_sets_per_graph):
            if mismatches:
                break
            failed = random_subset(rng, n, int(rng.integers(0, k + 1)))
            mismatches = checker.check(failed)
        summary.trials += 1
        summary.checks += checker.checks
        if mismatches:
            logger.warning(f"trial {trial}: {len(mismatches)} mismatches, minimizing the first")
            summary.mismatches.append(minimize(mismatches[0], fault, app_config))
            break
    logger.info(f"verified {summary.trials} graphs with {summary.checks} checks")
    return summary


def check_instance(
    g: Graph,
    k: int,
    failure_sets: Iterable[Sequence[int]],
    configs: Sequence[OracleConfigTag] = ALL_CONFIGS,
    terminals: Iterable[int] | None = None,
    fault: str | None = None,
) -> list[Mismatch]:
    checker = InstanceChecker(g, k, configs, terminals, fault)
    out: list[Mismatch] = []
    for failed in failure_sets:
        out.extend(checker.check(list(failed)))
    return out
