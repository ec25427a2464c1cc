"""k-vertex cut oracles layered on a vertex-failure connectivity oracle.

The DFS forest of G splits into subtrees once F is removed. Subtrees that are whole original
subtrees hang off an F-vertex; everything else is internal and contains a parent of some
F-vertex. Internal pieces are grouped by the component keys the connectivity oracle reports;
a hanging subtree is a component of its own exactly when all of its back-vertices are failed,
which is counted by probing a per-vertex dictionary of children keyed by their back-vertex lists.
"""

from __future__ import annotations

import heapq
import logging
from bisect import bisect_left, bisect_right
from collections.abc import Hashable, Iterable
from itertools import accumulate, combinations
from typing import Protocol

from vfc_oracle.core.exceptions import BudgetExceededError, ContractViolation
from vfc_oracle.core.graph import Graph
from vfc_oracle.core.models import FailureSet
from vfc_oracle.core.oracle import Oracle
from vfc_oracle.core.tree import TreeIndex

logger = logging.getLogger(__name__)


class ConnectivityOracle(Protocol):
    def update(self, s) -> None: ...

    def query(self, u: int, v: int) -> bool: ...

    def component_key(self, w: int) -> Hashable | None: ...


class ChildKeyIndex:
    """Trie over ``(parent, *back-vertex list)`` keys counting children, and terminal-holding children."""

    __slots__ = ("_next", "_count", "_terminal")

    def __init__(self):
        self._next: list[dict[int, int]] = [{}]
        self._count: list[int] = [0]
        self._terminal: list[int] = [0]

    def insert(self, key: Iterable[int], terminal: bool = False) -> None:
        node = 0
        for part in key:
            nxt = self._next[node].get(part)
            if nxt is None:
                nxt = len(self._next)
                self._next[node][part] = nxt
                self._next.append({})
                self._count.append(0)
                self._terminal.append(0)
            node = nxt
        self._count[node] += 1
        self._terminal[node] += terminal

    def _find(self, key: Iterable[int]) -> int | None:
        node = 0
        for part in key:
            node = self._next[node].get(part)
            if node is None:
                return None
        return node

    def count(self, key: Iterable[int], terminal: bool = False) -> int:
        node = self._find(key)
        if node is None:
            return 0
        return self._terminal[node] if terminal else self._count[node]

    def __len__(self) -> int:
        return len(self._next)


class DfsIndex:
    """DFS forest of G with subtree intervals and the k+1 shallowest back-vertices per subtree.

    ``back[v]`` lists, by increasing depth, the k+1 shallowest vertices that are strict
    ancestors of v and adjacent to some vertex of T[v]; the tree edge to the parent counts.
    """

    def __init__(self, g: Graph, k: int):
        n = g.n
        self.n = n
        self.k = k
        self.parent = [-1] * n
        self.depth = [0] * n
        self.dfs = [-1] * n
        self.dfs_max = [0] * n
        self.order: list[int] = []
        self.roots: list[int] = []
        self.tree_root = [0] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self._adjacency = g.adjacency

        for r in range(n):
            if self.dfs[r] != -1:
                continue
            self.roots.append(r)
            self.dfs[r] = len(self.order)
            self.order.append(r)
            self.tree_root[r] = r
            stack = [(r, iter(g.adjacency[r]))]
            while stack:
                v, it = stack[-1]
                for w in it:
                    if self.dfs[w] == -1:
                        self.parent[w] = v
                        self.depth[w] = self.depth[v] + 1
                        self.dfs[w] = len(self.order)
                        self.order.append(w)
                        self.tree_root[w] = r
                        self.children[v].append(w)
                        stack.append((w, iter(g.adjacency[w])))
                        break
                else:
                    stack.pop()
                    self.dfs_max[v] = len(self.order) - 1

        # Forest under a virtual root n; depths there are shifted by one.
        self.index = TreeIndex([p if p != -1 else n for p in self.parent] + [-1])

        own: list[list[int]] = [
            sorted({u for u in g.adjacency[v] if self.depth[u] < self.depth[v]}, key=self.depth.__getitem__)
            for v in range(n)
        ]
        self.back: list[tuple[int, ...]] = [()] * n
        for v in reversed(self.order):
            merged = heapq.merge(own[v], *(self.back[c] for c in self.children[v]), key=self.depth.__getitem__)
            out: list[int] = []
            for u in merged:
                if self.depth[u] >= self.depth[v] or (out and out[-1] == u):
                    continue
                out.append(u)
                if len(out) > k:
                    break
            self.back[v] = tuple(out)

        self.keys = ChildKeyIndex()
        for v in range(n):
            if self.parent[v] != -1 and len(self.back[v]) <= k:
                self.keys.insert((self.parent[v], *self.back[v]))
        logger.debug(f"dfs forest: {len(self.roots)} trees, {len(self.keys)} trie nodes")

    def level_ancestor(self, v: int, depth: int) -> int:
        return self.index.level_ancestor(v, depth + 1)

    def is_ancestor(self, u: int, v: int) -> bool:
        """``u`` is an ancestor of ``v`` or equal to it."""
        return self.dfs[u] <= self.dfs[v] <= self.dfs_max[u]

    def backvertex(self, v: int) -> set[int]:
        """Every back-vertex of T[v], by scanning the subtree."""
        out = set()
        for w in self.order[self.dfs[v] : self.dfs_max[v] + 1]:
            for u in self._adjacency[w]:
                if self.depth[u] < self.depth[v] and self.is_ancestor(u, v):
                    out.add(u)
        return out


class CutOracle:
    """Number of connected components of ``G - F`` for ``|F| <= k``."""

    def __init__(self, g: Graph, k: int, conn: ConnectivityOracle):
        if k < 1:
            raise ContractViolation(f"failure budget must be at least 1, got {k}")
        self.graph = g
        self.k = k
        self.conn = conn
        self.dfs = DfsIndex(g, k)

    def _failures(self, f) -> tuple[int, ...]:
        vertices = f.vertices if isinstance(f, FailureSet) else frozenset(f)
        if len(vertices) > self.k:
            raise BudgetExceededError(f"{len(vertices)} failures exceed budget k={self.k}")
        bad = [v for v in vertices if not 0 <= v < self.graph.n]
        if bad:
            raise ContractViolation(f"failed vertices {sorted(bad)} outside 0..{self.graph.n - 1}")
        return tuple(sorted(vertices, key=lambda v: (self.dfs.depth[v], v)))

    def _untouched_trees(self, failed: tuple[int, ...]) -> list[int]:
        touched = {self.dfs.tree_root[v] for v in failed}
        return [r for r in self.dfs.roots if r not in touched]

    def _internal_groups(self, failed: tuple[int, ...]) -> list[list[int]]:
        """Parents of failed vertices grouped by connectivity in ``G - F``, one key lookup each."""
        fs = set(failed)
        xs = sorted({self.dfs.parent[v] for v in failed if self.dfs.parent[v] != -1} - fs)
        self.conn.update(failed)
        groups: dict[Hashable, list[int]] = {}
        for x in xs:
            groups.setdefault(self.conn.component_key(x), []).append(x)
        return list(groups.values())

    def _bad_children(self, failed: tuple[int, ...]) -> set[int]:
        dfs = self.dfs
        bad = set()
        for u in failed:
            for v in failed:
                if u != v and dfs.depth[u] < dfs.depth[v] and dfs.is_ancestor(u, v):
                    bad.add(dfs.level_ancestor(v, dfs.depth[u] + 1))
        return bad

    def _closed(self, c: int, fs: set[int]) -> bool:
        back = self.dfs.back[c]
        return len(back) <= self.k and all(u in fs for u in back)

    def _hanging(self, failed: tuple[int, ...], exact: bool = False, terminal: bool = False) -> int:
        """Hanging subtrees whose back-vertices are all failed."""
        fs = set(failed)
        subsets = [failed] if exact else [s for r in range(1, len(failed) + 1) for s in combinations(failed, r)]
        total = 0
        for u in failed:
            for subset in subsets:
                total += self.dfs.keys.count((u, *subset), terminal)
        for c in self._bad_children(failed):
            if not self._closed(c, fs) or (exact and set(self.dfs.back[c]) != fs):
                continue
            if terminal and not self._holds_terminal(c):
                continue
            total -= 1
        return total

    def _holds_terminal(self, c: int) -> bool:
        return True

    def query(self, f) -> int:
        """Component count of ``G - F``."""
        failed = self._failures(f)
        count = len(self._untouched_trees(failed))
        if not failed:
            return count
        count += len(self._internal_groups(failed))
        return count + self._hanging(failed)

    def query_kconnected(self, f) -> int:
        """Component count of ``G - F`` when G is known to be k-vertex-connected."""
        failed = self._failures(f)
        alive = self.graph.n - len(failed)
        if len(failed) < self.k:
            return 1 if alive > 0 else 0
        internal = len(self._internal_groups(failed))
        hanging = self._hanging(failed, exact=True)
        if internal == 0 and hanging == 0 and alive > 0:
            return 1
        return internal + hanging


class SteinerCutOracle(CutOracle):
    """Number of components of ``G - F`` that contain a terminal."""

    def __init__(self, g: Graph, k: int, conn: ConnectivityOracle, terminals: Iterable[int]):
        super().__init__(g, k, conn)
        self.terminals = frozenset(terminals)
        bad = [a for a in self.terminals if not 0 <= a < g.n]
        if bad:
            raise ContractViolation(f"terminals {sorted(bad)} outside 0..{g.n - 1}")
        dfs = self.dfs
        self.alpha = [0] * g.n
        for v in reversed(dfs.order):
            self.alpha[v] += v in self.terminals
            if dfs.parent[v] != -1:
                self.alpha[dfs.parent[v]] += self.alpha[v]

        # R(v): back-vertices of v's children ordered by DFS number, weighted by the child's terminals.
        self.r_positions: list[list[int]] = []
        self.r_prefix: list[list[int]] = []
        for v in range(g.n):
            items = sorted(
                (dfs.dfs[u], c, self.alpha[c]) for c in dfs.children[v] for u in dfs.back[c]
            )
            self.r_positions.append([pos for pos, _, _ in items])
            self.r_prefix.append([0, *accumulate(w for _, _, w in items)])

        dfs.keys = ChildKeyIndex()
        for v in range(g.n):
            if dfs.parent[v] != -1 and len(dfs.back[v]) <= k:
                dfs.keys.insert((dfs.parent[v], *dfs.back[v]), self.alpha[v] > 0)

    def _holds_terminal(self, c: int) -> bool:
        return self.alpha[c] > 0

    def r_weight(self, u: int, lo: int, hi: int) -> int:
        """Total weight of R(u) elements with DFS number in ``[lo, hi]``."""
        positions = self.r_positions[u]
        i, j = bisect_left(positions, lo), bisect_right(positions, hi)
        return self.r_prefix[u][j] - self.r_prefix[u][i]

    def _piece_root(self, x: int, failed: tuple[int, ...]) -> int:
        """Root of the internal subtree holding the live vertex ``x``."""
        dfs = self.dfs
        above = [f for f in failed if dfs.depth[f] < dfs.depth[x] and dfs.is_ancestor(f, x)]
        if not above:
            return dfs.tree_root[x]
        nearest = max(above, key=dfs.depth.__getitem__)
        return dfs.level_ancestor(x, dfs.depth[nearest] + 1)

    def _top_failed_below(self, r: int, failed: tuple[int, ...]) -> list[int]:
        dfs = self.dfs
        below = [f for f in failed if dfs.is_ancestor(r, f)]
        return [f for f in below if not any(g != f and dfs.is_ancestor(g, f) for g in below)]

    def lambda_kappa(self, r: int, failed: tuple[int, ...], bad: set[int]) -> tuple[int, int]:
        """Terminals inside the internal subtree rooted at ``r`` and its hanging-terminal weight."""
        dfs = self.dfs
        tops = self._top_failed_below(r, failed)
        lam = self.alpha[r] - sum(self.alpha[f] for f in tops)
        kappa = 0
        for u in failed:
            kappa += self.r_weight(u, dfs.dfs[r], dfs.dfs_max[r])
            for f in tops:
                kappa -= self.r_weight(u, dfs.dfs[f], dfs.dfs_max[f])
        fs = set(failed)
        for c in bad:
            for v in dfs.back[c]:
                if v not in fs and self._piece_root(v, failed) == r:
                    kappa -= self.alpha[c]
        return lam, kappa

    def query(self, f) -> int:
        """Count of components of ``G - F`` meeting the terminals."""
        failed = self._failures(f)
        if not self.terminals - set(failed):
            return 0
        count = sum(1 for r in self._untouched_trees(failed) if self.alpha[r] > 0)
        if not failed:
            return count
        bad = self._bad_children(failed)
        for group in self._internal_groups(failed):
            total = 0
            for r in sorted({self._piece_root(x, failed) for x in group}):
                lam, kappa = self.lambda_kappa(r, failed, bad)
                total += lam + kappa
            count += total >= 1
        return count + self._hanging(failed, terminal=True)


def build_cut_oracle(g: Graph, k: int, conn: ConnectivityOracle | None = None) -> CutOracle:
    if conn is None:
        conn = Oracle.preprocess(g, k)
    return CutOracle(g, k, conn)


def build_steiner(
    g: Graph, terminals: Iterable[int], k: int, conn: ConnectivityOracle | None = None
) -> SteinerCutOracle:
    if conn is None:
        conn = Oracle.preprocess(g, k)
    return SteinerCutOracle(g, k, conn, terminals)


def cut_query(co: CutOracle, f) -> int:
    return CutOracle.query(co, f)


def cut_query_kconnected(co: CutOracle, f) -> int:
    return co.query_kconnected(f)


def steiner_query(so: SteinerCutOracle, f) -> int:
    return so.query(f)
