"""Undirected simple graphs, the edge-list format, sparsification and brute-force references."""

from __future__ import annotations

import heapq
import logging
from collections import deque
from collections.abc import Iterable, Iterator
from functools import cached_property

import networkx as nx

from vfc_oracle.core.exceptions import GraphFormatError
from vfc_oracle.core.models import FailureSet

logger = logging.getLogger(__name__)


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    Neighbor lists are sorted ascending; every traversal in the package relies on that order
    for determinism.
    """

    def __init__(self, n: int, adjacency: Iterable[Iterable[int]]):
        self.n = n
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        if len(self.adjacency) != n:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows for n={n}")
        self.m = sum(len(nbrs) for nbrs in self.adjacency) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adjacency: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"endpoint out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if v in adjacency[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(n, adjacency)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        nodes = sorted(graph.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges if u != v))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    @cached_property
    def _adjacency_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        """Connected components of ``G - removed``, each sorted, ordered by smallest vertex."""
        blocked = set(removed)
        seen = [False] * self.n
        result = []
        for start in range(self.n):
            if seen[start] or start in blocked:
                continue
            seen[start] = True
            component = [start]
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if not seen[w] and w not in blocked:
                        seen[w] = True
                        component.append(w)
                        queue.append(w)
            result.append(sorted(component))
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def load_graph(text: bytes | str) -> Graph:
    """Parse the ``p <n> <m>`` edge-list format."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            lineno = text.count(b"\n", 0, exc.start) + 1
            raise GraphFormatError(lineno, f"invalid UTF-8 byte {text[exc.start]:#04x}") from None
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 3 or fields[0] != "p":
                raise GraphFormatError(lineno, f"malformed header {line!r}, expected 'p <n> <m>'")
            try:
                n, m = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphFormatError(lineno, f"malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise GraphFormatError(lineno, "negative vertex or edge count")
            header = (n, m)
            continue
        n, m = header
        if len(edges) == m:
            raise GraphFormatError(lineno, f"more than the declared {m} edges")
        if len(fields) != 2:
            raise GraphFormatError(lineno, f"malformed edge {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(lineno, f"malformed edge {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"endpoint out of range in ({u}, {v}) for n={n}")
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(lineno, f"duplicate edge ({u}, {v})")
        seen.add(key)
        edges.append(key)
    if header is None:
        raise GraphFormatError(lineno, "missing 'p <n> <m>' header")
    if len(edges) != header[1]:
        raise GraphFormatError(lineno, f"expected {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def write_graph(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def sparsify(g: Graph, k: int) -> Graph:
    """Union of the first ``k+1`` scan-first forests of a forest partition.

    Scan order picks the unscanned vertex with the largest capped count ``min(r, k+1)`` of
    scanned neighbors, smallest id first. Capping keeps each of the first ``k+1`` forests a
    scan-first forest of its residual graph and makes the operation idempotent.
    """
    cap = k + 1
    r = [0] * g.n
    scanned = [False] * g.n
    kept: list[tuple[int, int]] = []
    heap = [(0, v) for v in range(g.n)]
    heapq.heapify(heap)
    while heap:
        key, x = heapq.heappop(heap)
        if scanned[x] or -key != min(r[x], cap):
            continue
        scanned[x] = True
        for y in g.adjacency[x]:
            if scanned[y]:
                continue
            r[y] += 1
            if r[y] <= cap:
                kept.append((x, y))
                heapq.heappush(heap, (-r[y], y))
    result = Graph.from_edges(g.n, kept)
    logger.debug(f"sparsified {g.m} -> {result.m} edges (k={k})")
    return result


def _failed(s: FailureSet | Iterable[int]) -> frozenset[int]:
    return s.vertices if isinstance(s, FailureSet) else frozenset(s)


def brute_connected(g: Graph, s: FailureSet | Iterable[int], u: int, v: int) -> bool:
    """Reference answer: is there a u-v path in ``G - S``."""
    failed = _failed(s)
    if u in failed or v in failed:
        return False
    if u == v:
        return True
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g.adjacency[x]:
            if w == v:
                return True
            if w not in seen and w not in failed:
                seen.add(w)
                queue.append(w)
    return False


def brute_components(g: Graph, f: FailureSet | Iterable[int], a: Iterable[int] | None = None) -> int:
    """Number of components of ``G - F``; with terminals, only those meeting ``A - F``."""
    failed = _failed(f)
    view = nx.restricted_view(g.networkx, failed, [])
    if a is None:
        return nx.number_connected_components(view)
    terminals = set(a) - failed
    return sum(1 for component in nx.connected_components(view) if not terminals.isdisjoint(component))
