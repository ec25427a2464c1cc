"""Bitset-encoded graphs on a handful of named vertices."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from vfc_oracle.core.models import SmallGraphKind


def pair_bit(i: int, j: int, size: int) -> int:
    if i > j:
        i, j = j, i
    return 1 << (i * size + j)


def reindex(adjacency: int, vertices: Sequence[int], position: dict[int, int], size: int) -> int:
    """Re-express an adjacency bitset over ``vertices`` in another index space."""
    out = 0
    n = len(vertices)
    for i in range(n):
        row = adjacency >> (i * n)
        if not row:
            break
        for j in range(i + 1, n):
            if row >> j & 1:
                out |= pair_bit(position[vertices[i]], position[vertices[j]], size)
    return out


def bit_pairs(adjacency: int, size: int) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)``, ``i < j``, whose bit is set."""
    out = []
    while adjacency:
        low = adjacency & -adjacency
        b = low.bit_length() - 1
        out.append(divmod(b, size))
        adjacency ^= low
    return out


@dataclass(frozen=True, slots=True)
class SmallGraph:
    vertices: tuple[int, ...]
    adjacency: int
    kind: SmallGraphKind

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]], kind: SmallGraphKind) -> SmallGraph:
        ordered = tuple(sorted(set(vertices)))
        position = {v: i for i, v in enumerate(ordered)}
        bits = 0
        for u, v in edges:
            if u != v:
                bits |= pair_bit(position[u], position[v], len(ordered))
        return cls(ordered, bits, kind)

    @classmethod
    def empty(cls, vertices: Iterable[int], kind: SmallGraphKind) -> SmallGraph:
        return cls(tuple(sorted(set(vertices))), 0, kind)

    @property
    def key(self) -> tuple[int, int]:
        return len(self.vertices), self.adjacency

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        i, j = self.vertices.index(u), self.vertices.index(v)
        return bool(self.adjacency & pair_bit(i, j, len(self.vertices)))

    def edges(self) -> list[tuple[int, int]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in bit_pairs(self.adjacency, len(self.vertices))]

    def neighbors(self, v: int) -> list[int]:
        return [w for w in self.vertices if self.has_edge(v, w)]

    def components(self) -> list[list[int]]:
        parent = {v: v for v in self.vertices}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in self.edges():
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_clique_union(self) -> bool:
        return all(self.has_edge(u, v) for c in self.components() for u in c for v in c if u < v)

    def __str__(self):
        return f"{self.kind.value}{list(self.vertices)}:{self.edges()}"
