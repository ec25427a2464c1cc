from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp
from vfc_oracle.core.graph import Graph

NORMAL = -1


@dataclass(frozen=True, slots=True)
class BagGraph:
    """Multigraph on bag(owner): induced edges plus an adhesion clique per child.

    ``incident[v]`` lists ``(w, label)`` pairs in ascending ``w`` where ``label`` is
    :data:`NORMAL` or the supporting child.
    """

    owner: int
    vertices: tuple[int, ...]
    incident: dict[int, tuple[tuple[int, int], ...]]
    adhesion_edges: tuple[tuple[int, int, int], ...]  # (u, v, child) with u < v

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(e) for e in self.incident.values()) // 2

    def normal_edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in self.vertices for w, label in self.incident[u] if label == NORMAL and u < w]

    def child_edges(self, z: int) -> list[tuple[int, int]]:
        return [(u, v) for u, v, c in self.adhesion_edges if c == z]


def build_bag_graph(d: TreeDecomp, g: Graph, x: int) -> BagGraph:
    bag = d.bag[x]
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in d.bag_order[x]}
    for v in d.bag_order[x]:
        incident[v].extend((w, NORMAL) for w in g.adjacency[v] if w in bag)
    adhesion_edges = []
    for z in d.children[x]:
        for u, v in combinations(d.adh_order[z], 2):
            adhesion_edges.append((u, v, z))
            incident[u].append((v, z))
            incident[v].append((u, z))
    return BagGraph(
        owner=x,
        vertices=d.bag_order[x],
        incident={v: tuple(sorted(e)) for v, e in incident.items()},
        adhesion_edges=tuple(adhesion_edges),
    )


def build_bag_graphs(d: TreeDecomp, g: Graph) -> list[BagGraph]:
    return [build_bag_graph(d, g, x) for x in d.nodes]
