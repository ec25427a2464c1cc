"""Certification of decompositions: unbreakability inside cones and structural validity."""

from __future__ import annotations

from vfc_oracle.core.decomposition.separations import (
    EXHAUSTIVE_LIMIT,
    WorkMeter,
    breaks,
    iter_witnesses,
    restricted_adjacency,
)
from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp
from vfc_oracle.core.graph import Graph


def breaking_separator(
    g: Graph,
    cone: frozenset[int],
    bag: frozenset[int],
    q: int,
    k: int,
    meter: WorkMeter,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> tuple[int, ...] | None:
    """A separator S (|S| <= k) leaving more than q bag vertices on two sides, if any.

    Small cones report the smallest such separator.
    """
    if len(bag) <= 2 * q + 1:
        return None
    adj = restricted_adjacency(g, cone)
    if breaks(adj, (), bag, q):
        return ()
    return next(iter_witnesses(adj, bag, q, k, meter, exhaustive_limit), None)


def verify_unbreakable(
    d: TreeDecomp,
    g: Graph,
    q: int,
    k: int,
    work_limit: int = 2_000_000,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> bool:
    """Whether every bag is (q, k)-unbreakable inside its cone."""
    meter = WorkMeter(work_limit, "unbreakability certifier")
    return all(
        breaking_separator(g, d.cone(x), d.bag[x], q, k, meter, exhaustive_limit) is None for x in d.nodes
    )


def validate_decomposition(d: TreeDecomp, g: Graph, k: int | None = None) -> list[str]:
    """Problems with tree-decomposition validity, adhesion size and regularity; empty when sound."""
    k = d.k if k is None else k
    problems: list[str] = []

    for u, v in g.edges():
        if not any(u in b and v in b for b in d.bag):
            problems.append(f"edge ({u}, {v}) not covered")

    holders: list[list[int]] = [[] for _ in range(g.n)]
    for x in d.nodes:
        for v in d.bag[x]:
            holders[v].append(x)
    for v, nodes in enumerate(holders):
        if not nodes:
            problems.append(f"vertex {v} in no bag")
            continue
        # Connected iff exactly one holder has a parent outside the holder set.
        held = set(nodes)
        tops = [x for x in nodes if x == 0 or d.parent[x] not in held]
        if len(tops) != 1:
            problems.append(f"bags holding {v} are not connected")

    homes = [0] * g.n
    for x in d.nodes:
        for v in d.mrg[x]:
            homes[v] += 1
        if len(d.adh[x]) > k:
            problems.append(f"node {x} has adhesion {len(d.adh[x])} > {k}")
        if x == 0:
            continue
        comp = d.comp(x)
        if not d.mrg[x]:
            problems.append(f"node {x} has an empty margin")
        if not _connected(g, comp):
            problems.append(f"node {x} has a disconnected component")
        for u in d.adh[x]:
            if not any(w in comp for w in g.adjacency[u]):
                problems.append(f"adhesion vertex {u} of node {x} has no neighbor in the component")
    problems.extend(f"vertex {v} lies in {c} margins" for v, c in enumerate(homes) if c != 1)
    return problems


def _connected(g: Graph, vertices: frozenset[int]) -> bool:
    if not vertices:
        return True
    start = min(vertices)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)
