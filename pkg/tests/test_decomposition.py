import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from vfc_oracle.core.decomposition import (
    TreeDecomp,
    breaking_separator,
    build_bag_graph,
    build_unbreakable_decomposition,
    regularize,
    renumber,
    to_dot,
    validate_decomposition,
    verify_unbreakable,
)
from vfc_oracle.core.decomposition.bag_graph import NORMAL
from vfc_oracle.core.decomposition.separations import (
    WorkMeter,
    best_split,
    iter_witnesses,
    minimal_separators,
    restricted_adjacency,
    seeded_witnesses,
)
from vfc_oracle.core.exceptions import ContractViolation, DecompositionBudgetExceeded
from vfc_oracle.core.graph import Graph, sparsify
from vfc_oracle.services.harness import random_graph

from .strategies import complete, cycle, graphs, path


def decompose(g: Graph, k: int) -> TreeDecomp:
    return regularize(build_unbreakable_decomposition(g, k), g)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=10), integers(1, 3))
def test_decomposition_is_sound(g, k):
    d = decompose(g, k)
    assert validate_decomposition(d, g, k) == []
    assert d.max_adhesion <= k
    assert verify_unbreakable(d, g, k, k)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=10), integers(1, 3))
def test_every_vertex_has_one_home(g, k):
    d = decompose(g, k)
    for v in range(g.n):
        x = d.vertex_home[v]
        assert v in d.mrg[x]
        assert v not in d.adh[x]


def test_clique_is_a_single_bag():
    g = complete(5)
    d = decompose(g, 2)
    assert len(d) == 1
    assert d.bag[0] == frozenset(range(5))
    assert not d.virtual_root


def test_disconnected_graph_gets_virtual_root():
    g = Graph.from_edges(5, [(0, 1), (2, 3)])
    d = decompose(g, 1)
    assert d.virtual_root
    assert d.bag[0] == frozenset()
    assert all(d.adh[x] == frozenset() for x in d.children[0])
    assert validate_decomposition(d, g, 1) == []
    assert "(virtual)" in to_dot(d)


def test_cycle_adhesions_within_budget():
    g = cycle(8)
    d = decompose(g, 2)
    assert validate_decomposition(d, g) == []
    assert d.max_adhesion <= 2
    assert verify_unbreakable(d, g, 2, 2)


def test_rejects_zero_budget():
    with pytest.raises(ContractViolation):
        build_unbreakable_decomposition(path(3), 0)


def test_work_limit_is_enforced():
    with pytest.raises(DecompositionBudgetExceeded):
        build_unbreakable_decomposition(cycle(12), 3, work_limit=1)


def test_breaking_separator_on_cycle():
    g = cycle(8)
    everything = frozenset(range(8))
    meter = WorkMeter(10_000, "test")
    assert breaking_separator(g, everything, everything, 1, 2, meter) == (0, 3)
    assert breaking_separator(g, everything, everything, 3, 2, meter) is None


def test_best_split():
    assert best_split([8]) == 0
    assert best_split([1, 5]) == 1
    assert best_split([3, 3, 2]) == 3


def test_validate_reports_uncovered_edge():
    g = path(3)
    d = renumber(3, 1, {0: -1, 1: 0}, {0: frozenset({0, 1}), 1: frozenset({2})}, root=0)
    problems = validate_decomposition(d, g)
    assert "edge (1, 2) not covered" in problems


def test_renumber_is_breadth_first():
    d = renumber(
        4,
        1,
        {10: -1, 7: 10, 3: 7, 5: 10},
        {10: frozenset({0}), 7: frozenset({0, 1}), 3: frozenset({1, 2}), 5: frozenset({0, 3})},
        root=10,
    )
    assert d.parent == (-1, 0, 0, 2)
    assert d.bag[1] == frozenset({0, 3})
    assert d.bag[3] == frozenset({1, 2})
    assert d.depth == (0, 1, 1, 2)


def test_bag_graph_has_adhesion_cliques():
    g = cycle(6)
    d = decompose(g, 2)
    for x in d.nodes:
        bg = build_bag_graph(d, g, x)
        assert bg.vertices == d.bag_order[x]
        for z in d.children[x]:
            assert len(bg.child_edges(z)) == len(d.adh[z]) * (len(d.adh[z]) - 1) // 2
        for u, w in bg.normal_edges():
            assert g.has_edge(u, w)
            assert (w, NORMAL) in bg.incident[u]


def _sparse_random(seed: int, n_lo: int, n_hi: int) -> tuple[Graph, int]:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    k = int(rng.integers(1, 4))
    g = random_graph(rng, n, int(rng.integers(n, 3 * n + 1)))
    return sparsify(g, k), k


@pytest.mark.parametrize("seed", range(60))
def test_random_sparse_graphs_get_kk_unbreakable_bags(seed):
    g, k = _sparse_random(seed, 5, 20)
    d = decompose(g, k)
    assert validate_decomposition(d, g, k) == []
    assert verify_unbreakable(d, g, k, k)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(500))
def test_random_sparse_graphs_up_to_forty_vertices(seed):
    g, k = _sparse_random(seed, 5, 40)
    d = regularize(build_unbreakable_decomposition(g, k, work_limit=50_000_000), g)
    assert validate_decomposition(d, g, k) == []
    assert verify_unbreakable(d, g, k, k, work_limit=50_000_000)


def test_two_squares_on_a_hinge_keep_adhesion_two():
    # Two 4-cycles sharing the edge 0-1, with a pendant path off vertex 5.
    g = Graph.from_edges(
        8,
        [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 1), (5, 6), (6, 7)],
    )
    d = decompose(g, 2)
    assert validate_decomposition(d, g, 2) == []
    assert verify_unbreakable(d, g, 2, 2)


def test_minimal_separators_on_a_path():
    h = path(5).networkx
    meter = WorkMeter(10_000, "test")
    found = set(minimal_separators(h, 0, 4, 1, meter, 5))
    assert found == {frozenset({1}), frozenset({2}), frozenset({3})}
    assert set(minimal_separators(h, 0, 1, 2, meter, 5)) == set()


def test_minimal_separators_respect_the_budget():
    g = cycle(6)
    meter = WorkMeter(10_000, "test")
    assert set(minimal_separators(g.networkx, 0, 3, 1, meter, 6)) == set()
    found = set(minimal_separators(g.networkx, 0, 3, 2, meter, 6))
    assert found == {frozenset(s) for s in [(1, 4), (1, 5), (2, 4), (2, 5)]}


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [9, 12])
def test_seeded_search_agrees_with_enumeration(n, k):
    chords = Graph.from_edges(n, [(i, j) for i in range(n) for j in (i + 1, i + 3) if j < n])
    for g in (cycle(n), path(n), chords, complete(n)):
        everything = frozenset(range(n))
        adj = restricted_adjacency(g, everything)
        meter = WorkMeter(10_000_000, "test")
        full = set(iter_witnesses(adj, everything, k, k, meter, exhaustive_limit=10**9))
        first = next(seeded_witnesses(adj, everything, k, k, meter), None)
        assert (first is None) == (not full)
        assert first is None or first in full


def test_builder_switches_to_seeded_search_on_large_cones():
    g = cycle(30)
    d = regularize(build_unbreakable_decomposition(g, 2, exhaustive_limit=10), g)
    assert validate_decomposition(d, g, 2) == []
    assert verify_unbreakable(d, g, 2, 2)
