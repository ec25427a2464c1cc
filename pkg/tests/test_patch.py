import pytest

from vfc_oracle.core.counters import OpCounters, Phase
from vfc_oracle.core.decomposition import TreeDecomp, build_bag_graph, build_bag_graphs
from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.graph import Graph
from vfc_oracle.core.models import SmallGraphKind
from vfc_oracle.core.patch import (
    NeighborJournal,
    SingleChildTables,
    adhesion_neighbor_limit,
    build_patch_set,
    build_patch_sets,
    checksum,
    compute_touched_patches,
    patch_label,
    precompute_patch_connectivity,
)
from vfc_oracle.core.profile import BIG, RestrictedBagGraph
from vfc_oracle.core.smallgraph import SmallGraph

from .strategies import path, star


def single_bag(g: Graph, k: int):
    d = TreeDecomp(g.n, k, [-1], [frozenset(range(g.n))])
    return build_bag_graph(d, g, 0)


@pytest.fixture
def hanging_child():
    """Bag {0,1,2,3} over a child {2,3,4}; vertex 3 reaches the bag only through the child."""
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 4), (3, 4)])
    d = TreeDecomp(5, 2, [-1, 0], [frozenset({0, 1, 2, 3}), frozenset({2, 3, 4})])
    return g, d, build_bag_graphs(d, g)


def test_star_carves_one_big_patch():
    ps = build_patch_set(single_bag(star(5), 2), 3, adhesion_neighbor_limit(2))
    assert ps.patches == [(0, 1, 2), (3,), (4,), (5,)]
    assert ps.big == [True, False, False, False]
    assert ps.normal_neighbors[1] == (0,)
    assert ps.patch_of[4] == 2


def test_tiny_bag_is_one_small_patch():
    ps = build_patch_set(single_bag(path(2), 2), 3, adhesion_neighbor_limit(2))
    assert ps.patches == [(0, 1)]
    assert ps.big == [False]


def test_bag_of_limit_size_is_one_big_patch():
    ps = build_patch_set(single_bag(path(3), 2), 3, adhesion_neighbor_limit(2))
    assert ps.patches == [(0, 1, 2)]
    assert ps.big == [True]


def test_no_failures_touch_nothing():
    bg = single_bag(star(5), 2)
    ps = build_patch_set(bg, 3, adhesion_neighbor_limit(2))
    state = compute_touched_patches(ps, RestrictedBagGraph(bg, frozenset(), limit=3))
    assert state.touched == frozenset()


def test_failed_vertex_touches_its_patch():
    bg = single_bag(star(5), 2)
    ps = build_patch_set(bg, 3, adhesion_neighbor_limit(2))
    restricted = RestrictedBagGraph(bg, frozenset({4}), limit=3)
    state = compute_touched_patches(ps, restricted)
    assert state.touched == frozenset({2})


def test_failed_center_isolates_leaves():
    bg = single_bag(star(5), 2)
    ps = build_patch_set(bg, 3, adhesion_neighbor_limit(2))
    restricted = RestrictedBagGraph(bg, frozenset({0}), limit=3)
    state = precompute_patch_connectivity(ps, restricted, compute_touched_patches(ps, restricted))
    assert state.labels == {1: 1, 2: 2}
    assert patch_label(ps, restricted, state, 2) == 2
    assert patch_label(ps, restricted, state, 3) == 3


def test_masked_edge_inside_a_patch_touches_it():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    d = TreeDecomp(4, 2, [-1, 0], [frozenset({0, 1, 2}), frozenset({1, 2, 3})])
    bg = build_bag_graph(d, g, 0)
    ps = build_patch_set(bg, 3, adhesion_neighbor_limit(2))
    assert ps.patches == [(0, 1, 2)]
    before = checksum([ps])
    state = compute_touched_patches(ps, RestrictedBagGraph(bg, frozenset(), frozenset({(1, 2, 1)}), limit=3))
    assert state.touched == frozenset({0})
    assert checksum([ps]) == before


def test_masked_edge_decrements_small_patch_counter(hanging_child):
    _, d, bag_graphs = hanging_child
    ps = build_patch_sets(d, bag_graphs)[0]
    assert ps.patches == [(0, 1, 2), (3,)]
    assert ps.adhesion_neighbors[1] == {2: 1}

    open_bg = RestrictedBagGraph(bag_graphs[0], frozenset(), limit=3)
    assert patch_label(ps, open_bg, compute_touched_patches(ps, open_bg), 3) == BIG

    masked = RestrictedBagGraph(bag_graphs[0], frozenset(), frozenset({(2, 3, 1)}), limit=3)
    state = compute_touched_patches(ps, masked)
    assert state.touched == frozenset()
    assert state.overrides == {1: {}}
    assert ps.adhesion_neighbors[1] == {2: 1}
    assert patch_label(ps, masked, state, 3) == 3
    assert patch_label(ps, masked, state, 0) == BIG


def test_journal_rollback_restores_checksum(hanging_child):
    _, d, bag_graphs = hanging_child
    patch_sets = build_patch_sets(d, bag_graphs)
    before = checksum(patch_sets)
    journal = NeighborJournal()
    masked = RestrictedBagGraph(bag_graphs[0], frozenset(), frozenset({(2, 3, 1)}), limit=3)
    state = compute_touched_patches(patch_sets[0], masked, journal)
    assert state.overrides is None
    assert patch_sets[0].adhesion_neighbors[1] == {}
    assert len(journal) == 1
    assert checksum(patch_sets) != before
    assert journal.rollback(patch_sets) == 1
    assert checksum(patch_sets) == before
    assert len(journal) == 0


def test_single_child_entry_follows_the_child_profile(hanging_child):
    _, d, bag_graphs = hanging_child
    counters = OpCounters()
    tables = SingleChildTables(d, bag_graphs, build_patch_sets(d, bag_graphs), counters=counters)
    cut = SmallGraph.empty((2, 3), SmallGraphKind.PROFILE)
    joined = SmallGraph.from_edges((2, 3), [(2, 3)], SmallGraphKind.PROFILE)

    entry = tables.entry(0, 1, cut, [])
    assert tables.label(entry, 3) == 3
    assert tables.label(entry, 0) == BIG
    assert tables.entry(0, 1, cut, []) is entry
    assert counters.get(Phase.PREPROCESS, "memo_hit") == 1

    _, label = tables.query(0, 1, joined, [], 3)
    assert label == BIG


def test_single_child_tables_without_patches(hanging_child):
    _, d, bag_graphs = hanging_child
    tables = SingleChildTables(d, bag_graphs, None, memoize=False)
    cut = SmallGraph.empty((2, 3), SmallGraphKind.PROFILE)
    entry = tables.entry(0, 1, cut, [])
    assert entry.state is None
    assert tables.label(entry, 3) == 3
    assert tables.entry(0, 1, cut, []) is not entry


def test_single_child_entry_contract(hanging_child):
    _, d, bag_graphs = hanging_child
    tables = SingleChildTables(d, bag_graphs, None)
    cut = SmallGraph.empty((2, 3), SmallGraphKind.PROFILE)
    with pytest.raises(ContractViolation):
        tables.entry(0, 0, cut, [])
    with pytest.raises(ContractViolation):
        tables.entry(0, 1, cut, [0])
