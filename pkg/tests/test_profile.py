from itertools import combinations

import networkx as nx
from hypothesis import given, settings

from vfc_oracle.core.decomposition import TreeDecomp, build_bag_graph
from vfc_oracle.core.graph import Graph
from vfc_oracle.core.models import SmallGraphKind
from vfc_oracle.core.oracle import Oracle
from vfc_oracle.core.profile import (
    BIG,
    RestrictedBagGraph,
    combine_profile_torso,
    graph_of_labels,
    masked_edges,
    subset_connectivity,
)
from vfc_oracle.core.smallgraph import SmallGraph
from vfc_oracle.core.torso import make_torso

from .strategies import failure_instances, path, star

PROFILE = SmallGraphKind.PROFILE


def single_bag(g: Graph, k: int) -> RestrictedBagGraph:
    d = TreeDecomp(g.n, k, [-1], [frozenset(range(g.n))])
    return RestrictedBagGraph(build_bag_graph(d, g, 0), frozenset(), limit=k + 1)


def test_big_component_joins_far_ends_of_a_path():
    bg = single_bag(path(4), 3)
    labels = subset_connectivity(bg, [0, 3])
    assert labels == {0: BIG, 3: BIG}
    assert graph_of_labels([0, 3], labels, PROFILE).edges() == [(0, 3)]


def test_failed_vertex_splits_the_path():
    bg = single_bag(path(4), 3)
    bg = RestrictedBagGraph(bg.bag_graph, frozenset({1}), limit=4)
    labels = subset_connectivity(bg, [0, 1, 3])
    assert labels == {0: 0, 3: 2}
    assert graph_of_labels([0, 3], labels, PROFILE).edges() == []


def test_star_leaves_meet_in_the_big_component():
    bg = single_bag(star(7), 2)
    labels = subset_connectivity(bg, [3, 6])
    assert labels[3] == labels[6] == BIG


def test_small_components_take_their_smallest_vertex():
    g = Graph.from_edges(6, [(0, 1), (2, 3), (3, 4)])
    bg = single_bag(g, 3)
    assert subset_connectivity(bg, [1, 4, 5]) == {1: 0, 4: 2, 5: 5}
    assert bg.label(3) == 2


def test_masked_edges_follow_the_child_profile():
    d = TreeDecomp(4, 2, [-1, 0], [frozenset({0, 1, 2}), frozenset({1, 2, 3})])
    complete = SmallGraph.from_edges((1, 2), [(1, 2)], PROFILE)
    assert masked_edges(d, 1, complete) == set()
    assert masked_edges(d, 1, SmallGraph.empty((1, 2), PROFILE)) == {(1, 2, 1)}


def test_combine_edgeless_inputs():
    result = combine_profile_torso(SmallGraph.empty((3, 4), PROFILE), make_torso((1, 2), (3, 4), []), frozenset())
    assert result.profile.edges() == []
    assert result.coloring.col == {1: 1, 2: 2, 3: 3, 4: 4}
    assert result.coloring.representative(3) is None
    assert result.coloring.representative(2) == 2


def test_combine_clique_profile_with_single_wire():
    clique = SmallGraph.from_edges((3, 4), [(3, 4)], PROFILE)
    result = combine_profile_torso(clique, make_torso((1, 2), (3, 4), [(4, 1)]), frozenset())
    assert result.profile.edges() == []
    assert result.coloring.col[3] == result.coloring.col[4] == result.coloring.col[1]
    assert result.coloring.representative(3) == 1
    assert result.coloring.representative(2) == 2


def test_combine_chain_relay():
    profile = SmallGraph.from_edges((3, 4), [(3, 4)], PROFILE)
    result = combine_profile_torso(profile, make_torso((1, 2), (3, 4), [(1, 3), (4, 2)]), frozenset())
    assert result.profile.edges() == [(1, 2)]


def test_combine_skips_failed_vertices():
    profile = SmallGraph.from_edges((3, 4), [(3, 4)], PROFILE)
    result = combine_profile_torso(profile, make_torso((1, 2), (3, 4), [(1, 3), (4, 2)]), frozenset({3}))
    assert result.profile.edges() == []
    assert 3 not in result.coloring.col


def test_empty_update_leaves_only_the_root():
    oracle = Oracle.preprocess(path(6), 2)
    oracle.update([])
    root = oracle.decomposition.root
    assert oracle.state.important == [root]
    assert oracle.state.profiles.profiles[root].vertices == ()


@settings(max_examples=40, deadline=None)
@given(failure_instances(max_n=10))
def test_profiles_match_brute_connectivity_in_the_cone(instance):
    g, k, failed = instance
    oracle = Oracle.preprocess(g, k)
    oracle.update(failed)
    d, sparse = oracle.decomposition, oracle.sparsified
    for x, profile in oracle.state.profiles.profiles.items():
        assert profile.vertices == d.adh_order[x]
        live = nx.subgraph(sparse.networkx, d.cone(x) - set(failed))
        for u, v in combinations(d.adh_order[x], 2):
            expected = u in live and v in live and nx.has_path(live, u, v)
            assert profile.has_edge(u, v) == expected
