import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from vfc_oracle.core.counters import OpCounters, Phase
from vfc_oracle.core.decomposition import build_bag_graphs, build_unbreakable_decomposition, regularize
from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.torso import Memo, TorsoStore, compose_torsos, compute_parent_child_torsos, direct_torso, make_torso
from vfc_oracle.core.tree import build_shortcuts

from .strategies import cycle, graphs


def test_compose_relays_through_the_middle_adhesion():
    t1 = make_torso((1,), (2, 3), [(1, 2)])
    t2 = make_torso((2, 3), (4,), [(2, 3), (3, 4)])
    composed = compose_torsos(t1, t2)
    assert composed.upper == (1,)
    assert composed.lower == (4,)
    assert composed.graph.edges() == [(1, 4)]


def test_compose_without_relay():
    t1 = make_torso((1,), (2, 3), [(1, 2)])
    t2 = make_torso((2, 3), (4,), [(3, 4)])
    assert compose_torsos(t1, t2).graph.edges() == []


def test_compose_keeps_shared_terminals():
    # Vertex 1 lies in both outer adhesions, so it never relays.
    t1 = make_torso((1, 2), (1, 3), [(2, 1), (1, 3)])
    t2 = make_torso((1, 3), (1, 4), [(3, 4)])
    edges = compose_torsos(t1, t2).graph.edges()
    assert (1, 2) in edges
    assert (1, 4) in edges
    assert (2, 4) not in edges


def test_compose_rejects_mismatched_torsos():
    with pytest.raises(ContractViolation):
        compose_torsos(make_torso((1,), (2,), []), make_torso((3,), (4,), []))


def test_compose_memo_hits():
    memo = Memo()
    counters = OpCounters()
    t1 = make_torso((1,), (2, 3), [(1, 2)])
    t2 = make_torso((2, 3), (4,), [(2, 3), (3, 4)])
    with counters.running(Phase.QUERY):
        first = compose_torsos(t1, t2, memo, counters)
        second = compose_torsos(t1, t2, memo, counters)
    assert first == second
    assert counters.get(Phase.QUERY, "memo_lookup") == 2
    assert counters.get(Phase.QUERY, "memo_hit") == 1


def test_memo_limit():
    memo = Memo(limit=1)
    memo.remember("a", 1)
    assert memo.remember("b", 2) == 2
    assert list(memo) == ["a"]


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=10), integers(1, 3))
def test_stored_torsos_match_direct_search(g, k):
    d = regularize(build_unbreakable_decomposition(g, k), g)
    parent_child = compute_parent_child_torsos(d, build_bag_graphs(d, g))
    for (x, z), torso in parent_child.items():
        assert torso == direct_torso(g, d, x, z)
    shortcuts = build_shortcuts(d.parent)
    for memoize in (True, False):
        store = TorsoStore(d, shortcuts, parent_child, memoize=memoize)
        for y in d.nodes:
            x = d.parent[y]
            while x != -1:
                assert store.query(x, y) == direct_torso(g, d, x, y)
                x = d.parent[x]


def test_direct_torso_needs_strict_ancestor():
    g = cycle(8)
    d = regularize(build_unbreakable_decomposition(g, 2), g)
    with pytest.raises(ContractViolation):
        direct_torso(g, d, 0, 0)
