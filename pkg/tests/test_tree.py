from math import ceil, log2

import pytest
from hypothesis import given, settings

from vfc_oracle.core.exceptions import ContractViolation
from vfc_oracle.core.tree import ShortcutIndex, TreeIndex, build_shortcuts, build_tree_index

from .strategies import trees


def ancestors(parent: list[int], v: int) -> list[int]:
    """``v`` and its ancestors, nearest first."""
    out = [v]
    while parent[out[-1]] != -1:
        out.append(parent[out[-1]])
    return out


def naive_lca(parent: list[int], x: int, y: int) -> int:
    above = set(ancestors(parent, x))
    return next(a for a in ancestors(parent, y) if a in above)


@settings(max_examples=60, deadline=None)
@given(trees())
def test_lca_and_ancestry_match_naive(parent):
    index = build_tree_index(parent)
    size = len(parent)
    for x in range(size):
        assert index.depth[x] == len(ancestors(parent, x)) - 1
        for y in range(size):
            assert index.lca(x, y) == naive_lca(parent, x, y)
            assert index.is_ancestor(x, y) == (x in ancestors(parent, y))


@settings(max_examples=60, deadline=None)
@given(trees())
def test_level_ancestor_and_dir(parent):
    index = TreeIndex(parent)
    for v in range(len(parent)):
        chain = ancestors(parent, v)
        for d in range(index.depth[v] + 1):
            assert index.level_ancestor(v, d) == chain[index.depth[v] - d]
        for a in chain[1:]:
            assert parent[index.dir(a, v)] == a
            assert index.is_ancestor(index.dir(a, v), v)


def test_dir_rejects_non_ancestors():
    index = TreeIndex([-1, 0, 0])
    with pytest.raises(ContractViolation):
        index.dir(1, 2)
    with pytest.raises(ContractViolation):
        index.dir(1, 1)
    with pytest.raises(ContractViolation):
        index.level_ancestor(0, 1)


def test_tree_index_requires_single_root():
    with pytest.raises(ContractViolation):
        TreeIndex([-1, -1])
    assert len(TreeIndex([])) == 0


@settings(max_examples=60, deadline=None)
@given(trees(max_size=60))
def test_shortcuts_reach_every_ancestor_in_two_hops(parent):
    shortcuts = build_shortcuts(parent)
    size = len(parent)
    bound = 2 * size * ceil(log2(size)) if size > 1 else 0
    assert len(shortcuts.edges) <= bound
    for y in range(size):
        chain = ancestors(parent, y)
        for u, a in shortcuts.edges:
            if u == y:
                assert a in chain[1:]
        for x in chain[1:]:
            hops = shortcuts.hop_path(x, y)
            assert 1 <= len(hops) <= 2
            assert hops[0][0] == y
            assert hops[-1][1] == x
            for lower, upper in hops:
                assert (lower, upper) in shortcuts.edges
                assert upper in ancestors(parent, lower)[1:]
            if len(hops) == 2:
                assert hops[0][1] == hops[1][0]


def test_shortcuts_on_a_path():
    parent = [-1] + list(range(7))
    shortcuts = ShortcutIndex(parent)
    assert shortcuts.hop_path(0, 7) in ([(7, 0)], [(7, 3), (3, 0)], [(7, 4), (4, 0)])
    assert shortcuts.hop_path(5, 5) == []
    with pytest.raises(ContractViolation):
        shortcuts.hop_path(7, 0)


def test_hop_bound_below_two_is_rejected():
    with pytest.raises(ContractViolation):
        ShortcutIndex([-1, 0], hop_bound=1)
