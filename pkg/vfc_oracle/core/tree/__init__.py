"""Ancestor queries and bounded-hop shortcutting over rooted trees."""

from vfc_oracle.core.tree.index import TreeIndex
from vfc_oracle.core.tree.shortcuts import SeparatorPart, ShortcutIndex


def build_tree_index(parent) -> TreeIndex:
    return TreeIndex(parent)


def build_shortcuts(parent, hop_bound: int = 2) -> ShortcutIndex:
    return ShortcutIndex(parent, hop_bound)


__all__ = [
    "SeparatorPart",
    "ShortcutIndex",
    "TreeIndex",
    "build_shortcuts",
    "build_tree_index",
]
