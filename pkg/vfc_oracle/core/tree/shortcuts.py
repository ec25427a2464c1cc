"""Two-hop tree shortcutting by recursive centroid separators.

Every part of the recursion contributes edges from its separator s to the part's ancestors
of s and from the part's descendants of s to s. Two nodes first split by separator s (or with
s being one of them) are joined through s, so each ancestor pair needs at most two edges.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from vfc_oracle.core.exceptions import ContractViolation

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class SeparatorPart:
    separator: int
    below: list[int] = field(default_factory=list)  # part descendants of s, parents before children
    above: list[int] = field(default_factory=list)  # part ancestors of s, nearest first


class ShortcutIndex:
    def __init__(self, parent: Sequence[int], hop_bound: int = 2):
        if hop_bound < 2:
            raise ContractViolation(f"hop bound must be at least 2, got {hop_bound}")
        self.hop_bound = hop_bound
        self.parent = list(parent)
        size = len(self.parent)
        self.children: list[list[int]] = [[] for _ in range(size)]
        for v, p in enumerate(self.parent):
            if p != -1:
                self.children[p].append(v)
        self.chain: list[list[int]] = [[] for _ in range(size)]
        self.parts: list[SeparatorPart] = []
        self.edges: set[tuple[int, int]] = set()
        if size:
            self._decompose()
        logger.debug(f"shortcutting: {size} nodes, {len(self.edges)} edges, {len(self.parts)} parts")

    def _neighbors(self, v: int, label: list[int], tag: int) -> list[int]:
        out = [c for c in self.children[v] if label[c] == tag]
        p = self.parent[v]
        if p != -1 and label[p] == tag:
            out.append(p)
        return out

    def _centroid(self, part: list[int], label: list[int], tag: int) -> int:
        order, seen, prev = [part[0]], {part[0]}, {part[0]: -1}
        for v in order:
            for w in self._neighbors(v, label, tag):
                if w not in seen:
                    seen.add(w)
                    prev[w] = v
                    order.append(w)
        size = dict.fromkeys(order, 1)
        for v in reversed(order[1:]):
            size[prev[v]] += size[v]
        total = len(order)
        best = None
        for v in sorted(order):
            heaviest = total - size[v]
            for w in self._neighbors(v, label, tag):
                if prev.get(w) == v:
                    heaviest = max(heaviest, size[w])
            if 2 * heaviest <= total:
                best = v
                break
        return best if best is not None else min(order)

    def _decompose(self) -> None:
        label = [0] * len(self.parent)
        next_tag = 1
        work = [(0, list(range(len(self.parent))))]
        while work:
            tag, part = work.pop()
            s = self._centroid(part, label, tag)
            piece = SeparatorPart(s)
            for v in part:
                self.chain[v].append(s)
            below = [s]
            for v in below:
                for c in self.children[v]:
                    if label[c] == tag:
                        below.append(c)
            piece.below = below[1:]
            a = self.parent[s]
            while a != -1 and label[a] == tag:
                piece.above.append(a)
                a = self.parent[a]
            self.edges.update((v, s) for v in piece.below)
            self.edges.update((s, a) for a in piece.above)
            self.parts.append(piece)

            label[s] = -1
            for start in sorted(self._neighbors(s, label, tag)):
                if label[start] != tag:
                    continue
                component = [start]
                label[start] = next_tag
                for v in component:
                    for w in self._neighbors(v, label, tag):
                        label[w] = next_tag
                        component.append(w)
                work.append((next_tag, component))
                next_tag += 1

    def hop_path(self, x: int, y: int) -> list[tuple[int, int]]:
        """Shortcut edges ``(descendant, ancestor)`` leading from ``y`` up to its ancestor ``x``."""
        if x == y:
            return []
        cx, cy = self.chain[x], self.chain[y]
        common = 0
        while common < len(cx) and common < len(cy) and cx[common] == cy[common]:
            common += 1
        if common == 0:
            raise ContractViolation(f"hop_path({x}, {y}): nodes share no part")
        s = cx[common - 1]
        if s == x or s == y:
            if (y, x) not in self.edges:
                raise ContractViolation(f"hop_path({x}, {y}): {x} is not an ancestor of {y}")
            return [(y, x)]
        if (y, s) not in self.edges or (s, x) not in self.edges:
            raise ContractViolation(f"hop_path({x}, {y}): {x} is not an ancestor of {y}")
        return [(y, s), (s, x)]
