"""Constant-time lca via Euler tour + sparse table, plus level ancestors by binary lifting."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from vfc_oracle.core.exceptions import ContractViolation


class TreeIndex:
    """Ancestor queries over a rooted tree given as a parent array (root has parent -1)."""

    __slots__ = ("parent", "depth", "first", "last", "euler", "_euler_depth", "_table", "_log", "_up")

    def __init__(self, parent: Sequence[int]):
        size = len(parent)
        self.parent: list[int] = list(parent)
        roots = [v for v in range(size) if self.parent[v] == -1]
        if size and len(roots) != 1:
            raise ContractViolation(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(size)]
        for v, p in enumerate(self.parent):
            if p != -1:
                children[p].append(v)

        self.depth: list[int] = [0] * size
        self.first: list[int] = [0] * size
        self.last: list[int] = [0] * size
        euler: list[int] = []
        if size:
            # Iterative Euler tour; the parent is re-emitted after each child.
            stack: list[tuple[int, int]] = [(roots[0], 0)]
            self.first[roots[0]] = 0
            euler.append(roots[0])
            while stack:
                v, i = stack[-1]
                if i < len(children[v]):
                    stack[-1] = (v, i + 1)
                    c = children[v][i]
                    self.depth[c] = self.depth[v] + 1
                    self.first[c] = len(euler)
                    euler.append(c)
                    stack.append((c, 0))
                else:
                    stack.pop()
                    self.last[v] = len(euler) - 1
                    if stack:
                        euler.append(stack[-1][0])
        self.euler = euler

        depth_arr = np.asarray(self.depth, dtype=np.int64)
        self._euler_depth = depth_arr[np.asarray(euler, dtype=np.int64)] if euler else np.empty(0, dtype=np.int64)
        m = len(euler)
        self._log = np.zeros(m + 1, dtype=np.int64)
        if m > 1:
            self._log[2:] = np.floor(np.log2(np.arange(2, m + 1))).astype(np.int64)
        levels = int(self._log[m]) + 1 if m else 1
        table = np.empty((levels, max(m, 1)), dtype=np.int64)
        table[0, :m] = np.arange(m)
        for j in range(1, levels):
            half = 1 << (j - 1)
            width = m - (1 << j) + 1
            left = table[j - 1, :width]
            right = table[j - 1, half : half + width]
            table[j, :width] = np.where(self._euler_depth[left] <= self._euler_depth[right], left, right)
        self._table = table

        up_levels = max(1, (max(self.depth, default=0)).bit_length())
        up = np.empty((up_levels, max(size, 1)), dtype=np.int64)
        if size:
            up[0, :size] = [p if p != -1 else v for v, p in enumerate(self.parent)]
            for j in range(1, up_levels):
                up[j, :size] = up[j - 1, up[j - 1, :size]]
        self._up = up

    def __len__(self) -> int:
        return len(self.parent)

    def is_ancestor(self, x: int, y: int) -> bool:
        """``x`` is an ancestor of ``y`` or equal to it."""
        return self.first[x] <= self.first[y] <= self.last[x]

    def lca(self, x: int, y: int) -> int:
        lo, hi = self.first[x], self.first[y]
        if lo > hi:
            lo, hi = hi, lo
        j = int(self._log[hi - lo + 1])
        left = int(self._table[j, lo])
        right = int(self._table[j, hi - (1 << j) + 1])
        best = left if self._euler_depth[left] <= self._euler_depth[right] else right
        return self.euler[best]

    def level_ancestor(self, v: int, d: int) -> int:
        diff = self.depth[v] - d
        if diff < 0:
            raise ContractViolation(f"node {v} at depth {self.depth[v]} has no ancestor at depth {d}")
        j = 0
        while diff:
            if diff & 1:
                v = int(self._up[j, v])
            diff >>= 1
            j += 1
        return v

    def dir(self, x: int, y: int) -> int:
        """Child of ``x`` on the path towards its strict descendant ``y``."""
        if x == y or not self.is_ancestor(x, y):
            raise ContractViolation(f"dir({x}, {y}): {x} is not a strict ancestor of {y}")
        return self.level_ancestor(y, self.depth[x] + 1)
