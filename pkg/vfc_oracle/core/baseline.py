import logging
from collections import deque
from collections.abc import Iterable

from vfc_oracle.core.exceptions import BudgetExceededError
from vfc_oracle.core.graph import Graph
from vfc_oracle.core.models import FailureSet

logger = logging.getLogger(__name__)


class BaselineOracle:
    """Vertex-failure connectivity by BFS around a failed-vertex mark array.

    Linear per query; used while preprocessing torsos and as a cross-check.
    """

    def __init__(self, graph: Graph, budget: int):
        self.graph = graph
        self.budget = budget
        self._failed = bytearray(graph.n)
        self._marked: list[int] = []

    def update(self, failed: FailureSet | Iterable[int]) -> None:
        if isinstance(failed, FailureSet):
            failed = sorted(failed.vertices)
        failed = list(dict.fromkeys(failed))
        if len(failed) > self.budget:
            raise BudgetExceededError(f"{len(failed)} failures exceed baseline budget {self.budget}")
        for v in self._marked:
            self._failed[v] = 0
        for v in failed:
            self._failed[v] = 1
        self._marked = failed

    def query(self, u: int, v: int) -> bool:
        if self._failed[u] or self._failed[v]:
            return False
        if u == v:
            return True
        adjacency = self.graph.adjacency
        seen = bytearray(self._failed)
        seen[u] = 1
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for w in adjacency[x]:
                if w == v:
                    return True
                if not seen[w]:
                    seen[w] = 1
                    queue.append(w)
        return False

    def component_key(self, w: int) -> int | None:
        """Smallest vertex of the component holding ``w``; None when ``w`` failed."""
        if self._failed[w]:
            return None
        adjacency = self.graph.adjacency
        seen = bytearray(self._failed)
        seen[w] = 1
        queue = deque([w])
        smallest = w
        while queue:
            x = queue.popleft()
            smallest = min(smallest, x)
            for y in adjacency[x]:
                if not seen[y]:
                    seen[y] = 1
                    queue.append(y)
        return smallest
