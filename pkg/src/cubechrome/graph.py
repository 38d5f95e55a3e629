"""Simple undirected graphs outside the hypercube family."""

from __future__ import annotations

from collections import deque
from functools import cached_property


class GeneralGraph:
    """Simple graph on vertices ``0..n-1`` with an optional bipartition.

    Edges are stored as sorted pairs in insertion order; that order is the
    edge index order used by colorings and solvers.
    """

    def __init__(self, n: int, edges, bipartition=None):
        self.n_vertices = n
        norm = []
        seen = set()
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v})")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        self.edges = tuple(norm)
        self.n_edges = len(norm)
        self._index = {e: i for i, e in enumerate(norm)}
        self.bipartition = None
        if bipartition is not None:
            left, right = (tuple(sorted(side)) for side in bipartition)
            side = {}
            for v in left:
                side[v] = 0
            for v in right:
                side[v] = 1
            for u, v in norm:
                if side.get(u) is None or side.get(v) is None or side[u] == side[v]:
                    raise ValueError(f"edge ({u}, {v}) violates the bipartition")
            self.bipartition = (left, right)

    def __repr__(self) -> str:
        return f"GeneralGraph(n={self.n_vertices}, m={self.n_edges})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GeneralGraph)
            and other.n_vertices == self.n_vertices
            and other.edges == self.edges
        )

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.edges))

    def edge_index(self, e) -> int:
        u, v = e
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise ValueError(f"({u}, {v}) is not an edge") from None

    def edge_at(self, index: int) -> tuple[int, int]:
        return self.edges[index]

    def has_edge(self, e) -> bool:
        u, v = e
        return (min(u, v), max(u, v)) in self._index

    @property
    def endpoints(self) -> tuple[tuple[int, int], ...]:
        return self.edges

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def adjacent(self) -> tuple[tuple[int, ...], ...]:
        inc = self.incident
        return tuple(
            tuple(j for j in inc[u] + inc[v] if j != i) for i, (u, v) in enumerate(self.edges)
        )

    @property
    def max_degree(self) -> int:
        return max((len(x) for x in self.incident), default=0)

    def degrees(self) -> list[int]:
        return [len(x) for x in self.incident]

    @cached_property
    def _distances(self) -> list[list[float]]:
        nbrs = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        out = []
        for s in range(self.n_vertices):
            dist = [float("inf")] * self.n_vertices
            dist[s] = 0
            q = deque([s])
            while q:
                x = q.popleft()
                for y in nbrs[x]:
                    if dist[y] == float("inf"):
                        dist[y] = dist[x] + 1
                        q.append(y)
            out.append(dist)
        return out

    def distance(self, u: int, v: int) -> float:
        return self._distances[u][v]

    def is_bipartite(self) -> bool:
        color = [-1] * self.n_vertices
        inc = self.incident
        for s in range(self.n_vertices):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for ei in inc[x]:
                    a, b = self.edges[ei]
                    y = b if a == x else a
                    if color[y] < 0:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return False
        return True
