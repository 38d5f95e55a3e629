"""Topology of the d-dimensional hypercube Q_d.

Vertices are integers in ``[0, 2**d)`` read as bit vectors.  An edge is the
pair ``(base, dim)`` where ``base`` has bit ``dim`` clear; its endpoints are
``base`` and ``base ^ (1 << dim)``.  Edges are indexed in ``(dim, base)``
order, which is also the order used by every serialization in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, NamedTuple

MAX_DIM = 24


class Edge(NamedTuple):
    base: int
    dim: int

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.base, self.base | (1 << self.dim)


class FourCycle(NamedTuple):
    """Edges listed in cyclic order; ``dims`` is the pair of spanned dimensions."""

    edges: tuple[Edge, Edge, Edge, Edge]
    dims: tuple[int, int]


def _compress(base: int, dim: int) -> int:
    low = base & ((1 << dim) - 1)
    return ((base >> (dim + 1)) << dim) | low


def _expand(rank: int, dim: int) -> int:
    low = rank & ((1 << dim) - 1)
    return ((rank >> dim) << (dim + 1)) | low


class Hypercube:
    """Q_d with cached incidence tables.

    Instances are treated as immutable; use :func:`build` to obtain one.
    """

    def __init__(self, d: int):
        if not isinstance(d, int) or not 1 <= d <= MAX_DIM:
            raise ValueError(f"dimension must be an integer in [1, {MAX_DIM}], got {d!r}")
        self.d = d
        self.n_vertices = 1 << d
        self.n_edges = d << (d - 1)
        self._half = 1 << (d - 1)

    def __repr__(self) -> str:
        return f"Hypercube({self.d})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Hypercube) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("Q", self.d))

    @property
    def max_degree(self) -> int:
        return self.d

    # -- edge indexing -------------------------------------------------
    def edge_index(self, e: Edge) -> int:
        base, dim = e
        if not 0 <= dim < self.d or not 0 <= base < self.n_vertices or base >> dim & 1:
            raise ValueError(f"{e!r} is not an edge of Q_{self.d}")
        return dim * self._half + _compress(base, dim)

    def edge_at(self, index: int) -> Edge:
        dim, rank = divmod(index, self._half)
        return Edge(_expand(rank, dim), dim)

    def edge_between(self, u: int, v: int) -> Edge:
        x = u ^ v
        if x == 0 or x & (x - 1) or max(u, v) >= self.n_vertices:
            raise ValueError(f"{u} and {v} are not adjacent in Q_{self.d}")
        return Edge(min(u, v), x.bit_length() - 1)

    def has_edge(self, e) -> bool:
        try:
            self.edge_index(Edge(*e))
        except (ValueError, TypeError):
            return False
        return True

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.edge_at(i) for i in range(self.n_edges))

    @cached_property
    def endpoints(self) -> tuple[tuple[int, int], ...]:
        return tuple(e.endpoints for e in self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices at each vertex, ordered by dimension."""
        h = self._half
        return tuple(
            tuple(dim * h + _compress(v & ~(1 << dim), dim) for dim in range(self.d))
            for v in range(self.n_vertices)
        )

    @cached_property
    def adjacent(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices sharing an endpoint with each edge."""
        inc = self.incident
        out = []
        for i, (u, v) in enumerate(self.endpoints):
            out.append(tuple(j for j in inc[u] + inc[v] if j != i))
        return tuple(out)

    def distance(self, u: int, v: int) -> int:
        return (u ^ v).bit_count()


@lru_cache(maxsize=None)
def build(d: int) -> Hypercube:
    return Hypercube(d)


def _check_dim(cube: Hypercube, i: int) -> None:
    if not 0 <= i < cube.d:
        raise ValueError(f"dimension index {i} out of range for Q_{cube.d}")


def dimensional_matching(cube: Hypercube, i: int) -> frozenset[Edge]:
    _check_dim(cube, i)
    return frozenset(Edge(_expand(r, i), i) for r in range(cube.n_edges // cube.d))


def parallel_edges(cube: Hypercube, e: Edge) -> frozenset[Edge]:
    """Edges that are non-adjacent to ``e`` and share a 4-cycle with it."""
    cube.edge_index(e)
    return frozenset(Edge(e.base ^ (1 << j), e.dim) for j in range(cube.d) if j != e.dim)


def four_cycles_through(cube: Hypercube, e: Edge) -> list[FourCycle]:
    cube.edge_index(e)
    u, i = e.base, e.dim
    cycles = []
    for j in range(cube.d):
        if j == i:
            continue
        v = u | (1 << i)
        x = u ^ (1 << j)
        cycle = (
            Edge(u, i),
            Edge(v & ~(1 << j), j),
            Edge(x, i),
            Edge(u & ~(1 << j), j),
        )
        cycles.append(FourCycle(cycle, (min(i, j), max(i, j))))
    return cycles


@dataclass(frozen=True)
class SubcubeComponent:
    """One component of the subgraph spanned by a set of dimensional matchings.

    Local vertex ``x`` of ``cube`` corresponds to ``vertex_map[x]`` in the
    ambient cube; local bit ``k`` is ambient dimension ``dims[k]``.
    """

    cube: Hypercube
    dims: tuple[int, ...]
    vertex_map: tuple[int, ...]

    def global_edge(self, local: Edge) -> Edge:
        return Edge(self.vertex_map[local.base], self.dims[local.dim])

    @cached_property
    def edge_map(self) -> tuple[Edge, ...]:
        return tuple(self.global_edge(le) for le in self.cube.edges)


def induced_by_matchings(cube: Hypercube, dims) -> list[SubcubeComponent]:
    dims = tuple(sorted(set(dims)))
    if not dims:
        raise ValueError("need at least one dimension")
    for i in dims:
        _check_dim(cube, i)
    r = len(dims)
    local = build(r)
    free = [j for j in range(cube.d) if j not in dims]
    comps = []
    for fixed in range(1 << len(free)):
        anchor = 0
        for k, j in enumerate(free):
            if fixed >> k & 1:
                anchor |= 1 << j
        vmap = []
        for x in range(1 << r):
            v = anchor
            for k, j in enumerate(dims):
                if x >> k & 1:
                    v |= 1 << j
            vmap.append(v)
        comps.append(SubcubeComponent(local, dims, tuple(vmap)))
    return comps


@dataclass(frozen=True)
class Automorphism:
    """Signed coordinate permutation: bit ``k`` moves to ``perm[k]``, then XOR ``flips``."""

    perm: tuple[int, ...]
    flips: int = 0

    @classmethod
    def identity(cls, d: int) -> "Automorphism":
        return cls(tuple(range(d)), 0)

    def apply_vertex(self, v: int) -> int:
        out = 0
        for k, p in enumerate(self.perm):
            if v >> k & 1:
                out |= 1 << p
        return out ^ self.flips

    def apply_edge(self, e: Edge) -> Edge:
        a = self.apply_vertex(e.base)
        dim = self.perm[e.dim]
        return Edge(a & ~(1 << dim), dim)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self ∘ other``: apply ``other`` first."""
        perm = tuple(self.perm[p] for p in other.perm)
        return Automorphism(perm, self.apply_vertex(other.flips))

    def inverse(self) -> "Automorphism":
        d = len(self.perm)
        inv = [0] * d
        for k, p in enumerate(self.perm):
            inv[p] = k
        g = Automorphism(tuple(inv), 0)
        return Automorphism(tuple(inv), g.apply_vertex(self.flips))

    def edge_permutation(self, cube: Hypercube) -> tuple[int, ...]:
        """``result[i]`` is the index of the image of edge ``i``."""
        return tuple(cube.edge_index(self.apply_edge(e)) for e in cube.edges)


def automorphisms(d: int) -> Iterator[Automorphism]:
    """All ``2**d * d!`` automorphisms, in lexicographic ``(perm, flips)`` order."""
    if d < 1:
        raise ValueError("d must be positive")
    for perm in itertools.permutations(range(d)):
        for flips in range(1 << d):
            yield Automorphism(perm, flips)


@lru_cache(maxsize=8)
def edge_permutations(d: int) -> tuple[tuple[int, ...], ...]:
    cube = build(d)
    return tuple(g.edge_permutation(cube) for g in automorphisms(d))


HAVEL_MORAVEK_MAX_EDGES = 20


def havel_moravek_check(host, coloring) -> bool:
    """Check the path/cycle parity conditions for a proper edge coloring.

    Condition (i): every path has a color used an odd number of times.
    Condition (ii): every cycle uses every color an even number of times.
    Both reduce to the XOR of per-color bits along the walk, so a DFS over
    simple paths from every start vertex decides them.
    """
    from .coloring import is_proper

    if host.n_edges > HAVEL_MORAVEK_MAX_EDGES:
        raise ValueError(f"graph has {host.n_edges} edges; exhaustive check limited to {HAVEL_MORAVEK_MAX_EDGES}")
    if not coloring.is_total() or not is_proper(coloring):
        raise ValueError("coloring must be total and proper")
    colors = coloring.colors
    ends = host.endpoints
    inc = host.incident

    def dfs(start: int, v: int, visited: int, parity: int, first_edge: int) -> bool:
        for ei in inc[v]:
            a, b = ends[ei]
            w = b if a == v else a
            p = parity ^ (1 << colors[ei])
            if w == start:
                if ei != first_edge and p != 0:
                    return False
                continue
            if visited >> w & 1:
                continue
            if p == 0:
                return False
            if not dfs(start, w, visited | (1 << w), p, ei if first_edge < 0 else first_edge):
                return False
        return True

    return all(dfs(s, s, 1 << s, 0, -1) for s in range(host.n_vertices))
