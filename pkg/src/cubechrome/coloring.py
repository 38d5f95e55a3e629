"""Partial and total edge colorings and the relations between them.

A coloring stores one color per edge index, ``0`` meaning uncolored.  Colors
are 1-based.  Properness is never enforced on :class:`PartialColoring`; it is
a predicate checked by the operations that need it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .hypercube import Hypercube, dimensional_matching


def _edge_key(host, e):
    return host.edge_index(e)


@dataclass(frozen=True)
class PartialColoring:
    host: object
    palette: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.palette < 1:
            raise ValueError("palette must be at least 1")
        if len(self.colors) != self.host.n_edges:
            raise ValueError("color vector length does not match the host edge count")
        for c in self.colors:
            if not 0 <= c <= self.palette:
                raise ValueError(f"color {c} outside [1, {self.palette}]")

    @classmethod
    def empty(cls, host, palette: int | None = None) -> "PartialColoring":
        return cls(host, palette or host.max_degree, (0,) * host.n_edges)

    @classmethod
    def from_edges(cls, host, assignment, palette: int | None = None) -> "PartialColoring":
        """Build from a mapping (or pair iterable) of edge -> color."""
        items = assignment.items() if isinstance(assignment, Mapping) else assignment
        colors = [0] * host.n_edges
        for e, c in items:
            i = _edge_key(host, e)
            if colors[i] and colors[i] != c:
                raise ValueError(f"edge {e} assigned two colors")
            colors[i] = c
        return cls(host, palette or host.max_degree, tuple(colors))

    def __len__(self) -> int:
        return sum(1 for c in self.colors if c)

    def __getitem__(self, e) -> int:
        return self.colors[self.host.edge_index(e)]

    def get(self, e, default=None):
        c = self.colors[self.host.edge_index(e)]
        return c if c else default

    def colored(self) -> list[int]:
        """Indices of colored edges."""
        return [i for i, c in enumerate(self.colors) if c]

    def items(self) -> Iterator[tuple[object, int]]:
        for i, c in enumerate(self.colors):
            if c:
                yield self.host.edge_at(i), c

    def used_colors(self) -> set[int]:
        return {c for c in self.colors if c}

    def color_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.colors:
            if c:
                out[c] = out.get(c, 0) + 1
        return out

    def is_total(self) -> bool:
        return all(self.colors)

    def restrict(self, indices: Iterable[int]) -> "PartialColoring":
        keep = set(indices)
        return PartialColoring(
            self.host, self.palette, tuple(c if i in keep else 0 for i, c in enumerate(self.colors))
        )

    def uncolor(self, index: int) -> "PartialColoring":
        cs = list(self.colors)
        cs[index] = 0
        return PartialColoring(self.host, self.palette, tuple(cs))

    def with_color(self, index: int, color: int) -> "PartialColoring":
        cs = list(self.colors)
        cs[index] = color
        return PartialColoring(self.host, self.palette, tuple(cs))

    def relabel(self, mapping: Mapping[int, int], palette: int | None = None) -> "PartialColoring":
        return PartialColoring(
            self.host, palette or self.palette, tuple(mapping[c] if c else 0 for c in self.colors)
        )


class ProperColoring(PartialColoring):
    """A total proper coloring; construction fails otherwise."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_total():
            raise ValueError("proper coloring must color every edge")
        if not is_proper(self):
            raise ValueError("coloring is not proper")

    @classmethod
    def from_partial(cls, c: PartialColoring) -> "ProperColoring":
        return cls(c.host, c.palette, c.colors)

    def color_class(self, color: int) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c == color]


@dataclass(frozen=True)
class ListAssignment:
    host: object
    lists: tuple[frozenset, ...]

    @classmethod
    def from_edges(cls, host, assignment: Mapping) -> "ListAssignment":
        lists = [frozenset()] * host.n_edges
        for e, cs in assignment.items():
            lists[host.edge_index(e)] = frozenset(cs)
        return cls(host, tuple(lists))

    @classmethod
    def from_coloring(cls, phi: PartialColoring) -> "ListAssignment":
        return cls(phi.host, tuple(frozenset([c]) if c else frozenset() for c in phi.colors))

    def __len__(self) -> int:
        return sum(1 for x in self.lists if x)

    def color_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in self.lists:
            for c in x:
                out[c] = out.get(c, 0) + 1
        return out


def standard_coloring(cube: Hypercube) -> ProperColoring:
    h = cube.n_edges // cube.d
    return ProperColoring(cube, cube.d, tuple(i // h + 1 for i in range(cube.n_edges)))


def is_proper(c: PartialColoring) -> bool:
    colors = c.colors
    for inc in c.host.incident:
        seen = 0
        for ei in inc:
            col = colors[ei]
            if col:
                bit = 1 << col
                if seen & bit:
                    return False
                seen |= bit
    return True


def _same_host(f: PartialColoring, phi: PartialColoring) -> None:
    if f.host != phi.host:
        raise ValueError("colorings live on different hosts")


def avoids(f: PartialColoring, phi: PartialColoring) -> bool:
    _same_host(f, phi)
    return all(not p or p != c for c, p in zip(f.colors, phi.colors))


def avoids_lists(f: PartialColoring, lists: ListAssignment) -> bool:
    _same_host(f, lists)
    return all(c not in x for c, x in zip(f.colors, lists.lists))


def agrees(f: PartialColoring, phi: PartialColoring) -> bool:
    _same_host(f, phi)
    return all(not p or p == c for c, p in zip(f.colors, phi.colors))


@dataclass(frozen=True)
class BicoloredComponent:
    """Connected component of the subgraph colored ``a`` or ``b``.

    ``edges`` follow the path or cycle order; ``closed`` marks a cycle.
    """

    colors: tuple[int, int]
    edges: tuple[int, ...]
    closed: bool


def bicolored_components(f: PartialColoring, a: int, b: int) -> list[BicoloredComponent]:
    if a == b:
        raise ValueError("bicolored components need two distinct colors")
    host = f.host
    ends = host.endpoints
    inc = host.incident
    wanted = [i for i, c in enumerate(f.colors) if c == a or c == b]
    in_sub = set(wanted)
    seen: set[int] = set()
    comps = []

    def sub_edges_at(v):
        return [ei for ei in inc[v] if ei in in_sub]

    for start in wanted:
        if start in seen:
            continue
        # walk to one end of the path (or around the cycle)
        u, v = ends[start]
        order = [start]
        seen.add(start)
        closed = False
        for tip in (v, u):
            prev = start
            x = tip
            while True:
                nxt = [ei for ei in sub_edges_at(x) if ei != prev]
                if not nxt:
                    break
                ei = nxt[0]
                if ei == start:
                    closed = True
                    break
                seen.add(ei)
                if tip == v:
                    order.append(ei)
                else:
                    order.insert(0, ei)
                p, q = ends[ei]
                x = q if p == x else p
                prev = ei
            if closed:
                break
        comps.append(BicoloredComponent((a, b), tuple(order), closed))
    return comps


def interchange(f: ProperColoring, a: int, b: int, component) -> ProperColoring:
    """Swap ``a`` and ``b`` on one maximal bicolored path or cycle."""
    edges = component.edges if isinstance(component, BicoloredComponent) else tuple(component)
    target = frozenset(edges)
    if not any(frozenset(c.edges) == target for c in bicolored_components(f, a, b)):
        raise ValueError("component is not a maximal bicolored path or cycle")
    cs = list(f.colors)
    for i in target:
        cs[i] = b if cs[i] == a else a
    return ProperColoring(f.host, f.palette, tuple(cs))


def _endpoints_of(host, e):
    return host.endpoints[host.edge_index(e)]


def edge_distance(host, e1, e2) -> float:
    """Fewest edges on a path joining an endpoint of ``e1`` to one of ``e2``."""
    a = _endpoints_of(host, e1)
    b = _endpoints_of(host, e2)
    return min(host.distance(x, y) for x in a for y in b)


def classes_are_induced_matchings(phi: PartialColoring) -> bool:
    host = phi.host
    by_color: dict[int, list] = {}
    for i, c in enumerate(phi.colors):
        if c:
            by_color.setdefault(c, []).append(host.endpoints[i])
    for ends in by_color.values():
        for i in range(len(ends)):
            for j in range(i + 1, len(ends)):
                if min(host.distance(x, y) for x in ends[i] for y in ends[j]) < 2:
                    return False
    return True


@dataclass(frozen=True)
class ColorClassProfile:
    d: int
    counts: dict[int, int]
    distinct: dict[int, int]
    heavy: frozenset[int]
    light: frozenset[int]

    @property
    def heavy_threshold(self) -> Fraction:
        return Fraction(7 * self.d, 8) + 1

    @property
    def light_threshold(self) -> Fraction:
        return Fraction(7 * self.d, 8) - 2


def profile(f: PartialColoring, phi: PartialColoring) -> ColorClassProfile:
    """Per-class counts of phi-colored edges, classified heavy/light."""
    _same_host(f, phi)
    d = f.palette
    counts = {c: 0 for c in range(1, d + 1)}
    distinct: dict[int, set] = {c: set() for c in range(1, d + 1)}
    for c, p in zip(f.colors, phi.colors):
        if p and c:
            counts[c] += 1
            distinct[c].add(p)
    heavy_at = Fraction(7 * d, 8) + 1
    light_at = Fraction(7 * d, 8) - 2
    return ColorClassProfile(
        d,
        counts,
        {c: len(s) for c, s in distinct.items()},
        frozenset(c for c, n in counts.items() if n >= heavy_at),
        frozenset(c for c, n in counts.items() if n <= light_at),
    )


def dims_used(phi: PartialColoring) -> set[int]:
    """Dimensions containing at least one colored edge (hypercube hosts)."""
    h = phi.host.n_edges // phi.host.d
    return {i // h for i, c in enumerate(phi.colors) if c}


__all__ = [
    "PartialColoring",
    "ProperColoring",
    "ListAssignment",
    "BicoloredComponent",
    "ColorClassProfile",
    "standard_coloring",
    "is_proper",
    "avoids",
    "avoids_lists",
    "agrees",
    "bicolored_components",
    "interchange",
    "edge_distance",
    "classes_are_induced_matchings",
    "profile",
    "dims_used",
    "dimensional_matching",
]
