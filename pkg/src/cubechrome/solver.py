"""Exact edge-coloring search and the class/color matching used for relabeling.

Every query is compiled to one bitmask domain per edge (bit ``c`` set when
color ``c`` is admissible) and handed to a single backtracking engine:
most-constrained edge first, ties by edge index, colors ascending.
Existence queries also split the open edges into connected components and
settle each one separately.
Propagation removes a fixed color from adjacent domains and, at vertices
whose degree equals the palette size, forces a color that has only one
remaining carrier.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .coloring import (
    ListAssignment,
    PartialColoring,
    ProperColoring,
    agrees,
    avoids,
    avoids_lists,
    is_proper,
)

LIST_COLOR_MAX_EDGES = 64


class Status(enum.Enum):
    FOUND = "found"
    NONE = "none"
    INDETERMINATE = "indeterminate"


class ImproperPrecoloring(ValueError):
    """Raised when an extension query is given an improper precoloring."""


class BudgetExceeded(Exception):
    pass


@dataclass
class SolveResult:
    status: Status
    witness: ProperColoring | None = None
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @property
    def none(self) -> bool:
        return self.status is Status.NONE


class _Engine:
    def __init__(self, host, t: int, budget: int | None = None):
        self.host = host
        self.t = t
        self.full = ((1 << t) - 1) << 1
        self.adj = host.adjacent
        self.inc = host.incident
        self.full_vertices = [v for v, es in enumerate(self.inc) if len(es) == t]
        self.budget = budget
        self.nodes = 0

    def propagate(self, dom: list[int], queue: list[int]) -> bool:
        adj, inc, full = self.adj, self.inc, self.full
        while True:
            while queue:
                e = queue.pop()
                b = dom[e]
                for a in adj[e]:
                    da = dom[a]
                    if da & b:
                        da &= ~b
                        if not da:
                            return False
                        dom[a] = da
                        if not da & (da - 1):
                            queue.append(a)
            for v in self.full_vertices:
                es = inc[v]
                once = 0
                twice = 0
                for e in es:
                    de = dom[e]
                    twice |= once & de
                    once |= de
                if once != full:
                    return False
                once &= ~twice
                if not once:
                    continue
                for e in es:
                    de = dom[e]
                    x = de & once
                    if x and de & (de - 1):
                        if x & (x - 1):
                            return False
                        dom[e] = x
                        queue.append(e)
            if not queue:
                return True

    def start(self, domains: list[int]) -> list[int] | None:
        dom = [d & self.full for d in domains]
        if any(not d for d in dom):
            return None
        queue = [i for i, d in enumerate(dom) if not d & (d - 1)]
        if not self.propagate(dom, queue):
            return None
        return dom

    def solutions(self, domains: list[int]) -> Iterator[list[int]]:
        dom = self.start(domains)
        if dom is None:
            return
        yield from self._rec(dom)

    def _rec(self, dom: list[int]) -> Iterator[list[int]]:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded
        best = -1
        best_count = 1 << 30
        for i, de in enumerate(dom):
            if de & (de - 1):
                pc = de.bit_count()
                if pc < best_count:
                    best, best_count = i, pc
                    if pc == 2:
                        break
        if best < 0:
            yield dom
            return
        de = dom[best]
        while de:
            b = de & -de
            de ^= b
            nd = dom.copy()
            nd[best] = b
            if self.propagate(nd, [best]):
                yield from self._rec(nd)

    def first(self, domains: list[int]) -> list[int] | None:
        """One solution, splitting the open edges into independent components."""
        dom = self.start(domains)
        if dom is None:
            return None
        return self._first(dom, range(len(dom)))

    def _components(self, free: list[int]) -> list[list[int]]:
        left = set(free)
        adj = self.adj
        comps = []
        for s in free:
            if s not in left:
                continue
            left.discard(s)
            comp = [s]
            stack = [s]
            while stack:
                e = stack.pop()
                for a in adj[e]:
                    if a in left:
                        left.discard(a)
                        comp.append(a)
                        stack.append(a)
            comps.append(comp)
        return comps

    def _first(self, dom: list[int], scope) -> list[int] | None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded
        free = [i for i in scope if dom[i] & (dom[i] - 1)]
        if not free:
            return dom
        comps = self._components(free)
        if len(comps) > 1:
            # components share no open edge, so each can be settled alone
            for comp in sorted(comps, key=len):
                dom = self._first(dom, comp)
                if dom is None:
                    return None
            return dom
        best = min(free, key=lambda i: (dom[i].bit_count(), i))
        de = dom[best]
        while de:
            b = de & -de
            de ^= b
            nd = dom.copy()
            nd[best] = b
            if self.propagate(nd, [best]):
                r = self._first(nd, free)
                if r is not None:
                    return r
        return None


def _decode(dom: list[int]) -> tuple[int, ...]:
    return tuple(d.bit_length() - 1 for d in dom)


def _run(host, t: int, domains: list[int], budget, check) -> SolveResult:
    if t < 1:
        raise ValueError("palette must be at least 1")
    t0 = time.perf_counter()
    eng = _Engine(host, t, budget)
    try:
        sol = eng.first(domains)
    except BudgetExceeded:
        return SolveResult(Status.INDETERMINATE, None, eng.nodes, time.perf_counter() - t0)
    elapsed = time.perf_counter() - t0
    if sol is None:
        return SolveResult(Status.NONE, None, eng.nodes, elapsed)
    witness = ProperColoring(host, t, _decode(sol))
    if not check(witness):
        raise AssertionError("solver produced a witness violating the query")
    return SolveResult(Status.FOUND, witness, eng.nodes, elapsed)


def _palette(host, t):
    return host.max_degree if t is None else t


def _same_host(host, *colorings):
    for c in colorings:
        if c.host != host:
            raise ValueError("coloring host does not match")


def avoid_domains(phi: PartialColoring, t: int) -> list[int]:
    full = ((1 << t) - 1) << 1
    return [full & ~(1 << c) if c else full for c in phi.colors]


def avoid_exact(host, phi: PartialColoring, t: int | None = None, *, budget: int | None = None) -> SolveResult:
    """Find a proper ``t``-edge coloring differing from ``phi`` on every colored edge."""
    _same_host(host, phi)
    t = _palette(host, t)
    return _run(host, t, avoid_domains(phi, t), budget, lambda f: avoids(f, phi))


def _require_proper(phi: PartialColoring) -> None:
    if not is_proper(phi):
        raise ImproperPrecoloring("precoloring is not proper")


def extend_exact(host, phi: PartialColoring, t: int | None = None, *, budget: int | None = None) -> SolveResult:
    _same_host(host, phi)
    _require_proper(phi)
    t = _palette(host, t)
    full = ((1 << t) - 1) << 1
    domains = [(1 << c) & full if c else full for c in phi.colors]
    return _run(host, t, domains, budget, lambda f: agrees(f, phi))


def extend_avoid_exact(
    host, phi: PartialColoring, psi: PartialColoring, t: int | None = None, *, budget: int | None = None
) -> SolveResult:
    _same_host(host, phi, psi)
    _require_proper(phi)
    t = _palette(host, t)
    full = ((1 << t) - 1) << 1
    domains = []
    for p, q in zip(phi.colors, psi.colors):
        d = (1 << p) & full if p else full
        if q:
            d &= ~(1 << q)
        domains.append(d)
    return _run(host, t, domains, budget, lambda f: agrees(f, phi) and avoids(f, psi))


def list_color_exact(
    g, lists: ListAssignment, *, budget: int | None = None, max_edges: int = LIST_COLOR_MAX_EDGES
) -> SolveResult:
    """Proper coloring with every edge colored from its own list."""
    _same_host(g, lists)
    if g.n_edges > max_edges:
        raise ValueError(f"instance has {g.n_edges} edges; limit is {max_edges}")
    if any(c < 1 for x in lists.lists for c in x):
        raise ValueError("list colors must be positive")
    t = max((c for x in lists.lists for c in x), default=1)
    domains = [sum(1 << c for c in x) for x in lists.lists]
    return _run(g, t, domains, budget, lambda f: all(c in x for c, x in zip(f.colors, lists.lists)))


def all_proper_colorings(host, t: int | None = None, domains: list[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Every proper ``t``-edge coloring (optionally restricted by domains)."""
    t = _palette(host, t)
    eng = _Engine(host, t)
    full = eng.full
    for sol in eng.solutions(domains if domains is not None else [full] * host.n_edges):
        yield _decode(sol)


# -- bipartite matching ---------------------------------------------------

def max_bipartite_matching(adj: Mapping) -> dict:
    """Maximum matching by augmenting paths; returns ``{left: right}``.

    ``adj`` maps each left vertex to an iterable of right vertices.  Left
    vertices are processed in mapping order and neighbors in the given order,
    so results are deterministic.
    """
    nbrs = {u: list(vs) for u, vs in adj.items()}
    match_right: dict = {}

    def augment(u, seen) -> bool:
        for v in nbrs[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in nbrs:
        augment(u, set())
    return {u: v for v, u in match_right.items()}


def hall_violator(adj: Mapping, matching: Mapping) -> tuple[set, set] | None:
    """A left set ``S`` with ``|N(S)| < |S|`` certified by a maximum matching."""
    free = [u for u in adj if u not in matching]
    if not free:
        return None
    match_right = {v: u for u, v in matching.items()}
    left, right = set(free), set()
    stack = list(free)
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v in right:
                continue
            right.add(v)
            w = match_right.get(v)
            if w is not None and w not in left:
                left.add(w)
                stack.append(w)
    return left, right


@dataclass
class RelabelGraph:
    """Class/color compatibility graph of a proper coloring against forbidden lists.

    Class ``i`` (the edges colored ``i``) is joined to color ``j`` when no
    edge of the class has ``j`` in its forbidden list.
    """

    d: int
    adjacency: dict[int, list[int]] = field(default_factory=dict)

    @classmethod
    def build(cls, f: PartialColoring, forbidden) -> "RelabelGraph":
        lists = forbidden if isinstance(forbidden, ListAssignment) else ListAssignment.from_coloring(forbidden)
        d = f.palette
        blocked: dict[int, set] = {i: set() for i in range(1, d + 1)}
        for c, x in zip(f.colors, lists.lists):
            if c and x:
                blocked[c].update(x)
        return cls(d, {i: [j for j in range(1, d + 1) if j not in blocked[i]] for i in range(1, d + 1)})

    def perfect_matching(self) -> dict[int, int] | None:
        m = max_bipartite_matching(self.adjacency)
        return m if len(m) == self.d else None

    def anti_hall_set(self) -> set | None:
        m = max_bipartite_matching(self.adjacency)
        v = hall_violator(self.adjacency, m)
        return None if v is None else v[0]


def relabel_avoid(f: ProperColoring, forbidden) -> ProperColoring | None:
    """Rename the classes of ``f`` by a perfect class/color matching, if one exists."""
    m = RelabelGraph.build(f, forbidden).perfect_matching()
    if m is None:
        return None
    g = ProperColoring(f.host, f.palette, tuple(m[c] for c in f.colors))
    lists = forbidden if isinstance(forbidden, ListAssignment) else ListAssignment.from_coloring(forbidden)
    if not avoids_lists(g, lists):
        raise AssertionError("relabeled coloring hits a forbidden color")
    return g
