"""Rebalancing a standard coloring by 4-cycle interchanges before relabeling.

Starting from the standard coloring, classes holding too many colored edges
of ``phi`` hand colored edges to light classes by swapping colors on fresh
bicolored 4-cycles.  Once every class carries at most ``7d/8`` colored edges
the class/color matching is attempted.  The result, when present, is always
verified; success itself depends on the hypotheses, which are only reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from ..coloring import PartialColoring, ProperColoring, standard_coloring
from ..hypercube import Edge, Hypercube, parallel_edges
from ..solver import relabel_avoid
from ._blocks import checked, dim_of

FEASIBILITY_COEFF = Fraction(109, 1776)


@dataclass(frozen=True)
class RebalanceParams:
    d: int
    variant: str = "i"
    per_color_cap: Fraction = Fraction(0)
    max_per_matching: Fraction = Fraction(0)
    max_parallel: Fraction = Fraction(0)
    c1: Fraction = Fraction(1)

    @property
    def c2(self) -> Fraction:
        return 2 * self.c1 * (self.c1 + 2) * 34**2

    @property
    def target(self) -> Fraction:
        return Fraction(7 * self.d, 8)

    @property
    def heavy_threshold(self) -> Fraction:
        return self.target + 1

    @property
    def light_threshold(self) -> Fraction:
        return self.target - 2

    @property
    def sparsity_limit(self) -> Fraction:
        """Variant ii: allowed unused colored parallels of a heavy cycle edge."""
        return Fraction(self.d) / (34 * self.c1)

    @classmethod
    def part_i(cls, d: int, a=None, b=None) -> "RebalanceParams":
        a = Fraction(floor(Fraction(117, 100) * d)) if a is None else Fraction(a)
        b = a if b is None else Fraction(b)
        return cls(d, "i", Fraction(d, 8), a, b)

    @classmethod
    def part_ii(cls, d: int, c1=1) -> "RebalanceParams":
        c1 = Fraction(c1)
        p = cls(d, "ii", Fraction(0), c1 * d, Fraction(d) / (34 * c1), c1)
        return cls(d, "ii", Fraction(d) / p.c2, c1 * d, p.max_parallel, c1)

    def feasible(self) -> bool:
        """The parameter inequality assumed by the sparse avoidance result."""
        if self.variant == "ii":
            return self.c1 >= 1
        a, b, d = self.max_per_matching, self.max_parallel, self.d
        return FEASIBILITY_COEFF * d * d - 2 * b * (a - Fraction(7 * d, 8)) >= 0 and a >= b

    def violations(self, phi: PartialColoring) -> list[str]:
        cube = phi.host
        out = []
        if not self.feasible():
            out.append("parameters violate the feasibility inequality")
        for c, n in phi.color_counts().items():
            if n > self.per_color_cap:
                out.append(f"color {c} on {n} > {self.per_color_cap} edges")
        per_dim = [0] * cube.d
        for i in phi.colored():
            per_dim[dim_of(cube, i)] += 1
        for j, n in enumerate(per_dim):
            if n > self.max_per_matching:
                out.append(f"dimension {j} holds {n} > {self.max_per_matching} colored edges")
        if self.variant == "i":
            worst = max_colored_parallels(phi)
            if worst > self.max_parallel:
                out.append(f"an edge has {worst} > {self.max_parallel} colored parallel edges")
        return out


def max_colored_parallels(phi: PartialColoring) -> int:
    """Largest number of colored edges parallel to a single edge (itself excluded)."""
    cube = phi.host
    tally: dict[int, int] = {}
    for i in phi.colored():
        for p in parallel_edges(cube, cube.edge_at(i)):
            j = cube.edge_index(p)
            tally[j] = tally.get(j, 0) + 1
    return max(tally.values(), default=0)


@dataclass
class RebalanceStep:
    cycle: tuple[int, int, int, int]
    heavy: int
    light: int
    moved: int


@dataclass
class RebalanceTrace:
    steps: list[RebalanceStep] = field(default_factory=list)
    counts_before: dict[int, int] = field(default_factory=dict)
    counts_after: dict[int, int] = field(default_factory=dict)
    used: set[int] = field(default_factory=set)
    warnings: list[str] = field(default_factory=list)
    failure: str | None = None

    @property
    def q(self) -> int:
        return len(self.steps)


def _counts(colors, phi_colors, d) -> dict[int, int]:
    out = {c: 0 for c in range(1, d + 1)}
    for c, p in zip(colors, phi_colors):
        if p:
            out[c] += 1
    return out


def _candidate_cycles(cube, cur, phi, used, heavy, light, params):
    """Fresh 4-cycles on the original dimensions of ``heavy`` and ``light``."""
    hd, ld = heavy - 1, light - 1
    cs = phi.colors
    out = []
    for i in range(cube.n_edges):
        if not cs[i] or i in used or cur[i] != heavy or dim_of(cube, i) != hd:
            continue
        e = cube.edge_at(i)
        u = e.base
        v = u | (1 << hd)
        x = u ^ (1 << ld)
        opp = cube.edge_index(Edge(x & ~(1 << hd), hd))
        l1 = cube.edge_index(Edge(u & ~(1 << ld), ld))
        l2 = cube.edge_index(Edge(v & ~(1 << ld), ld))
        quad = (i, l2, opp, l1)
        if any(j in used for j in quad):
            continue
        if cur[opp] != heavy or cur[l1] != light or cur[l2] != light:
            continue
        if cs[l1] or cs[l2]:
            continue
        if params.variant == "ii":
            limit = params.sparsity_limit
            if any(_unused_colored_parallels(cube, j, cs, used) > limit for j in (i, opp)):
                continue
        out.append(quad)
    return sorted(out, key=lambda q: tuple(sorted(q)))


def _unused_colored_parallels(cube, i, cs, used) -> int:
    return sum(
        1
        for p in parallel_edges(cube, cube.edge_at(i))
        if cs[j := cube.edge_index(p)] and j not in used
    )


def avoid_rebalance(cube: Hypercube, phi: PartialColoring, params: RebalanceParams, variant: str | None = None):
    """Returns ``(coloring or None, trace)``."""
    if variant is not None and variant != params.variant:
        params = RebalanceParams(params.d, variant, params.per_color_cap, params.max_per_matching, params.max_parallel, params.c1)
    d = cube.d
    trace = RebalanceTrace(warnings=params.violations(phi))
    cur = list(standard_coloring(cube).colors)
    counts = _counts(cur, phi.colors, d)
    trace.counts_before = dict(counts)
    target = params.target
    while True:
        over = [c for c in range(1, d + 1) if counts[c] > target]
        if not over:
            break
        heavy = max(over, key=lambda c: (counts[c], -c))
        lights = sorted(
            (c for c in range(1, d + 1) if counts[c] <= params.light_threshold),
            key=lambda c: (counts[c], c),
        )
        chosen = None
        for light in lights:
            cands = _candidate_cycles(cube, cur, phi, trace.used, heavy, light, params)
            if cands:
                chosen = (light, cands[0])
                break
        if chosen is None:
            trace.failure = f"no admissible 4-cycle for heavy class {heavy}"
            trace.counts_after = dict(counts)
            return None, trace
        light, quad = chosen
        moved = sum(1 for j in (quad[0], quad[2]) if phi.colors[j])
        for j in quad:
            cur[j] = light if cur[j] == heavy else heavy
        counts[heavy] -= moved
        counts[light] += moved
        trace.used.update(quad)
        trace.steps.append(RebalanceStep(quad, heavy, light, moved))
    trace.counts_after = dict(counts)
    f = ProperColoring(cube, d, tuple(cur))
    g = relabel_avoid(f, phi)
    if g is None:
        trace.failure = "class/color graph has no perfect matching after rebalancing"
        return None, trace
    return checked(g, phi), trace
