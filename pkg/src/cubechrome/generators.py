"""Named instance families and seeded random instances for each hypothesis class."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .coloring import (
    ListAssignment,
    PartialColoring,
    classes_are_induced_matchings,
    dims_used,
    edge_distance,
    is_proper,
)
from .graph import GeneralGraph
from .constructive.rebalance import max_colored_parallels
from .hypercube import Hypercube, build

MAX_RETRIES = 200


def counterexample_graph(d: int) -> tuple[GeneralGraph, PartialColoring]:
    """``d`` copies of ``K_{d,d}`` minus an edge, chained into a ring by colored edges.

    Copy ``i`` occupies vertices ``[2d*i, 2d*(i+1))``, side A first.  The
    removed edge joins the first vertex of each side; connecting edge
    ``a_i b_{i+1}`` gets color ``i + 1``.
    """
    if d < 2:
        raise ValueError("needs d >= 2")
    edges: list[tuple[int, int]] = []
    left: list[int] = []
    right: list[int] = []

    def a(i):
        return 2 * d * (i % d)

    def b(i):
        return 2 * d * (i % d) + d

    for i in range(d):
        side_a = range(a(i), a(i) + d)
        side_b = range(b(i), b(i) + d)
        left.extend(side_a)
        right.extend(side_b)
        edges.extend((x, y) for x in side_a for y in side_b if (x, y) != (a(i), b(i)))
    links = [(a(i), b(i + 1)) for i in range(d)]
    edges.extend(links)
    g = GeneralGraph(2 * d * d, edges, (left, right))
    phi = PartialColoring.from_edges(g, {e: i + 1 for i, e in enumerate(links)}, d)
    assert all(x == d for x in g.degrees()) and is_proper(phi)
    return g, phi


def near_vertex_unavoidable(d: int) -> PartialColoring:
    """Color 1 on the other edges at vertex 0, color 2 on the other edges at vertex 1."""
    if d < 2:
        raise ValueError("needs d >= 2")
    cube = build(d)
    assignment = {}
    for j in range(1, d):
        assignment[cube.edge_between(0, 1 << j)] = 1
        assignment[cube.edge_between(1, 1 | 1 << j)] = 2
    return PartialColoring.from_edges(cube, assignment, d)


class Family(enum.Enum):
    SPARSE = "sparse"
    SPARSE_II = "sparse-ii"
    SINGLE = "single"
    THREE = "three"
    MATCHING = "matching"
    FEW_MATCHINGS = "few-matchings"
    PROPER_2FLOOR = "proper-2floor"
    INDUCED_3K = "induced-3k"
    PROPER_D2 = "proper-d2"
    HALF = "half"
    FEW_COLORS = "few-colors"
    MULTI = "multi"
    COVER = "cover"
    INDUCED = "induced"


@dataclass(frozen=True)
class InstanceSpec:
    family: Family
    d: int
    seed: int = 0
    params: dict = field(default_factory=dict, hash=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.d < 1:
            raise ValueError("d must be positive")

    def rng(self) -> random.Random:
        key = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return random.Random(f"{self.family.value}|{self.d}|{self.seed}|{key}")

    def param(self, name: str, default):
        return self.params.get(name, default)


# -- hypothesis predicates ---------------------------------------------------


def color_cap_ok(phi, cap) -> bool:
    return all(n <= cap for n in phi.color_counts().values())


def is_matching(phi: PartialColoring) -> bool:
    seen = set()
    for i in phi.colored():
        for v in phi.host.endpoints[i]:
            if v in seen:
                return False
            seen.add(v)
    return True


def close_same_color_ok(phi: PartialColoring) -> bool:
    """Each colored edge has at most one same-colored edge at distance 1."""
    host = phi.host
    idx = phi.colored()
    for i in idx:
        close = sum(
            1
            for j in idx
            if j != i and phi.colors[j] == phi.colors[i]
            and edge_distance(host, host.edge_at(i), host.edge_at(j)) == 1
        )
        if close > 1:
            return False
    return True


def in_half(phi: PartialColoring, split_dim: int) -> bool:
    return all(e.dim != split_dim and not e.base >> split_dim & 1 for e, _ in phi.items())


def covered_by(phi, cover) -> bool:
    ends = phi.host.endpoints
    return all(ends[i][0] in cover or ends[i][1] in cover for i in range(phi.host.n_edges) if _colored(phi, i))


def _colored(phi, i) -> bool:
    return bool(phi.lists[i]) if isinstance(phi, ListAssignment) else bool(phi.colors[i])


def per_dim_counts(phi: PartialColoring) -> list[int]:
    cube = phi.host
    h = cube.n_edges // cube.d
    out = [0] * cube.d
    for i in phi.colored():
        out[i // h] += 1
    return out


def sparse_caps(d: int, variant: str = "i", c1=1) -> dict:
    """Default per-color cap, per-matching bound and parallel bound for a variant."""
    if variant == "i":
        ab = floor(Fraction(117, 100) * d)
        return {"cap": d // 8, "a": ab, "b": ab}
    c1 = Fraction(c1)
    c2 = 2 * c1 * (c1 + 2) * 34**2
    return {"cap": floor(d / c2), "a": floor(c1 * d), "b": floor(d / (34 * c1))}


def satisfies(spec: InstanceSpec, inst) -> bool:
    """Whether ``inst`` meets the hypotheses of the family named by ``spec``."""
    f, d, p = spec.family, spec.d, spec.params
    if f is Family.MULTI:
        k = p.get("k", 2)
        counts = inst.color_counts()
        return len(counts) <= k and all(n <= d - k for n in counts.values())
    phi = inst
    if f in (Family.SPARSE, Family.SPARSE_II):
        caps = {**sparse_caps(d, "i" if f is Family.SPARSE else "ii", p.get("c1", 1)), **p}
        if not color_cap_ok(phi, caps["cap"]) or max(per_dim_counts(phi)) > caps["a"]:
            return False
        return f is Family.SPARSE_II or max_colored_parallels(phi) <= caps["b"]
    if f is Family.SINGLE:
        return color_cap_ok(phi, 1)
    if f is Family.THREE:
        return len(phi.color_counts()) <= 3 and color_cap_ok(phi, d - 2)
    if f is Family.MATCHING:
        return d % 3 == 0 and is_matching(phi)
    if f is Family.FEW_MATCHINGS:
        return len(dims_used(phi)) <= d // 3
    if f is Family.PROPER_2FLOOR:
        return is_proper(phi) and len(dims_used(phi)) <= 2 * (d // 3)
    if f is Family.INDUCED_3K:
        return d % 3 == 0 and is_proper(phi) and close_same_color_ok(phi)
    if f is Family.PROPER_D2:
        return is_proper(phi) and color_cap_ok(phi, d - 2)
    if f is Family.HALF:
        return in_half(phi, p.get("split_dim", d - 1))
    if f is Family.FEW_COLORS:
        k = p.get("k", 2)
        return len(phi.color_counts()) <= k and color_cap_ok(phi, d - k)
    if f is Family.COVER:
        k = p.get("k", 1)
        return color_cap_ok(phi, d - k) and covered_by(phi, set(p.get("cover") or _cover_of(spec)))
    if f is Family.INDUCED:
        return classes_are_induced_matchings(phi)
    raise ValueError(f"unknown family {f}")


# -- samplers ----------------------------------------------------------------


def _fill(cube: Hypercube, rng, pool, colors_for, size):
    """Color up to ``size`` edges from ``pool``; ``colors_for(i, cs)`` lists allowed colors."""
    cs = [0] * cube.n_edges
    order = list(pool)
    rng.shuffle(order)
    placed = 0
    for i in order:
        if placed >= size:
            break
        allowed = colors_for(i, cs)
        if allowed:
            cs[i] = rng.choice(allowed)
            placed += 1
    return PartialColoring(cube, cube.d, tuple(cs))


def _proper_colors(cube, d, cap=None):
    def colors_for(i, cs):
        taken = {cs[j] for j in cube.adjacent[i]}
        counts = _counter(cs)
        return [c for c in range(1, d + 1) if c not in taken and (cap is None or counts.get(c, 0) < cap)]

    return colors_for


def _counter(cs):
    out: dict[int, int] = {}
    for c in cs:
        if c:
            out[c] = out.get(c, 0) + 1
    return out


def _capped_colors(d, cap, palette=None):
    palette = list(range(1, d + 1)) if palette is None else palette

    def colors_for(i, cs):
        counts = _counter(cs)
        return [c for c in palette if counts.get(c, 0) < cap]

    return colors_for


def _cover_of(spec: InstanceSpec) -> list[int]:
    rng = random.Random(f"cover|{spec.d}|{spec.seed}|{spec.params.get('k', 1)}")
    return sorted(rng.sample(range(1 << spec.d), spec.params.get("k", 1)))


def _size(rng, p, limit):
    size = p.get("size")
    return min(limit, size) if size is not None else rng.randint(0, limit)


def _draw(spec: InstanceSpec, rng: random.Random):
    f, d, p = spec.family, spec.d, spec.params
    cube = build(d)
    every = range(cube.n_edges)
    if f in (Family.SPARSE, Family.SPARSE_II):
        caps = {**sparse_caps(d, "i" if f is Family.SPARSE else "ii", p.get("c1", 1)), **p}
        cap = caps["cap"]
        if cap == 0 and p.get("size"):
            raise ValueError("cap 0 admits only the empty coloring")
        pool = every
        if p.get("focus"):
            # concentrate the colored edges in a few dimensional matchings
            dims = rng.sample(range(d), p["focus"])
            h = cube.n_edges // d
            pool = [i for i in every if i // h in dims]
        phi = _fill(cube, rng, pool, _capped_colors(d, cap), _size(rng, p, d * cap))
        if p.get("size") is None and rng.random() < 0.5:
            # half of the draws use every allowed edge
            phi = _fill(cube, rng, pool, _capped_colors(d, cap), d * cap)
        return phi
    if f is Family.SINGLE:
        return _fill(cube, rng, every, _capped_colors(d, 1), _size(rng, p, d))
    if f is Family.THREE:
        palette = sorted(rng.sample(range(1, d + 1), min(3, d)))
        return _fill(cube, rng, every, _capped_colors(d, max(d - 2, 0), palette), _size(rng, p, 3 * max(d - 2, 0)))
    if f is Family.MATCHING:
        if d % 3:
            raise ValueError("matching family needs d divisible by 3")

        def free(i, cs):
            if any(cs[j] for j in cube.adjacent[i]):
                return []
            return list(range(1, d + 1))

        return _fill(cube, rng, every, free, _size(rng, p, cube.n_vertices // 2))
    if f is Family.FEW_MATCHINGS:
        dims = sorted(rng.sample(range(d), d // 3))
        h = cube.n_edges // d
        pool = [i for i in every if i // h in dims]
        return _fill(cube, rng, pool, _capped_colors(d, cube.n_edges), _size(rng, p, len(pool)))
    if f is Family.PROPER_2FLOOR:
        dims = sorted(rng.sample(range(d), 2 * (d // 3)))
        h = cube.n_edges // d
        pool = [i for i in every if i // h in dims]
        return _fill(cube, rng, pool, _proper_colors(cube, d), _size(rng, p, len(pool)))
    if f is Family.INDUCED_3K:
        if d % 3:
            raise ValueError("induced-3k family needs d divisible by 3")
        base = _proper_colors(cube, d)

        def colors_for(i, cs):
            out = []
            for c in base(i, cs):
                cs[i] = c
                if _close_ok_at(cube, cs, i):
                    out.append(c)
                cs[i] = 0
            return out

        return _fill(cube, rng, every, colors_for, _size(rng, p, cube.n_edges))
    if f is Family.PROPER_D2:
        return _fill(cube, rng, every, _proper_colors(cube, d, max(d - 2, 0)), _size(rng, p, d * max(d - 2, 0)))
    if f is Family.HALF:
        split = p.get("split_dim", d - 1)
        pool = [i for i, e in enumerate(cube.edges) if e.dim != split and not e.base >> split & 1]
        return _fill(cube, rng, pool, _capped_colors(d, cube.n_edges), _size(rng, p, len(pool)))
    if f is Family.FEW_COLORS:
        k = p.get("k", 2)
        palette = sorted(rng.sample(range(1, d + 1), k))
        return _fill(cube, rng, every, _capped_colors(d, d - k, palette), _size(rng, p, k * (d - k)))
    if f is Family.MULTI:
        k = p.get("k", 2)
        palette = sorted(rng.sample(range(1, d + 1), k))
        lists = [set() for _ in every]
        for c in palette:
            for i in rng.sample(list(every), rng.randint(0, d - k)):
                lists[i].add(c)
        return ListAssignment(cube, tuple(frozenset(x) for x in lists))
    if f is Family.COVER:
        k = p.get("k", 1)
        cover = set(p.get("cover") or _cover_of(spec))
        pool = [i for i in every if set(cube.endpoints[i]) & cover]
        return _fill(cube, rng, pool, _capped_colors(d, d - k), _size(rng, p, len(pool)))
    if f is Family.INDUCED:

        def colors_for(i, cs):
            near = {cs[j] for j in _within_one(cube, i)}
            return [c for c in range(1, d + 1) if c not in near]

        return _fill(cube, rng, every, colors_for, _size(rng, p, cube.n_edges))
    raise ValueError(f"unknown family {f}")


def _within_one(cube, i):
    """Edges sharing an endpoint with ``i`` or joined to it by one edge."""
    u, v = cube.endpoints[i]
    near = set()
    for x in (u, v):
        for j in cube.incident[x]:
            near.add(j)
            y = next(w for w in cube.endpoints[j] if w != x)
            near.update(cube.incident[y])
    near.discard(i)
    return near


def _close_ok_at(cube, cs, i) -> bool:
    """The distance-1 condition holds for ``i`` and every same-colored edge near it."""
    c = cs[i]

    def close(j):
        return [x for x in _within_one(cube, j) if cs[x] == c and _dist1(cube, j, x)]

    mine = close(i)
    return len(mine) <= 1 and all(len(close(j)) <= 1 for j in mine)


def _dist1(cube, i, j) -> bool:
    a, b = cube.endpoints[i], cube.endpoints[j]
    return min(cube.distance(x, y) for x in a for y in b) == 1


def random_instance(spec: InstanceSpec):
    """A seeded random instance of the family; always meets its hypotheses."""
    rng = spec.rng()
    for _ in range(MAX_RETRIES):
        inst = _draw(spec, rng)
        if satisfies(spec, inst):
            return inst
    raise RuntimeError(f"no instance of {spec.family.value} met its hypotheses after {MAX_RETRIES} draws")


__all__ = [
    "Family",
    "InstanceSpec",
    "counterexample_graph",
    "near_vertex_unavoidable",
    "random_instance",
    "satisfies",
]
