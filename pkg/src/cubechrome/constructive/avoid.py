"""Avoidance constructions for hypercube colorings under structural hypotheses.

Each function returns a proper d-edge coloring of Q_d avoiding the input or
raises :class:`HypothesisError` when the input falls outside its class.
Results are re-checked before they are returned.
"""

from __future__ import annotations

import enum
import itertools

from ..coloring import (
    ListAssignment,
    PartialColoring,
    ProperColoring,
    bicolored_components,
    classes_are_induced_matchings,
    dims_used,
    edge_distance,
    interchange,
    is_proper,
    standard_coloring,
)
from ..hypercube import Hypercube, induced_by_matchings
from ..solver import RelabelGraph, Status, avoid_exact, list_color_exact, relabel_avoid
from ._blocks import (
    BlockUnsolvable,
    HypothesisError,
    block_is_avoidable,
    checked,
    dim_of,
    solve_blocks,
)


def _exact(cube: Hypercube, phi: PartialColoring) -> ProperColoring:
    res = avoid_exact(cube, phi, cube.d)
    if res.status is not Status.FOUND:
        raise BlockUnsolvable(f"exact search found no avoiding coloring of Q_{cube.d}")
    return res.witness


def _repair_by_interchange(f: ProperColoring, phi: PartialColoring, pairs) -> ProperColoring | None:
    """Try single 4-cycle interchanges in the given class pairs until relabeling works."""
    for a, b in pairs:
        for comp in bicolored_components(f, a, b):
            if not any(phi.colors[i] for i in comp.edges):
                continue
            g = relabel_avoid(interchange(f, a, b, comp), phi)
            if g is not None:
                return g
    return None


def avoid_single_per_color(cube: Hypercube, phi: PartialColoring) -> ProperColoring:
    if cube.d < 3:
        raise HypothesisError("needs d >= 3")
    if any(n > 1 for n in phi.color_counts().values()):
        raise HypothesisError("some color appears on more than one edge")
    f = standard_coloring(cube)
    g = relabel_avoid(f, phi)
    if g is not None:
        return checked(g, phi)
    # the only obstruction is one class holding every color
    (heavy,) = RelabelGraph.build(f, phi).anti_hall_set()
    others = [c for c in range(1, cube.d + 1) if c != heavy]
    g = _repair_by_interchange(f, phi, [(heavy, c) for c in others])
    if g is None:
        raise AssertionError("no single interchange repaired the class/color matching")
    return checked(g, phi)


def avoid_three_colors(cube: Hypercube, phi: PartialColoring) -> ProperColoring:
    d = cube.d
    counts = phi.color_counts()
    if len(counts) > 3:
        raise HypothesisError("more than three colors used")
    if any(n > d - 2 for n in counts.values()):
        raise HypothesisError("some color appears on more than d - 2 edges")
    if d <= 3:
        return checked(_exact(cube, phi), phi)
    f = standard_coloring(cube)
    g = relabel_avoid(f, phi)
    if g is not None:
        return checked(g, phi)
    bad = sorted(RelabelGraph.build(f, phi).anti_hall_set())
    free = [c for c in range(1, d + 1) if c not in bad]
    if d == 4:
        # one class of the anti-Hall set gets the spare color; the two Q_3
        # halves left after removing it take the three colors of phi
        m1 = bad[0]
        spare = min(c for c in range(1, d + 1) if c not in counts)
        rest = [c for c in range(1, d + 1) if c != spare]
        dims = [c - 1 for c in range(1, d + 1) if c != m1]
        return solve_blocks(cube, phi, [(dims, rest), ([m1 - 1], [spare])])
    g = _repair_by_interchange(f, phi, [(a, b) for a in bad for b in free])
    if g is None:
        raise AssertionError("no single interchange repaired the class/color matching")
    return checked(g, phi)


class BlockMode(enum.Enum):
    MATCHING_3K = "matching-3k"
    FEW_MATCHINGS = "few-matchings"
    PROPER_2FLOOR = "proper-2floor"
    INDUCED_3K = "induced-3k"


def _is_matching(phi: PartialColoring) -> bool:
    ends = phi.host.endpoints
    seen = set()
    for i in phi.colored():
        for v in ends[i]:
            if v in seen:
                return False
            seen.add(v)
    return True


def near_same_color_ok(phi: PartialColoring) -> bool:
    """Every colored edge has at most one same-colored edge at distance 1."""
    host = phi.host
    items = [(host.edge_at(i), c) for i, c in enumerate(phi.colors) if c]
    for e, c in items:
        close = sum(1 for e2, c2 in items if c2 == c and e2 != e and edge_distance(host, e, e2) == 1)
        if close > 1:
            return False
    return True


def _route(d: int, phi_dims: list[int], per_block: int) -> list[tuple[list[int], list[int]]]:
    """Triples of dimensions holding at most ``per_block`` phi-bearing ones each."""
    k = d // 3
    triples: list[list[int]] = [[] for _ in range(k)]
    for n, dim in enumerate(sorted(phi_dims)):
        triples[n // per_block].append(dim)
    rest = [j for j in range(d) if j not in phi_dims]
    for t in triples:
        while len(t) < 3:
            t.append(rest.pop(0))
    blocks = [(sorted(t), [3 * i + 1, 3 * i + 2, 3 * i + 3]) for i, t in enumerate(triples)]
    if rest:
        blocks.append((rest, list(range(3 * k + 1, d + 1))))
    return blocks


def avoid_block_decomposition(cube: Hypercube, phi: PartialColoring, mode) -> ProperColoring:
    """Split the dimensions into triples and solve every Q_3 block exactly."""
    mode = BlockMode(mode)
    d = cube.d
    used = sorted(dims_used(phi))
    if mode in (BlockMode.MATCHING_3K, BlockMode.INDUCED_3K) and d % 3:
        raise HypothesisError("needs d divisible by 3")
    if mode is BlockMode.MATCHING_3K:
        if not _is_matching(phi):
            raise HypothesisError("colored edges do not form a matching")
        blocks = _route_consecutive(d)
    elif mode is BlockMode.INDUCED_3K:
        if not is_proper(phi) or not near_same_color_ok(phi):
            raise HypothesisError("needs a proper coloring with at most one close same-colored edge per edge")
        blocks = _route_consecutive(d)
    elif mode is BlockMode.FEW_MATCHINGS:
        if len(used) > d // 3:
            raise HypothesisError(f"colored edges span {len(used)} > {d // 3} dimensional matchings")
        blocks = _route(d, used, 1) if d >= 3 else [(list(range(d)), list(range(1, d + 1)))]
    else:
        if not is_proper(phi):
            raise HypothesisError("needs a proper coloring")
        if len(used) > 2 * (d // 3):
            raise HypothesisError(f"colored edges span {len(used)} > {2 * (d // 3)} dimensional matchings")
        blocks = _route(d, used, 2) if d >= 3 else [(list(range(d)), list(range(1, d + 1)))]
    return solve_blocks(cube, phi, blocks)


def _route_consecutive(d: int):
    return [([3 * i, 3 * i + 1, 3 * i + 2], [3 * i + 1, 3 * i + 2, 3 * i + 3]) for i in range(d // 3)]


def _block_partition(phi: PartialColoring, dim_blocks: list[list[int]]):
    """First ordered assignment of disjoint color sets to blocks that avoids phi.

    Sets for block ``i`` have ``len(dim_blocks[i])`` colors; assignments are
    tried in lexicographic order and each (block, color set) pair is tested
    at most once.
    """
    d = phi.host.d
    memo: dict[tuple[int, tuple[int, ...]], bool] = {}

    def ok(i, colors):
        key = (i, colors)
        if key not in memo:
            memo[key] = block_is_avoidable(phi, dim_blocks[i], colors)
        return memo[key]

    def rec(i, remaining):
        if i == len(dim_blocks):
            return []
        for colors in itertools.combinations(sorted(remaining), len(dim_blocks[i])):
            if ok(i, colors):
                tail = rec(i + 1, remaining - set(colors))
                if tail is not None:
                    return [(dim_blocks[i], list(colors))] + tail
        return None

    return rec(0, set(range(1, d + 1)))


def avoid_proper_partition(cube: Hypercube, phi: PartialColoring) -> ProperColoring:
    """Avoid a proper coloring whose colors each appear on at most d - 2 edges."""
    d = cube.d
    if not is_proper(phi):
        raise HypothesisError("needs a proper coloring")
    counts = phi.color_counts()
    if any(n > d - 2 for n in counts.values()):
        raise HypothesisError("some color appears on more than d - 2 edges")
    if d <= 3:
        return checked(_exact(cube, phi), phi)
    if d == 4:
        for m in range(d):
            present = {phi.colors[i] for i in range(cube.n_edges) if phi.colors[i] and dim_of(cube, i) == m}
            missing = [c for c in range(1, d + 1) if c not in present]
            if missing:
                spare = missing[0]
                rest = [c for c in range(1, d + 1) if c != spare]
                dims = [j for j in range(d) if j != m]
                return solve_blocks(cube, phi, [(dims, rest), ([m], [spare])])
        raise AssertionError("every dimensional matching carries every color")
    k = d // 2
    if d % 2 == 0:
        dim_blocks = [[2 * i, 2 * i + 1] for i in range(k)]
    elif k == 2:
        per_dim = [0] * d
        for i in phi.colored():
            per_dim[dim_of(cube, i)] += 1
        top = sorted(sorted(range(d), key=lambda j: -per_dim[j])[:2])
        dim_blocks = [top, [j for j in range(d) if j not in top]]
    else:
        dim_blocks = [[2 * i, 2 * i + 1] for i in range(k - 1)] + [[2 * k - 2, 2 * k - 1, 2 * k]]
    blocks = _block_partition(phi, dim_blocks)
    if blocks is None:
        raise BlockUnsolvable("every ordered color partition is forbidden")
    return solve_blocks(cube, phi, blocks)


def avoid_subcube(cube: Hypercube, phi: PartialColoring, split_dim: int) -> ProperColoring:
    """Avoid a coloring confined to the half of Q_d with bit ``split_dim`` clear."""
    d = cube.d
    if d < 2:
        raise HypothesisError("needs d >= 2")
    if not 0 <= split_dim < d:
        raise ValueError("split dimension out of range")
    for e, _ in phi.items():
        if e.dim == split_dim or e.base >> split_dim & 1:
            raise HypothesisError(f"colored edge {e} is outside the half with bit {split_dim} clear")
    dims = [j for j in range(d) if j != split_dim]
    comps = induced_by_matchings(cube, dims)
    h1 = next(c for c in comps if c.vertex_map[0] == 0)
    h2 = next(c for c in comps if c.vertex_map[0] == 1 << split_dim)
    local = h1.cube
    palette = frozenset(range(1, d + 1))
    lists = ListAssignment(
        local, tuple(palette - {phi.colors[cube.edge_index(ge)]} for ge in h1.edge_map)
    )
    res = list_color_exact(local, lists, max_edges=max(local.n_edges, 64))
    if res.status is not Status.FOUND:
        raise BlockUnsolvable("list coloring of the half failed")
    out = [0] * cube.n_edges
    for li, c in enumerate(res.witness.colors):
        out[cube.edge_index(h1.edge_map[li])] = c
        out[cube.edge_index(h2.edge_map[li])] = c
    for x in range(local.n_vertices):
        seen = {res.witness.colors[ei] for ei in local.incident[x]}
        (missing,) = palette - seen
        u, w = h1.vertex_map[x], h2.vertex_map[x]
        seen_w = {out[ei] for ei in cube.incident[w] if ei != cube.edge_index(cube.edge_between(u, w))}
        assert palette - seen_w == {missing}
        out[cube.edge_index(cube.edge_between(u, w))] = missing
    return checked(ProperColoring(cube, d, tuple(out)), phi)
