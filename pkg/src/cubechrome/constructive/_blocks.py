"""Shared helpers: restricting colorings to subcubes and solving blocks exactly."""

from __future__ import annotations

from functools import lru_cache

from ..coloring import PartialColoring, ProperColoring, avoids, is_proper
from ..hypercube import Hypercube, SubcubeComponent, build, induced_by_matchings
from ..solver import Status, avoid_exact


class HypothesisError(ValueError):
    """The input coloring does not satisfy the construction's hypotheses."""


class BlockUnsolvable(RuntimeError):
    """A block that the hypotheses guarantee to be avoidable was not."""


def local_restriction(phi: PartialColoring, comp: SubcubeComponent, colors) -> tuple[int, ...]:
    """``phi`` on ``comp``, keeping only ``colors`` and renaming them ``1..len(colors)``."""
    rename = {c: k + 1 for k, c in enumerate(colors)}
    host = phi.host
    return tuple(rename.get(phi.colors[host.edge_index(ge)], 0) for ge in comp.edge_map)


@lru_cache(maxsize=4096)
def _solve_local(r: int, local: tuple[int, ...]) -> tuple[int, ...] | None:
    cube = build(r)
    res = avoid_exact(cube, PartialColoring(cube, r, local), r)
    return res.witness.colors if res.status is Status.FOUND else None


def block_is_avoidable(phi: PartialColoring, dims, colors) -> bool:
    return all(_solve_local(len(dims), local_restriction(phi, comp, colors)) is not None
               for comp in induced_by_matchings(phi.host, dims))


def solve_blocks(cube: Hypercube, phi: PartialColoring, blocks) -> ProperColoring:
    """Color each block of dimensions with its own colors, avoiding ``phi``.

    ``blocks`` is a sequence of ``(dims, colors)`` with ``len(dims) ==
    len(colors)``; together the dims and the colors must partition ``[0, d)``
    and ``[1, d]``.
    """
    out = [0] * cube.n_edges
    for dims, colors in blocks:
        dims = tuple(dims)
        colors = tuple(colors)
        if len(dims) != len(colors):
            raise ValueError("block needs as many colors as dimensions")
        for comp in induced_by_matchings(cube, dims):
            local = _solve_local(len(dims), local_restriction(phi, comp, colors))
            if local is None:
                raise BlockUnsolvable(f"block dims={dims} colors={colors} is not avoidable")
            for li, ge in enumerate(comp.edge_map):
                out[cube.edge_index(ge)] = colors[local[li] - 1]
    return checked(ProperColoring(cube, cube.d, tuple(out)), phi)


def checked(f: ProperColoring, phi: PartialColoring) -> ProperColoring:
    if not is_proper(f) or not f.is_total() or not avoids(f, phi):
        raise AssertionError("construction returned a coloring that does not avoid its input")
    return f


def require_cube(phi: PartialColoring) -> Hypercube:
    if not isinstance(phi.host, Hypercube):
        raise HypothesisError("construction needs a hypercube host")
    return phi.host


def dim_of(cube: Hypercube, index: int) -> int:
    return index // (cube.n_edges // cube.d)
