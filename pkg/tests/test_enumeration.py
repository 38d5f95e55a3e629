import itertools
import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cubechrome.coloring import PartialColoring, is_proper
from cubechrome.enumeration import (
    CLAIM_BOUNDS,
    ConfigurationCatalog,
    canonical_key,
    contains_member,
    enumerate_minimal_unavoidable,
    forbidden_triple_count,
    is_minimal_unavoidable,
    proper_partial_orbits,
    random_proper_partial,
    same_orbit,
    verify_claim_table,
)
from cubechrome.figure1 import configurations
from cubechrome.hypercube import build

from oracles import bitmask_forbidden_triples, cube_graph, naive_avoidable, naive_forbidden_triples
from strategies import partial_colorings


@lru_cache(maxsize=None)
def vf2_edge_maps(d):
    """Edge permutations induced by every graph automorphism, found by VF2."""
    cube = build(d)
    g = cube_graph(d)
    maps = []
    for m in nx.algorithms.isomorphism.GraphMatcher(g, g).isomorphisms_iter():
        maps.append(tuple(cube.edge_index(cube.edge_between(m[u], m[v])) for u, v in cube.endpoints))
    return maps


def orbit(colors, d, mod_colors=True):
    out = set()
    perms = list(itertools.permutations(range(1, d + 1))) if mod_colors else [tuple(range(1, d + 1))]
    for em in vf2_edge_maps(d):
        img = [0] * len(colors)
        for i, c in enumerate(colors):
            img[em[i]] = c
        for p in perms:
            out.add(tuple(p[c - 1] if c else 0 for c in img))
    return out


@settings(max_examples=80, deadline=None)
@given(partial_colorings(min_d=2, max_d=3), st.data())
def test_canonical_key_is_an_orbit_invariant(phi, data):
    d = phi.host.d
    other = data.draw(st.sampled_from(sorted(orbit(phi.colors, d))))
    psi = PartialColoring(phi.host, d, other)
    assert canonical_key(phi) == canonical_key(psi)
    assert same_orbit(phi, psi)


@settings(max_examples=60, deadline=None)
@given(partial_colorings(min_d=2, max_d=3), partial_colorings(min_d=2, max_d=3))
def test_canonical_key_separates_orbits(phi, psi):
    assume(phi.host == psi.host)
    assert (canonical_key(phi) == canonical_key(psi)) == (psi.colors in orbit(phi.colors, phi.host.d))


def _brute_minimal_orbits(d, proper):
    cube = build(d)
    found = set()
    for cs in itertools.product(range(d + 1), repeat=cube.n_edges):
        colored = [i for i, c in enumerate(cs) if c]
        if not colored:
            continue
        if proper and not is_proper(PartialColoring(cube, d, cs)):
            continue
        if naive_avoidable(cube.endpoints, cs, d):
            continue
        if all(naive_avoidable(cube.endpoints, cs[:i] + (0,) + cs[i + 1 :], d) for i in colored):
            found.add(min(orbit(cs, d)))
    return found


@pytest.mark.parametrize("d,proper,count", [(1, False, 1), (1, True, 1), (2, False, 2), (2, True, 1)])
def test_small_catalogs_match_brute_force(d, proper, count):
    cat = enumerate_minimal_unavoidable(d, proper)
    assert cat.complete and len(cat) == count == len(_brute_minimal_orbits(d, proper))
    assert all(is_minimal_unavoidable(phi, proper) for phi in cat.colorings())


def test_proper_q3_catalog_is_the_drawn_list():
    cat = enumerate_minimal_unavoidable(3, True)
    drawn = configurations()
    assert len(cat) == 6
    assert cat.keys() == {canonical_key(phi) for phi in drawn}
    for phi in drawn:
        assert is_proper(phi) and len(phi) == 7
        assert not naive_avoidable(phi.host.endpoints, phi.colors, 3)


def test_checkpoints_and_shards(tmp_path):
    parts = [enumerate_minimal_unavoidable(3, True, shards=(i, 3), checkpoint_dir=tmp_path) for i in range(3)]
    assert not any(p.complete for p in parts)
    assert all(p.shards_exhausted for p in parts)
    union = set().union(*(p.keys() for p in parts))
    assert len(union) == 6
    assert len(list(tmp_path.iterdir())) == 3
    again = enumerate_minimal_unavoidable(3, True, shards=(1, 3), checkpoint_dir=tmp_path)
    assert again.keys() == parts[1].keys()


def test_catalog_jsonl_round_trip(tmp_path):
    cat = enumerate_minimal_unavoidable(2, False)
    path = tmp_path / "q2.jsonl"
    cat.write_jsonl(path)
    back = ConfigurationCatalog.read_jsonl(path, 2, False)
    assert back.keys() == cat.keys()
    assert [e.coloring for e in back.entries] == cat.colorings()


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        enumerate_minimal_unavoidable(5)


def test_contains_member():
    cat = enumerate_minimal_unavoidable(3, True)
    phi = configurations()[2]
    cs = list(phi.colors)
    spare = next(i for i, c in enumerate(cs) if not c and all(cs[j] != 1 for j in phi.host.adjacent[i]))
    cs[spare] = 1
    assert contains_member(PartialColoring(phi.host, 3, tuple(cs)), cat)
    assert not contains_member(PartialColoring.empty(phi.host, 3), cat)


# -- forbidden triples ---------------------------------------------------------


@pytest.mark.parametrize("seed", range(30))
def test_forbidden_triples_match_both_oracles(seed):
    rng = random.Random(seed)
    cube = build(3)
    palette = rng.randint(3, 6)
    phi = random_proper_partial(cube, rng.randint(0, 12), palette, rng)
    n = forbidden_triple_count(phi, palette)
    assert n == naive_forbidden_triples(cube.endpoints, phi.colors, palette)
    assert n == bitmask_forbidden_triples(cube.endpoints, phi.colors, palette)


def test_drawn_configurations_forbid_one_triple():
    for phi in configurations():
        assert forbidden_triple_count(phi, 3) == 1
        assert forbidden_triple_count(phi, 5) == 1


def _renamed(colors):
    names = {}
    return tuple(names.setdefault(c, len(names) + 1) if c else 0 for c in colors)


def _class_rep(colors, d):
    """Smallest image under cube symmetries, colors renamed by first occurrence."""
    best = None
    for em in vf2_edge_maps(d):
        img = [0] * len(colors)
        for i, c in enumerate(colors):
            img[em[i]] = c
        r = _renamed(img)
        best = r if best is None or r < best else best
    return best


def test_orbit_counts_match_brute_force():
    cube = build(3)
    levels = proper_partial_orbits(4)
    for a in range(5):
        seen = set()
        for es in itertools.combinations(range(cube.n_edges), a):
            for cs in itertools.product(range(1, a + 1), repeat=a):
                colors = [0] * cube.n_edges
                for e, c in zip(es, cs):
                    colors[e] = c
                if is_proper(PartialColoring(cube, max(a, 1), tuple(colors))):
                    seen.add(_class_rep(colors, 3))
        assert len(levels[a]) == len(seen)


def test_claim_table_small():
    rep = verify_claim_table(20, seed=1, enumerate_up_to=6)
    rows = {r.a: r for r in rep.rows}
    assert set(rows) == set(range(13)) == set(CLAIM_BOUNDS)
    assert all(rows[a].observed == 0 for a in range(7))
    assert rep.ok
