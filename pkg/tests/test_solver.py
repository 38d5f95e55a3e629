import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubechrome.coloring import ListAssignment, PartialColoring, avoids, avoids_lists, is_proper, standard_coloring
from cubechrome.graph import GeneralGraph
from cubechrome.hypercube import build
from cubechrome.solver import (
    ImproperPrecoloring,
    RelabelGraph,
    Status,
    all_proper_colorings,
    avoid_exact,
    extend_avoid_exact,
    extend_exact,
    hall_violator,
    list_color_exact,
    max_bipartite_matching,
    relabel_avoid,
)

from oracles import naive_avoidable, naive_extend_avoidable, naive_extendable, total_colorings
from strategies import partial_colorings


@pytest.mark.parametrize("d", [1, 2, 3])
def test_all_proper_colorings_matches_brute_force(d):
    cube = build(d)
    assert set(all_proper_colorings(cube, d)) == set(total_colorings(cube.endpoints, d))


@settings(max_examples=150, deadline=None)
@given(partial_colorings(max_d=3))
def test_avoid_matches_brute_force(phi):
    cube = phi.host
    res = avoid_exact(cube, phi)
    assert (res.status is Status.FOUND) == naive_avoidable(cube.endpoints, phi.colors, cube.d)
    if res.found:
        assert is_proper(res.witness) and res.witness.is_total() and avoids(res.witness, phi)


@settings(max_examples=150, deadline=None)
@given(partial_colorings(max_d=3, proper=True))
def test_extend_matches_brute_force(phi):
    cube = phi.host
    res = extend_exact(cube, phi)
    assert res.found == naive_extendable(cube.endpoints, phi.colors, cube.d)
    if res.found:
        assert all(not p or p == c for p, c in zip(phi.colors, res.witness.colors))


@settings(max_examples=100, deadline=None)
@given(partial_colorings(max_d=3, proper=True), st.data())
def test_extend_avoid_matches_brute_force(phi, data):
    cube = phi.host
    psi = PartialColoring(cube, cube.d, tuple(data.draw(st.lists(st.integers(0, cube.d), min_size=cube.n_edges, max_size=cube.n_edges))))
    res = extend_avoid_exact(cube, phi, psi)
    assert res.found == naive_extend_avoidable(cube.endpoints, phi.colors, psi.colors, cube.d)


def test_extend_rejects_improper_precoloring():
    cube = build(2)
    with pytest.raises(ImproperPrecoloring):
        extend_exact(cube, PartialColoring(cube, 2, (1, 0, 1, 0)))


def test_budget_gives_indeterminate():
    from cubechrome.generators import counterexample_graph

    g, phi = counterexample_graph(3)
    res = avoid_exact(g, phi, 3, budget=5)
    assert res.status is Status.INDETERMINATE


def test_palette_larger_than_degree():
    cube = build(2)
    phi = PartialColoring(cube, 3, (1, 2, 1, 2))
    # with three colors there is room to avoid anything on a 4-cycle
    assert avoid_exact(cube, phi, 3).found


def _random_graph(rng, n, m):
    pairs = rng.sample(list(itertools.combinations(range(n), 2)), m)
    return GeneralGraph(n, pairs)


@pytest.mark.parametrize("seed", range(40))
def test_list_coloring_matches_brute_force(seed):
    rng = random.Random(seed)
    g = _random_graph(rng, 6, rng.randint(3, 8))
    lists = ListAssignment.from_edges(g, {e: rng.sample(range(1, 5), rng.randint(1, 3)) for e in g.edges})
    res = list_color_exact(g, lists)
    brute = any(
        all(cs[i] != cs[j] for i, j in itertools.combinations(range(g.n_edges), 2) if set(g.edges[i]) & set(g.edges[j]))
        for cs in itertools.product(*lists.lists)
    )
    assert res.found == brute
    if res.found:
        assert all(c in x for c, x in zip(res.witness.colors, lists.lists))


def test_list_coloring_edge_limit():
    cube = build(7)
    lists = ListAssignment.from_coloring(standard_coloring(cube))
    with pytest.raises(ValueError):
        list_color_exact(cube, lists)


@pytest.mark.parametrize("seed", range(60))
def test_matching_size_matches_networkx(seed):
    rng = random.Random(seed)
    left, right = rng.randint(1, 7), rng.randint(1, 7)
    adj = {u: [v for v in range(right) if rng.random() < 0.35] for u in range(left)}
    m = max_bipartite_matching(adj)
    assert len(set(m.values())) == len(m) and all(v in adj[u] for u, v in m.items())
    g = nx.Graph()
    g.add_nodes_from(("L", u) for u in adj)
    g.add_edges_from((("L", u), ("R", v)) for u in adj for v in adj[u])
    ref = nx.bipartite.maximum_matching(g, top_nodes=[("L", u) for u in adj])
    assert len(m) == len(ref) // 2
    viol = hall_violator(adj, m)
    if len(m) == left:
        assert viol is None
    else:
        s, n = viol
        assert {v for u in s for v in adj[u]} == n and len(n) < len(s)


def test_relabel_avoid_and_anti_hall():
    cube = build(3)
    f = standard_coloring(cube)
    phi = PartialColoring.from_edges(cube, {cube.edges[0]: 1, cube.edges[4]: 3}, 3)
    g = relabel_avoid(f, phi)
    assert g is not None and is_proper(g) and avoids(g, phi)
    # every class is barred from colors 1 and 2, so three classes share one color
    lists = ListAssignment.from_edges(cube, {cube.edges[0]: [1, 2], cube.edges[4]: [1, 2], cube.edges[8]: [1, 2]})
    assert relabel_avoid(f, lists) is None
    s = RelabelGraph.build(f, lists).anti_hall_set()
    assert s == {1, 2, 3}
    lists = ListAssignment.from_edges(cube, {cube.edges[0]: [1], cube.edges[4]: [2, 3]})
    g = relabel_avoid(f, lists)
    assert g is not None and avoids_lists(g, lists)
