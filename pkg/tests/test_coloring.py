import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubechrome.coloring import (
    ListAssignment,
    PartialColoring,
    ProperColoring,
    agrees,
    avoids,
    bicolored_components,
    classes_are_induced_matchings,
    edge_distance,
    interchange,
    is_proper,
    profile,
    standard_coloring,
)
from cubechrome.graph import GeneralGraph
from cubechrome.hypercube import build
from cubechrome.io import (
    FormatError,
    coloring_from_json,
    coloring_to_json,
    graph_from_json,
    graph_to_json,
    lists_from_json,
    lists_to_json,
)
from cubechrome.solver import all_proper_colorings

from oracles import naive_is_proper
from strategies import partial_colorings


@given(partial_colorings())
def test_is_proper_matches_pairwise_check(phi):
    assert is_proper(phi) == naive_is_proper(phi.host.endpoints, phi.colors)


@given(partial_colorings())
def test_json_round_trip(phi):
    again = coloring_from_json(coloring_to_json(phi))
    assert again == phi


@given(partial_colorings())
def test_list_round_trip(phi):
    lists = ListAssignment.from_coloring(phi)
    assert lists_from_json(lists_to_json(lists)) == lists


def test_graph_round_trip():
    g = GeneralGraph(5, [(0, 1), (1, 2), (3, 4)], bipartition=[(0, 2, 3), (1, 4)])
    assert graph_from_json(graph_to_json(g)) == g
    phi = PartialColoring.from_edges(g, {(1, 2): 2}, 2)
    assert coloring_from_json(coloring_to_json(phi)) == phi


@pytest.mark.parametrize("bad", [[], {"d": 3, "edges": [{"base": 1, "dim": 0, "color": 1}]}, {"edges": []}, {"d": "x"}])
def test_malformed_json_rejected(bad):
    with pytest.raises(FormatError):
        coloring_from_json(bad)


def test_colors_outside_palette_rejected():
    with pytest.raises(ValueError):
        PartialColoring(build(2), 2, (3, 0, 0, 0))
    with pytest.raises(ValueError):
        ProperColoring(build(2), 2, (1, 1, 0, 0))


@pytest.mark.parametrize("d", range(1, 8))
def test_standard_coloring(d):
    f = standard_coloring(build(d))
    assert f.is_total() and is_proper(f)
    assert all(f.colors[i] == e.dim + 1 for i, e in enumerate(f.host.edges))


def test_avoids_and_agrees():
    cube = build(2)
    f = standard_coloring(cube)
    phi = PartialColoring(cube, 2, (2, 0, 0, 0))
    assert avoids(f, phi) and not agrees(f, phi)
    phi = PartialColoring(cube, 2, (1, 0, 0, 2))
    assert agrees(f, phi) and not avoids(f, phi)


@settings(max_examples=60)
@given(st.integers(2, 3), st.data())
def test_interchange_keeps_properness(d, data):
    cube = build(d)
    totals = list(all_proper_colorings(cube, d))
    f = ProperColoring(cube, d, data.draw(st.sampled_from(totals)))
    a, b = data.draw(st.sampled_from([(a, b) for a in range(1, d + 1) for b in range(a + 1, d + 1)]))
    comps = bicolored_components(f, a, b)
    # components partition the a/b edges, and cycles have even length
    flat = sorted(i for c in comps for i in c.edges)
    assert flat == sorted(i for i, c in enumerate(f.colors) if c in (a, b))
    comp = data.draw(st.sampled_from(comps))
    if comp.closed:
        assert len(comp.edges) % 2 == 0
    g = interchange(f, a, b, comp)
    assert is_proper(g) and g.is_total()
    assert sum(x != y for x, y in zip(f.colors, g.colors)) == len(comp.edges)


def test_interchange_rejects_partial_component():
    f = standard_coloring(build(3))
    comp = bicolored_components(f, 1, 2)[0]
    with pytest.raises(ValueError):
        interchange(f, 1, 2, comp.edges[:2])


def test_bicolored_components_on_standard_coloring():
    # under the standard coloring the two-colored subgraph is a union of 4-cycles
    cube = build(4)
    comps = bicolored_components(standard_coloring(cube), 1, 3)
    assert len(comps) == 4 and all(c.closed and len(c.edges) == 4 for c in comps)


def test_edge_distance_and_induced_matchings():
    cube = build(3)
    e, f = cube.edge_between(0, 1), cube.edge_between(6, 7)
    assert edge_distance(cube, e, f) == 2
    phi = PartialColoring.from_edges(cube, {e: 1, f: 1}, 3)
    assert classes_are_induced_matchings(phi)
    phi = PartialColoring.from_edges(cube, {e: 1, cube.edge_between(2, 3): 1}, 3)
    assert not classes_are_induced_matchings(phi)


def test_profile_counts():
    cube = build(8)
    f = standard_coloring(cube)
    colors = [0] * cube.n_edges
    for i in range(0, 16):
        colors[i] = 2
    phi = PartialColoring(cube, 8, tuple(colors))
    prof = profile(f, phi)
    assert prof.counts[1] == 16 and prof.distinct[1] == 1
    assert 1 in prof.heavy and 2 in prof.light
