from __future__ import annotations

import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nx_cycle_counts, to_nx
from geogirth.errors import ParameterError, ResourceError
from geogirth.graph import (
    Graph,
    Homomorphism,
    blowup_graph,
    complete_graph,
    connected_components,
    count_cycles_upto,
    cycle_graph,
    dumps,
    find_lex_least_cycle,
    from_edge_list,
    from_json_dict,
    girth,
    induced_subgraph,
    is_cycle,
    load,
    moser_spindle,
    path_graph,
    petersen_graph,
    remove_edge,
    to_edge_list,
    to_json_dict,
    verify_homomorphism,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


@settings(max_examples=150)
@given(graphs())
def test_girth_matches_networkx(g):
    rep = girth(g)
    expected = nx.girth(to_nx(g))
    assert rep.girth == expected
    if rep.witness:
        assert len(rep.witness) == rep.girth and is_cycle(g, rep.witness)


@settings(max_examples=100)
@given(graphs(max_n=8))
def test_cycle_counts_match_networkx(g):
    assert count_cycles_upto(g, 6) == nx_cycle_counts(g, 6)


@settings(max_examples=60)
@given(graphs(max_n=7), st.integers(1, 3))
def test_blowup_structure(g, m):
    b = blowup_graph(g, m)
    assert b.n == g.n * m and b.num_edges == g.num_edges * m * m
    assert verify_homomorphism(Homomorphism(b, g, list(b.parts), surjective=True)).ok
    # no edges inside a part
    assert all(b.parts[x] != b.parts[y] for x, y in b.edges())


def test_known_girths():
    assert girth(petersen_graph()).girth == 5
    assert girth(complete_graph(4)).girth == 3
    assert girth(cycle_graph(7)).girth == 7
    assert girth(path_graph(5)).girth == math.inf


def test_blowup_girth_examples():
    assert girth(blowup_graph(complete_graph(2), 2)).girth == 4
    # K4 sits inside its own blow-up, so triangles survive
    assert girth(blowup_graph(complete_graph(4), 2)).girth == 3
    assert girth(blowup_graph(complete_graph(4), 1)) == girth(complete_graph(4))


def test_blowup_rejects_m0():
    with pytest.raises(ParameterError):
        blowup_graph(complete_graph(3), 0)


def test_cycle_counts_known():
    assert count_cycles_upto(complete_graph(4), 4) == {3: 4, 4: 3}
    assert count_cycles_upto(petersen_graph(), 6) == {3: 0, 4: 0, 5: 12, 6: 10}
    with pytest.raises(ResourceError):
        count_cycles_upto(complete_graph(5), 13)


def test_lex_least_cycle():
    g = complete_graph(4)
    assert find_lex_least_cycle(g, 3) == (0, 1, 2)
    assert find_lex_least_cycle(g, 4) == (0, 1, 2, 3)
    assert find_lex_least_cycle(cycle_graph(5), 3) is None


def test_homomorphism_violations():
    c5 = cycle_graph(5)
    bad = Homomorphism(c5, complete_graph(2), [0, 1, 0, 1, 0])
    rep = verify_homomorphism(bad)
    assert not rep.ok and rep.details["reason"] == "edge not preserved"
    nonsurj = Homomorphism(path_graph(2), complete_graph(3), [0, 1], surjective=True)
    rep = verify_homomorphism(nonsurj)
    assert not rep.ok and rep.violation == 2


def test_graph_validation():
    with pytest.raises(ParameterError):
        Graph(2, [(0, 0)])
    with pytest.raises(ParameterError):
        Graph(2, [(0, 2)])
    assert Graph(3, [(1, 0), (0, 1)]).num_edges == 1


def test_manipulations():
    g = remove_edge(complete_graph(3), 0, 1)
    assert not g.has_edge(0, 1) and g.num_edges == 2
    sub = induced_subgraph(petersen_graph(), [5, 6, 7, 8, 9])
    assert sub == cycle_graph(5) or girth(sub).girth == 5
    assert connected_components(Graph(4, [(0, 1), (2, 3)])) == [[0, 1], [2, 3]]


def test_moser_spindle_shape():
    g = moser_spindle()
    assert (g.n, g.num_edges) == (7, 11)
    assert girth(g).girth == 3


def test_io_roundtrip(tmp_path):
    b = blowup_graph(complete_graph(3), 2)
    assert from_json_dict(to_json_dict(b)) == b
    assert from_json_dict(to_json_dict(b)).parts == b.parts
    assert from_edge_list(to_edge_list(b)) == b
    p = tmp_path / "g.json"
    p.write_text(dumps(b))
    assert load(p) == b
    q = tmp_path / "g.txt"
    q.write_text("# petersen\n" + to_edge_list(petersen_graph()))
    assert girth(load(q)).girth == 5
