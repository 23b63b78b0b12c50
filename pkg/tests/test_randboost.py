from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import to_nx
from geogirth.errors import BoostFailure, ParameterError, ResourceError
from geogirth.graph import Graph, blowup_graph, complete_graph, count_cycles_upto, cycle_graph, girth
from geogirth.randboost import (
    BoostParams,
    boost_girth_doubling,
    boost_girth_random,
    check_supersaturation,
    default_m_prime,
    desk_q,
    edge_draw,
    expected_cycle_bound,
    paper_q,
    prune_short_cycles,
    subsample_edges,
)
from geogirth.solver import exact_chromatic, k_colouring, majority_project, verify_proper


def chi(g):
    return exact_chromatic(g)[0]


# ---------------------------------------------------------------- paper_q


def test_paper_q_exact_cases():
    assert paper_q(16, 2) == Fraction(1, 8)
    assert paper_q(256, 4) == Fraction(1, 128)


@given(st.integers(2, 10**6), st.integers(2, 12))
def test_paper_q_accuracy(n, g):
    q = paper_q(n, g)
    assert abs(float(q) - n ** -(1 - 1 / (2 * g))) < 2**-32


@given(st.integers(3, 5000), st.integers(2, 10))
def test_paper_q_monotone_in_g(n, g):
    # the exponent 1 - 1/(2g) grows with g, so q falls toward 1/n
    assert paper_q(n, g) > paper_q(n, g + 1) > Fraction(1, n)


def test_paper_q_rejects_small():
    with pytest.raises(ParameterError):
        paper_q(1, 3)


# ---------------------------------------------------------------- subsampling


def test_subsample_extremes():
    b = blowup_graph(complete_graph(3), 4)
    assert subsample_edges(b, 1, 5) == b
    assert subsample_edges(b, 0, 5).num_edges == 0


def test_subsample_binomial_regression():
    k = Graph(200, [(i, 100 + j) for i in range(100) for j in range(100)])
    kept = subsample_edges(k, Fraction(1, 2), 0).num_edges
    assert abs(kept - 5000) <= 4 * 50
    assert kept == 5003  # frozen regression


@settings(max_examples=50)
@given(st.integers(0, 2**64 - 1), st.fractions(0, 1), st.fractions(0, 1))
def test_monotone_coupling(seed, q1, q2):
    lo, hi = sorted((q1, q2))
    b = blowup_graph(cycle_graph(5), 3)
    assert set(subsample_edges(b, lo, seed).edges()) <= set(subsample_edges(b, hi, seed).edges())


def test_edge_draw_is_deterministic():
    assert edge_draw(7, 3) == edge_draw(7, 3)
    assert edge_draw(7, 3) != edge_draw(8, 3)


# ---------------------------------------------------------------- pruning


@st.composite
def small_graphs(draw):
    n = draw(st.integers(3, 10))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return Graph(n, draw(st.lists(st.sampled_from(pairs), unique=True)))


@settings(max_examples=80)
@given(small_graphs(), st.integers(3, 6))
def test_prune_removes_short_cycles(g, glen):
    pr = prune_short_cycles(g, glen)
    assert set(pr.edges()) <= set(g.edges())
    assert girth(pr).girth > glen
    counts = count_cycles_upto(pr, glen)
    assert not any(counts.values())


def test_prune_examples():
    assert prune_short_cycles(cycle_graph(5), 4) == cycle_graph(5)
    k4 = prune_short_cycles(complete_graph(4), 4)
    assert girth(k4).girth >= 5


def test_prune_is_deterministic():
    b = subsample_edges(blowup_graph(complete_graph(4), 6), Fraction(1, 2), 11)
    assert prune_short_cycles(b, 5) == prune_short_cycles(b, 5)


# ---------------------------------------------------------------- supersaturation


def test_supersaturation_full_blowup_passes():
    base = complete_graph(3)
    b = blowup_graph(base, 4)
    for mp in (1, 2, 4):
        assert check_supersaturation(b, base, mp).ok
        assert check_supersaturation(b, base, mp, method="biclique").ok


def test_supersaturation_isolated_pair_fails():
    base = complete_graph(2)
    b = blowup_graph(base, 3)
    g = Graph(b.n, [e for e in b.edges() if 0 not in e and 3 not in e], parts=b.parts)
    for method in ("enumerate", "biclique"):
        rep = check_supersaturation(g, base, 1, method=method)
        assert not rep.ok
        assert rep.violation == {"W": [0], "U": [3]}


def test_supersaturation_regression():
    base = complete_graph(2)
    s = subsample_edges(blowup_graph(base, 8), Fraction(1, 2), 0)
    assert s.num_edges == 33
    assert check_supersaturation(s, base, 4, method="enumerate").ok
    assert check_supersaturation(s, base, 4, method="biclique").ok


@settings(max_examples=40)
@given(st.integers(0, 1000), st.integers(1, 4))
def test_supersaturation_methods_agree(seed, mp):
    base = complete_graph(2)
    s = subsample_edges(blowup_graph(base, 6), Fraction(1, 3), seed)
    a = check_supersaturation(s, base, mp, method="enumerate")
    b = check_supersaturation(s, base, mp, method="biclique")
    assert a.ok == b.ok


def test_supersaturation_implies_majority_projection():
    # full blow-up is supersaturated at m' = ceil(m/(k-1)); projections of proper colourings are proper
    base = complete_graph(3)
    b = blowup_graph(base, 4)
    assert check_supersaturation(b, base, default_m_prime(4, 3)).ok
    col = k_colouring(b, 3)
    assert verify_proper(base, majority_project(b, base, col)).ok


def test_default_m_prime():
    assert default_m_prime(8, 3) == 4
    assert default_m_prime(7, 3) == 4
    assert default_m_prime(5, 1) == 5


# ---------------------------------------------------------------- boosting


def test_params_validation():
    with pytest.raises(ParameterError):
        BoostParams(g=2, m=4, q=Fraction(1, 2))
    with pytest.raises(ParameterError):
        BoostParams(g=4, m=4, q=0)
    with pytest.raises(ParameterError):
        BoostParams(g=4, m=0, q=1)


def test_boost_k3_pinned():
    params = BoostParams(g=4, m=16, q=desk_q(16, 4), seed=0, max_retries=10)
    res = boost_girth_random(complete_graph(3), params, chi)
    assert (res.retries, res.seed_used, res.graph.num_edges) == (0, 0, 64)
    assert girth(res.graph).girth > 4 and chi(res.graph) == 3
    again = boost_girth_random(complete_graph(3), params, chi)
    assert again.graph == res.graph and again.retries == res.retries


def test_boost_k2_trivial():
    res = boost_girth_random(complete_graph(2), BoostParams(g=9, m=3, q=Fraction(1, 2), seed=1), chi)
    assert chi(res.graph) == 2 and girth(res.graph).girth > 9


def test_boost_failure_is_structured():
    with pytest.raises(BoostFailure) as exc:
        boost_girth_random(complete_graph(3), BoostParams(g=4, m=2, q=1, seed=0, max_retries=3), chi)
    assert len(exc.value.attempts) == 3
    assert all(a["chi"] == 2 for a in exc.value.attempts)


def test_doubling_k3():
    res = boost_girth_doubling(complete_graph(3), 4, chi, seed=0)
    assert res.params.m == 8 and res.retries == 0
    assert chi(res.graph) == 3


def test_expected_cycle_bound():
    assert expected_cycle_bound(10, Fraction(1, 10), 6) == {ell: Fraction(1, 2) for ell in range(3, 7)}
    assert set(expected_cycle_bound(10, 0, 5).values()) == {0}
