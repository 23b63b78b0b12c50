"""Acceptance gate.  Each test tags itself with its criterion number; the
terminal summary prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from itertools import permutations

import pytest

from geogirth import cli
from geogirth.descartes import check_membership, color_transfer, descartes_boost
from geogirth.errors import BoostFailure
from geogirth.geometry import (
    Embedding,
    SymbolicPoint,
    blowup_embed,
    raw_embedding,
    symbolic_inner_product,
    tensor_square,
    to_unit_distance,
    verify_diameter_property,
    verify_unit_distance,
)
from geogirth.graph import (
    Graph,
    blowup_graph,
    complete_graph,
    count_cycles_upto,
    cycle_graph,
    girth,
    induced_subgraph,
    verify_homomorphism,
)
from geogirth.hypergraph import fano_plane, generate_hypergraph, hypergraph_chromatic, hypergraph_girth
from geogirth.randboost import (
    BoostParams,
    boost_girth_doubling,
    boost_girth_random,
    desk_q,
    expected_cycle_bound,
    subsample_edges,
)
from geogirth.signvec import (
    build_orthogonality_graph,
    enumerate_vprime,
    frankl_wilson_certificate,
    inner_product,
    orthogonality_graph_of,
    polynomial_evaluate,
)
from geogirth.solver import Colouring, exact_chromatic, k_colouring, verify_proper

# ------------------------------------------------------------------ 1


def test_c1_frankl_wilson_instance(criterion):
    criterion(1, "p=3: |V'|=462, alpha bound 132, chi >= 7/2 (so >= 4), full pair scan < 10 s")
    t0 = time.monotonic()
    vectors = enumerate_vprime(3)
    scanned = orthogonality_graph_of(vectors)
    built = build_orthogonality_graph(3)
    cert = frankl_wilson_certificate(3)
    elapsed = time.monotonic() - t0
    assert len(vectors) == 462 == math.comb(11, 5)
    assert scanned.edges() == built.edges()
    assert cert.family_size == 462
    assert cert.independence_bound == 132 == 2 * math.comb(12, 2)
    assert cert.chromatic_lower_bound == Fraction(7, 2)
    assert cert.colours_needed == 4
    assert elapsed < 10, elapsed


# ------------------------------------------------------------------ 2


def test_c2_mod_p_dichotomy(criterion):
    criterion(2, "p=3: f_v(u) != 0 mod 3 iff v=u or <v,u>=0, all 462^2 ordered pairs")
    vectors = enumerate_vprime(3)
    exceptions = 0
    pairs = 0
    for v in vectors:
        for u in vectors:
            pairs += 1
            nonzero = polynomial_evaluate(v, u, 3) != 0
            if nonzero != (v == u or inner_product(v, u) == 0):
                exceptions += 1
    assert pairs == 462**2
    assert exceptions == 0


# ------------------------------------------------------------------ 3

# x_p = C(4p,2p) / (4 C(4p,p-1)), computed once and frozen
TREND = {
    3: Fraction(7, 2),
    5: Fraction(143, 15),
    7: Fraction(4845, 182),
    11: Fraction(310155, 1463),
    13: Fraction(898101, 1495),
}


def _root_exceeds(x: Fraction, p: int, r: Fraction) -> bool:
    """x ** (1/p) > r, decided exactly."""
    return x > r**p


def test_c3_asymptotic_trend(criterion):
    criterion(3, "x_p^(1/p) strictly increasing over p in {3,5,7,11,13}, < 27/16, p=13 value > 1.55")
    ps = sorted(TREND)
    for p in ps:
        assert Fraction(math.comb(4 * p, 2 * p), 4 * math.comb(4 * p, p - 1)) == TREND[p]
    # strict increase: x_a^(1/a) < x_b^(1/b)  <=>  x_a^b < x_b^a
    for a, b in zip(ps, ps[1:]):
        assert TREND[a] ** b < TREND[b] ** a
    for p in ps:
        assert not _root_exceeds(TREND[p], p, Fraction(27, 16))
        assert TREND[p] != Fraction(27, 16) ** p
    assert _root_exceeds(TREND[13], 13, Fraction(155, 100))


# ------------------------------------------------------------------ 4


def _bases():
    k2 = (raw_embedding([(1, 0), (0, 1)]), complete_graph(2))
    c4 = (raw_embedding([(1, 0), (0, 1), (-1, 0), (0, -1)]), cycle_graph(4))
    tri = (raw_embedding([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), complete_graph(3))
    return {"K2": k2, "C4": c4, "basis-triangle": tri}


def test_c4_blowup_embedding(criterion):
    criterion(4, "blow-up embedding: cross pairs orthogonal, unit norm, distinct (K2, C4, basis triangle; m=1..3)")
    for name, (emb, base) in _bases().items():
        for m in (1, 2, 3):
            big = blowup_embed(emb, m)
            pts = big.points
            assert len(pts) == emb.points.__len__() * m
            assert all(pt.squared_norm == 1 for pt in pts.values()), name
            assert len({pt.key() for pt in pts.values()}) == len(pts), name
            for u, v in base.edges():
                crosses = [(u * m + a, v * m + b) for a in range(m) for b in range(m)]
                assert len(crosses) == m * m
                for x, y in crosses:
                    assert symbolic_inner_product(pts[x], pts[y]).is_zero, (name, m, x, y)


# ------------------------------------------------------------------ 5


def _fw_subgraphs():
    G = build_orthogonality_graph(3)
    vectors = G.labels
    rng = random.Random(5)
    picks = [list(range(30)), list(range(432, 462))] + [sorted(rng.sample(range(462), 30)) for _ in range(3)]
    for keep in picks:
        yield induced_subgraph(G, keep), [vectors[i] for i in keep]


def test_c5_unit_distance_and_tensor(criterion):
    criterion(5, "30-vertex p=3 subgraphs: unit-distance edges exactly 1; tensor maximum exactly on edges")
    for sub, vecs in _fw_subgraphs():
        assert sub.num_edges > 0
        emb = raw_embedding([v.coords for v in vecs])
        ud = to_unit_distance(emb)
        assert verify_unit_distance(ud, sub).ok
        T = tensor_square(emb)
        for i in range(sub.n):
            for j in range(i + 1, sub.n):
                ip = symbolic_inner_product(T.points[i], T.points[j]).exact
                assert ip == inner_product(vecs[i], vecs[j]) ** 2
        rep = verify_diameter_property(T, sub)
        assert rep.ok and rep.details["faithful"], rep.to_dict()


# ------------------------------------------------------------------ 6

K3_SEED = 7
K3_M = 16
K3_RETRIES = 0  # pinned after the first successful run


def _oracle(budget):
    return lambda h: exact_chromatic(h, node_budget=budget)[0]


def test_c6_random_booster_k3(criterion):
    criterion(6, "random booster K3, g=4: triangle-free, chi=3, pinned retries")
    t0 = time.monotonic()
    params = BoostParams(g=4, m=K3_M, q=desk_q(K3_M, 4), seed=K3_SEED, max_retries=20)
    res = boost_girth_random(complete_graph(3), params, _oracle(2_000_000))
    assert res.retries == K3_RETRIES
    assert girth(res.graph).girth > 4
    assert exact_chromatic(res.graph)[0] == 3
    assert set(res.graph.edges()) <= set(blowup_graph(complete_graph(3), K3_M).edges())
    assert time.monotonic() - t0 < 120


def test_c6_random_booster_k4(criterion):
    criterion(6, "random booster K4, g=5: chi=4 with girth >= 6 inside 2 min")
    t0 = time.monotonic()
    try:
        res = boost_girth_doubling(
            complete_graph(4), 5, _oracle(50_000), m0=2, m_max=1024, max_retries=3, seed=0, time_budget=100
        )
    except BoostFailure as exc:
        decided = [a for a in exc.attempts if a.get("chi") is not None]
        pytest.fail(
            f"no 4-chromatic girth>=6 sample found: {len(decided)} decided attempts all had chi<=3, "
            f"largest m tried {max(a['m'] for a in exc.attempts)}; see the decisions ledger"
        )
    assert girth(res.graph).girth >= 6
    assert time.monotonic() - t0 < 120


# ------------------------------------------------------------------ 7


def test_c7_monte_carlo_cycle_bound(criterion):
    criterion(7, "200 seeded subsamples of K3 blown up to 30 vertices: mean l-cycle count <= (nq)^l/2, l<=6")
    base = blowup_graph(complete_graph(3), 10)
    n = base.n
    q = Fraction(1, 10)
    totals = {ell: 0 for ell in range(3, 7)}
    for seed in range(200):
        counts = count_cycles_upto(subsample_edges(base, q, seed), 6)
        for ell in totals:
            totals[ell] += counts[ell]
    bound = expected_cycle_bound(n, q, 6)
    for ell, tot in totals.items():
        assert Fraction(tot, 200) <= bound[ell], (ell, tot, bound[ell])


# ------------------------------------------------------------------ 8


def _colourings_of(g: Graph, k: int, tries: int = 8):
    """Proper k-colourings found by the solver on shuffled relabellings, plus colour permutations."""
    found = []
    for s in range(tries):
        perm = list(range(g.n))
        random.Random(s).shuffle(perm)
        inv = {p: i for i, p in enumerate(perm)}
        shuffled = Graph(g.n, [(perm[a], perm[b]) for a, b in g.edges()])
        col = k_colouring(shuffled, k)
        assert col is not None
        found.append([col[perm[v]] for v in range(g.n)])
    out = []
    for base in found[:2]:
        for sigma in permutations(range(1, k + 1)):
            out.append([sigma[c - 1] for c in base])
    return out + found


def test_c8_descartes(criterion):
    criterion(8, "explicit booster: K2 base case; K3, g=4, k=3 gives girth>=4, chi=3, colour transfer")
    t0 = time.monotonic()
    k2 = descartes_boost(complete_graph(2), 7, 2)
    assert k2.gprime == complete_graph(2) and k2.hom.map == [0, 1] and not k2.levels

    res = descartes_boost(complete_graph(3), 4, 3, seed=0)
    assert girth(res.gprime).girth >= 4
    assert exact_chromatic(res.gprime)[0] == 3
    assert k_colouring(res.gprime, 2) is None
    rep = verify_homomorphism(res.hom)
    assert rep.ok and rep.details["surjective"]
    for cp in _colourings_of(res.gprime, 3):
        assert verify_proper(res.gprime, Colouring(cp, 3)).ok
        c = color_transfer(res, cp)
        assert verify_proper(complete_graph(3), c).ok
        assert sorted(c.assignment) == [1, 2, 3]
        assert check_membership(res, cp, c.assignment)
    assert time.monotonic() - t0 < 300


# ------------------------------------------------------------------ 9


def test_c9_hypergraph_gadget(criterion):
    criterion(9, "generate_hypergraph(3,2,3): linear, weak chi >= 3; Fano plane girth 3, chi 3")
    for seed in range(4):
        H = generate_hypergraph(3, 2, 3, seed)
        assert H.r == 3
        for a in range(len(H.edges)):
            for b in range(a + 1, len(H.edges)):
                assert len(set(H.edges[a]) & set(H.edges[b])) <= 1
        assert hypergraph_chromatic(H) >= 3
        assert hypergraph_girth(H) >= 3
    F = fano_plane()
    assert hypergraph_girth(F) == 3
    assert hypergraph_chromatic(F) == 3


# ------------------------------------------------------------------ 10


def _run_twice(tmp_path, name, argv_tail, expect=0):
    outs = []
    for rep in ("a", "b"):
        out = tmp_path / f"{name}-{rep}"
        assert cli.main(argv_tail + ["--out", str(out)]) == expect
        outs.append(out)
    return outs


def _manifest_outputs(d):
    import json

    return json.loads((d / "manifest.json").read_text())["outputs"]


def test_c10_determinism(criterion, tmp_path):
    criterion(10, "every pipeline re-run gives byte-identical exports and identical manifest digests")
    a, _ = _run_twice(tmp_path, "construct", ["construct", "--p", "3", "--m", "2"])
    graph = str(a / "graph.json")
    emb_raw = tmp_path / "raw.json"
    import json

    emb_raw.write_text(json.dumps(raw_embedding([v.coords for v in enumerate_vprime(3)]).to_json_dict()))
    runs = [
        ["construct", "--p", "3", "--m", "2"],
        ["boost", "--base", "K3", "--method", "descartes", "--g", "4", "--k", "3"],
        ["boost", "--base", "K3", "--method", "random", "--g", "4", "--seed", "7", "--m", "16"],
        ["boost", "--base", "C5", "--method", "random", "--g", "5", "--seed", "3"],
        ["convert", "--embedding", str(emb_raw), "--graph", graph, "--target", "unit-distance"],
        ["convert", "--embedding", str(emb_raw), "--graph", graph, "--target", "diameter", "--vertices", "40"],
        ["verify", "--graph", graph, "--checks", "girth", "--p", "3"],
        ["verify", "--checks", "rank-argument", "--p", "3"],
        ["hypergraph", "--r", "3", "--k", "2", "--g", "3", "--seed", "1"],
        ["solve", "--base", "moser", "--mis"],
    ]
    for i, argv in enumerate(runs):
        x, y = _run_twice(tmp_path, f"run{i}", argv)
        assert _manifest_outputs(x) == _manifest_outputs(y), argv
        for name in _manifest_outputs(x):
            assert (x / name).read_bytes() == (y / name).read_bytes(), (argv, name)
