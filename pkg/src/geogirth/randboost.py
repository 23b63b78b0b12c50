"""Randomized girth boosting: subsample a blow-up, prune short cycles, keep chi.

Edge sampling uses a counter-based stream: edge number ``i`` of the input's
sorted edge list receives the 64-bit draw ``blake2b(seed, i)`` and survives
when ``draw < q * 2**64``.  Samples at different ``q`` with the same seed are
therefore nested.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .errors import BoostFailure, ParameterError, ResourceError
from .graph import Graph, blowup_graph, find_lex_least_cycle, girth
from .report import Report

_TWO64 = 1 << 64

#: Largest C(m, m')**2 checked by brute-force subset enumeration.
SUBSET_ENUMERATION_CAP = 250_000
#: Node budget for the biclique-search fallback.
BICLIQUE_NODE_BUDGET = 2_000_000


@dataclass
class BoostParams:
    g: int
    m: int
    q: Fraction
    seed: int = 0
    max_retries: int = 50

    def __post_init__(self):
        self.q = Fraction(self.q)
        if not 0 < self.q <= 1:
            raise ParameterError("q must lie in (0, 1]")
        if self.g < 3:
            raise ParameterError("g must be >= 3")
        if self.m < 1:
            raise ParameterError("m must be >= 1")
        if not 0 <= self.seed < _TWO64:
            raise ParameterError("seed must be a 64-bit unsigned integer")

    def to_json_dict(self) -> dict:
        return {
            "g": self.g,
            "m": self.m,
            "q": {"num": self.q.numerator, "den": self.q.denominator},
            "seed": self.seed,
            "max_retries": self.max_retries,
        }


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for integers x >= 0, k >= 1."""
    if x < 2 or k == 1:
        return x
    r = 1 << -(-x.bit_length() // k)  # upper bound
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def paper_q(n: int, g: int, bits: int = 40) -> Fraction:
    """Rational approximation (error < 2**-32) of n ** -(1 - 1/(2g)).

    This is the asymptotic edge-keep probability; desk-scale runs normally
    use a much larger q.
    """
    if n < 2 or g < 2:
        raise ParameterError("need n >= 2 and g >= 2")
    root = 2 * g
    # q * 2**bits = (2**(root*bits) / n**(root-1)) ** (1/root)
    num = 1 << (root * bits)
    den = n ** (root - 1)
    return Fraction(_iroot(num // den, root), 1 << bits)


def edge_draw(seed: int, index: int) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(seed.to_bytes(8, "little"))
    h.update(index.to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


def subsample_edges(g0: Graph, q: Fraction, seed: int) -> Graph:
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ParameterError("q must lie in [0, 1]")
    threshold = q * _TWO64
    kept = [e for i, e in enumerate(g0.edges()) if edge_draw(seed, i) < threshold]
    return Graph(g0.n, kept, labels=g0.labels, parts=g0.parts)


def prune_short_cycles(g0: Graph, g: int) -> Graph:
    """Delete edges until no cycle of length <= g remains.

    Repeatedly takes the lexicographically least shortest cycle and removes
    its lexicographically least edge.
    """
    adj = [set(g0.neighbors(v)) for v in range(g0.n)]
    for length in range(3, g + 1):
        start = 0
        while True:
            cyc = find_lex_least_cycle(g0, length, start, adj=adj)
            if cyc is None:
                break
            a, b = min(
                (min(cyc[i], cyc[(i + 1) % length]), max(cyc[i], cyc[(i + 1) % length]))
                for i in range(length)
            )
            adj[a].discard(b)
            adj[b].discard(a)
            start = cyc[0]
    edges = [(u, v) for u in range(g0.n) for v in adj[u] if u < v]
    return Graph(g0.n, edges, labels=g0.labels, parts=g0.parts)


def _part_members(gb: Graph, nparts: int) -> list[list[int]]:
    if gb.parts is None:
        raise ParameterError("graph carries no part labels")
    members: list[list[int]] = [[] for _ in range(nparts)]
    for v, p in enumerate(gb.parts):
        members[p].append(v)
    return members


def check_supersaturation(gb: Graph, base: Graph, m_prime: int, *, method: str = "auto") -> Report:
    """Every pair of m'-subsets of two adjacent parts must span an edge.

    ``method`` is ``"enumerate"`` (all subset pairs), ``"biclique"`` (search
    for an m' x m' biclique in the bipartite complement) or ``"auto"``.
    """
    members = _part_members(gb, base.n)
    if m_prime < 1:
        raise ParameterError("m' must be >= 1")
    checked = 0
    for u, v in base.edges():
        W_all, U_all = members[u], members[v]
        if m_prime > min(len(W_all), len(U_all)):
            raise ParameterError("m' exceeds part size")
        pairs = math.comb(len(W_all), m_prime) * math.comb(len(U_all), m_prime)
        use = method
        if use == "auto":
            use = "enumerate" if pairs <= SUBSET_ENUMERATION_CAP else "biclique"
        if use == "enumerate":
            if pairs > SUBSET_ENUMERATION_CAP * 40:
                raise ResourceError(
                    "subset enumeration too large; use the chromatic check instead", pairs=pairs
                )
            bad = _enumerate_empty_pair(gb, W_all, U_all, m_prime)
        elif use == "biclique":
            bad = _biclique_empty_pair(gb, W_all, U_all, m_prime)
        else:
            raise ParameterError(f"unknown method {method!r}")
        checked += 1
        if bad is not None:
            return Report(
                "supersaturation",
                False,
                {"m_prime": m_prime, "base_edge": (u, v), "method": use},
                {"W": bad[0], "U": bad[1]},
            )
    return Report("supersaturation", True, {"m_prime": m_prime, "base_edges_checked": checked})


def _enumerate_empty_pair(gb: Graph, W_all, U_all, mp):
    U_index = {x: i for i, x in enumerate(U_all)}
    nb = {w: sum(1 << U_index[x] for x in gb.neighbors(w) if x in U_index) for w in W_all}
    U_masks = [(U, sum(1 << U_index[x] for x in U)) for U in combinations(U_all, mp)]
    for W in combinations(W_all, mp):
        hit = 0
        for w in W:
            hit |= nb[w]
        for U, mask in U_masks:
            if not hit & mask:
                return list(W), list(U)
    return None


def _biclique_empty_pair(gb: Graph, W_all, U_all, mp):
    """Find W, U of size mp with no edges between them, or None."""
    U_index = {x: i for i, x in enumerate(U_all)}
    full = (1 << len(U_all)) - 1
    non_nb = {w: full & ~sum(1 << U_index[x] for x in gb.neighbors(w) if x in U_index) for w in W_all}
    order = sorted(W_all, key=lambda w: (-non_nb[w].bit_count(), w))
    nodes = 0

    def search(i: int, chosen: list[int], common: int):
        nonlocal nodes
        nodes += 1
        if nodes > BICLIQUE_NODE_BUDGET:
            raise ResourceError("biclique search budget exceeded; use the chromatic check instead")
        if len(chosen) == mp:
            return list(chosen)
        if len(chosen) + (len(order) - i) < mp:
            return None
        for j in range(i, len(order)):
            if len(chosen) + (len(order) - j) < mp:
                break
            w = order[j]
            nxt = common & non_nb[w]
            if nxt.bit_count() < mp:
                continue
            chosen.append(w)
            res = search(j + 1, chosen, nxt)
            chosen.pop()
            if res is not None:
                return res
        return None

    W = search(0, [], full)
    if W is None:
        return None
    common = full
    for w in W:
        common &= non_nb[w]
    U = sorted(U_all[i] for i in range(len(U_all)) if common >> i & 1)[:mp]
    return sorted(W), U


def default_m_prime(m: int, k: int) -> int:
    """ceil(m / (k - 1)) for a k-chromatic base."""
    if k < 2:
        return m
    return -(-m // (k - 1))


@dataclass
class BoostResult:
    graph: Graph
    retries: int
    seed_used: int
    params: BoostParams
    attempts: list[dict] = field(default_factory=list)


def boost_girth_random(
    base: Graph,
    params: BoostParams,
    chi_oracle: Callable[[Graph], int],
    *,
    target_chi: int | None = None,
    deadline: float | None = None,
) -> BoostResult:
    """Sample, prune and accept the first seed whose output keeps chi(base).

    Seeds tried are ``seed, seed + 1, ...``; ``retries`` counts failed
    attempts before success.  ``deadline`` is a time.monotonic() value after
    which no new attempt starts.
    """
    if target_chi is None:
        target_chi = chi_oracle(base)
    blown = blowup_graph(base, params.m)
    attempts = []
    for r in range(params.max_retries):
        if deadline is not None and time.monotonic() > deadline:
            attempts.append({"m": params.m, "stopped": "deadline"})
            break
        seed = (params.seed + r) % _TWO64
        sample = subsample_edges(blown, params.q, seed)
        pruned = prune_short_cycles(sample, params.g)
        try:
            chi = chi_oracle(pruned)
        except ResourceError as exc:
            attempts.append(
                {"m": params.m, "seed": seed, "edges": pruned.num_edges, "chi": None, "error": str(exc)}
            )
            continue
        attempts.append(
            {"m": params.m, "seed": seed, "sampled_edges": sample.num_edges, "edges": pruned.num_edges, "chi": chi}
        )
        if chi == target_chi:
            return BoostResult(pruned, r, seed, params, attempts)
    tried = [a for a in attempts if "edges" in a]
    best = max(tried, key=lambda a: (a["chi"] or 0, a["edges"]), default=None)
    raise BoostFailure(
        f"no seed in [{params.seed}, {params.seed + params.max_retries}) preserved chi={target_chi}; "
        f"best attempt {best}",
        attempts,
    )


def boost_girth_doubling(
    base: Graph,
    g: int,
    chi_oracle: Callable[[Graph], int],
    *,
    m0: int = 2,
    m_max: int = 256,
    q_rule: Callable[[int, int], Fraction] | None = None,
    seed: int = 0,
    max_retries: int = 20,
    time_budget: float | None = None,
) -> BoostResult:
    """Run boost_girth_random with m = m0, 2*m0, ... until it succeeds.

    Gives up (BoostFailure) past m_max or after ``time_budget`` seconds.
    """
    deadline = None if time_budget is None else time.monotonic() + time_budget
    if q_rule is None:
        q_rule = desk_q
    target = chi_oracle(base)
    m = m0
    failures = []
    while m <= m_max:
        params = BoostParams(g=g, m=m, q=q_rule(m, g), seed=seed, max_retries=max_retries)
        try:
            res = boost_girth_random(base, params, chi_oracle, target_chi=target, deadline=deadline)
            res.attempts = failures + res.attempts
            return res
        except BoostFailure as exc:
            failures.extend(exc.attempts)
        if deadline is not None and time.monotonic() > deadline:
            raise BoostFailure(f"time budget exhausted at m={m}", failures)
        m *= 2
    raise BoostFailure(f"doubling search up to m={m_max} did not succeed", failures)


def desk_q(m: int, g: int) -> Fraction:
    """Desk-scale keep probability: about 4 expected neighbours per adjacent part."""
    return min(Fraction(1), Fraction(4, m))


def expected_cycle_bound(n: int, q: Fraction, max_len: int) -> dict[int, Fraction]:
    """The first-moment bound (nq)**l / 2 on the number of l-cycles, l = 3..max_len."""
    nq = n * Fraction(q)
    return {ell: nq**ell / 2 for ell in range(3, max_len + 1)}
