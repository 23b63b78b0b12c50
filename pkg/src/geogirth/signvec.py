"""Balanced +-1 vectors of length 4p and their orthogonality graph.

A vector is stored as a bit set over its 4p coordinates (+1 -> bit set).
For two such vectors with t common +1 positions the inner product is
``4 * (t - p)``, so orthogonality means exactly p shared +1 positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParameterError, ResourceError
from .graph import Graph
from .report import Report

#: Largest prime accepted anywhere in this module.
P_MAX = 13
#: Largest family enumerate_vprime will materialize.
ENUMERATION_BUDGET = 200_000
#: Largest edge count build_orthogonality_graph will materialize.
EDGE_BUDGET = 2_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def check_p(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise ParameterError(f"p must be an integer, got {p!r}")
    if p <= 2 or not is_prime(p):
        raise ParameterError(f"p must be an odd prime, got {p}")
    if p > P_MAX:
        raise ParameterError(f"p={p} exceeds the configured cap {P_MAX}")
    return p


@dataclass(frozen=True, order=True)
class SignVector:
    p: int
    bits: int

    def __post_init__(self):
        n = 4 * self.p
        if self.bits < 0 or self.bits >> n:
            raise ParameterError("bit set wider than 4p")
        if not self.bits >> (n - 1) & 1:
            raise ParameterError("last coordinate must be +1")
        if self.bits.bit_count() != 2 * self.p:
            raise ParameterError("coordinates must sum to zero")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> SignVector:
        if len(coords) % 4:
            raise ParameterError("length must be 4p")
        bits = 0
        for i, c in enumerate(coords):
            if c == 1:
                bits |= 1 << i
            elif c != -1:
                raise ParameterError(f"coordinate {c!r} is not +-1")
        return cls(len(coords) // 4, bits)

    @property
    def length(self) -> int:
        return 4 * self.p

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(1 if self.bits >> i & 1 else -1 for i in range(4 * self.p))

    @property
    def bitstring(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(4 * self.p))

    @classmethod
    def from_bitstring(cls, s: str) -> SignVector:
        return cls.from_coords([1 if ch == "1" else -1 for ch in s])


def vprime_size(p: int) -> int:
    return math.comb(4 * p - 1, 2 * p - 1)


def enumerate_vprime(p: int, budget: int = ENUMERATION_BUDGET) -> list[SignVector]:
    """All balanced vectors with last coordinate +1, in lexicographic order (-1 < +1)."""
    check_p(p)
    size = vprime_size(p)
    if size > budget:
        raise ResourceError(f"|V'| = {size} exceeds enumeration budget {budget}", size=size)
    n = 4 * p
    head = (1 << (n - 1)) - 1
    out = []
    # choosing the -1 positions in lexicographic order gives lexicographic coordinates
    for minus in combinations(range(n - 1), 2 * p):
        bits = head
        for i in minus:
            bits &= ~(1 << i)
        out.append(SignVector(p, bits | 1 << (n - 1)))
    return out


def inner_product(u: SignVector, v: SignVector) -> int:
    if u.p != v.p:
        raise ParameterError("vectors have different lengths")
    return 4 * ((u.bits & v.bits).bit_count() - u.p)


def build_orthogonality_graph(p: int, edge_budget: int = EDGE_BUDGET) -> Graph:
    """Graph on enumerate_vprime(p) joining orthogonal pairs; vectors are the labels.

    Neighbours are generated directly: u is orthogonal to v iff u keeps p of
    v's +1 positions (always including the last) and takes p of v's -1 positions.
    """
    vectors = enumerate_vprime(p)
    n = 4 * p
    per_vertex = math.comb(2 * p - 1, p - 1) * math.comb(2 * p, p)
    if len(vectors) * per_vertex // 2 > edge_budget:
        raise ResourceError(
            f"orthogonality graph for p={p} has {len(vectors) * per_vertex // 2} edges, budget {edge_budget}"
        )
    index = {v.bits: i for i, v in enumerate(vectors)}
    last = 1 << (n - 1)
    edges = []
    for i, v in enumerate(vectors):
        plus = [j for j in range(n - 1) if v.bits >> j & 1]
        minus = [j for j in range(n - 1) if not v.bits >> j & 1]
        for keep in combinations(plus, p - 1):
            kb = last
            for j in keep:
                kb |= 1 << j
            for take in combinations(minus, p):
                b = kb
                for j in take:
                    b |= 1 << j
                jdx = index[b]
                if i < jdx:
                    edges.append((i, jdx))
    return Graph(len(vectors), edges, labels=vectors)


def orthogonality_graph_of(vectors: Sequence[SignVector]) -> Graph:
    """Pair-scan construction over an arbitrary list of vectors."""
    edges = [
        (i, j)
        for i in range(len(vectors))
        for j in range(i + 1, len(vectors))
        if inner_product(vectors[i], vectors[j]) == 0
    ]
    return Graph(len(vectors), edges, labels=list(vectors))


@dataclass(frozen=True)
class ChromaticCertificate:
    p: int
    family_size: int
    independence_bound: int
    chromatic_lower_bound: Fraction
    monomial_space_dim: int

    @property
    def colours_needed(self) -> int:
        """ceil(family_size / independence_bound)."""
        return math.ceil(self.chromatic_lower_bound)

    def to_json_dict(self) -> dict:
        r = self.chromatic_lower_bound
        return {
            "p": self.p,
            "family_size": self.family_size,
            "independence_bound": self.independence_bound,
            "chromatic_lower_bound": {"num": r.numerator, "den": r.denominator},
            "monomial_space_dim": self.monomial_space_dim,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> ChromaticCertificate:
        r = data["chromatic_lower_bound"]
        return cls(
            data["p"],
            data["family_size"],
            data["independence_bound"],
            Fraction(r["num"], r["den"]),
            data["monomial_space_dim"],
        )


def frankl_wilson_certificate(p: int) -> ChromaticCertificate:
    check_p(p)
    family = vprime_size(p)
    bound = 2 * math.comb(4 * p, p - 1)
    monomials = sum(math.comb(4 * p, k) for k in range(p))
    assert monomials <= bound
    assert 2 * family == math.comb(4 * p, 2 * p)
    return ChromaticCertificate(p, family, bound, Fraction(family, bound), monomials)


def polynomial_evaluate(v: SignVector, u: SignVector, p: int) -> int:
    """prod_{i=1}^{p-1} (<u, v> - i) mod p."""
    check_p(p)
    if v.p != p or u.p != p:
        raise ParameterError("vectors do not match p")
    x = inner_product(u, v) % p
    out = 1
    for i in range(1, p):
        out = out * (x - i) % p
    return out


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    mat = [[x % p for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [x * inv % p for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def verify_rank_argument(S: Sequence[SignVector], p: int) -> Report:
    """Check the linear-algebra bound on an orthogonality-free family S.

    Confirms S has no orthogonal pair, that the evaluation matrix
    ``M[v][u] = f_v(u) mod p`` is diagonal with nonzero diagonal (so the
    polynomials are independent), and that |S| respects the bound.
    """
    check_p(p)
    S = list(S)
    bound = 2 * math.comb(4 * p, p - 1)
    for a in range(len(S)):
        for b in range(a + 1, len(S)):
            if inner_product(S[a], S[b]) == 0:
                return Report(
                    "rank-argument",
                    False,
                    {"reason": "orthogonal pair in S"},
                    (S[a].bitstring, S[b].bitstring),
                )
    M = [[polynomial_evaluate(v, u, p) for u in S] for v in S]
    for a, row in enumerate(M):
        for b, val in enumerate(row):
            if (a == b) != (val != 0):
                return Report(
                    "rank-argument",
                    False,
                    {"reason": "evaluation matrix not diagonal", "entry": (a, b), "value": val},
                    (S[a].bitstring, S[b].bitstring),
                )
    rank = rank_mod_p(M, p) if S else 0
    details = {"size": len(S), "rank": rank, "independence_bound": bound}
    ok = rank == len(S) and len(S) <= bound
    return Report("rank-argument", ok, details, None if ok else "size exceeds bound")


def greedy_orthogonality_free(vectors: Iterable[SignVector]) -> list[SignVector]:
    """Grow a maximal orthogonality-free subfamily in the given order."""
    chosen: list[SignVector] = []
    for v in vectors:
        if all(inner_product(v, u) != 0 for u in chosen):
            chosen.append(v)
    return chosen


def graph_to_json_dict(g: Graph, p: int) -> dict:
    return {
        "p": p,
        "vertices": [v.bitstring for v in g.labels],
        "edges": [list(e) for e in g.edges()],
    }


def graph_from_json_dict(data: dict) -> Graph:
    vectors = [SignVector.from_bitstring(s) for s in data["vertices"]]
    return Graph(len(vectors), [tuple(e) for e in data["edges"]], labels=vectors)
