"""Explicit girth boosting by recursive hypergraph-indexed gluing.

Vertices of the input graph are added one at a time in increasing id order.
At the level that adds vertex ``u`` the previous graph ``G_u`` (with its
homomorphism onto the first ``u`` vertices) is copied once per edge of an
auxiliary hypergraph ``H``, a fresh independent set ``U`` stands for the
vertices of ``H``, and every edge ``F`` of ``H`` is joined to its copy by a
matching onto the preimage of ``u``'s neighbourhood.  Because ``H`` has high
girth, so does the result; because ``H`` is not k-colourable, every proper
k-colouring of the result pulls back to one of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import InvariantViolation, ParameterError, ResourceError
from .graph import Graph, Homomorphism, induced_subgraph
from .hypergraph import Hypergraph, generate_hypergraph
from .solver import Colouring, chromatic_number, verify_proper

#: Largest graph descartes_boost is willing to build.
MAX_VERTICES = 50_000


@dataclass
class Level:
    pivot: int
    n: int
    hypergraph: Hypergraph
    copy_size: int
    attach: list[int]  # vertices of G_u matched to each hyperedge, sorted
    matchings: list[list[tuple[int, int]]]  # per hyperedge: (U vertex, G' vertex)

    @property
    def u_offset(self) -> int:
        return len(self.hypergraph.edges) * self.copy_size

    def to_json_dict(self) -> dict:
        return {
            "pivot": self.pivot,
            "n": self.n,
            "hypergraph": self.hypergraph.to_json_dict(),
            "copy_size": self.copy_size,
            "attach": self.attach,
            "matchings": [[list(p) for p in mt] for mt in self.matchings],
        }


@dataclass
class DescartesResult:
    base: Graph
    gprime: Graph
    hom: Homomorphism
    g: int
    k: int
    levels: list[Level] = field(default_factory=list)
    base_size: int = 0  # vertices of the initial |V| <= 2 piece

    def trace_json(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "k": self.k,
            "base_vertices": self.base.n,
            "base_edges": [list(e) for e in self.base.edges()],
            "initial_size": self.base_size,
            "levels": [lv.to_json_dict() for lv in self.levels],
        }


def size_forecast(copy_size: int, n: int, k: int) -> int:
    """Lower bound on the next level's vertex count.

    An n-uniform hypergraph with fewer than k**(n-1) edges is k-colourable
    (a uniformly random colouring has fewer than one monochromatic edge in
    expectation), so H has at least that many edges.
    """
    if n <= 1:
        return copy_size + 1
    return k ** (n - 1) * copy_size + n


def _single_edge(n: int) -> Hypergraph:
    return Hypergraph(n, (tuple(range(n)),), {"explicit": "single-edge"})


def descartes_boost(
    g0: Graph,
    g: int,
    k: int | None = None,
    seed: int = 0,
    *,
    max_vertices: int = MAX_VERTICES,
    hypergraph_factory: Callable[[int, int, int, int], Hypergraph] | None = None,
) -> DescartesResult:
    """Build G' with girth >= g, a surjective homomorphism to g0 and colour transfer.

    ``hypergraph_factory(r, k, g, seed)`` supplies the auxiliary hypergraphs
    (default: generate_hypergraph); level ``u`` uses seed ``seed + u``.
    """
    if g < 3:
        raise ParameterError("g must be >= 3")
    if k is None:
        k = max(chromatic_number(g0), 1)
    if k < 1:
        raise ParameterError("k must be >= 1")
    factory = hypergraph_factory or generate_hypergraph

    start = min(g0.n, 2)
    cur = induced_subgraph(g0, range(start))
    hmap = list(range(start))
    levels: list[Level] = []

    for u in range(start, g0.n):
        nbrs = {w for w in g0.neighbors(u) if w < u}
        attach = [x for x in range(cur.n) if hmap[x] in nbrs]
        n = len(attach)
        if n == 0:
            # isolated so far: G' is G_u plus one vertex mapped to u
            cur = Graph(cur.n + 1, cur.edges())
            hmap = hmap + [u]
            levels.append(Level(u, 0, Hypergraph(1, ()), cur.n - 1, [], []))
            continue
        forecast = size_forecast(cur.n, n, k)
        if forecast > max_vertices:
            raise ResourceError(
                f"level for vertex {u} needs an {n}-uniform hypergraph; "
                f"forecast >= {forecast} vertices exceeds {max_vertices}",
                forecast=forecast,
                level=u,
                n=n,
            )
        if n == 1:
            H = Hypergraph(1, ((0,),), {"explicit": "single-vertex"})
        elif k == 1:
            H = _single_edge(n)
        else:
            H = factory(n, k, g, seed + u)
        E = len(H.edges)
        size = E * cur.n + H.vertex_count
        if size > max_vertices:
            raise ResourceError(f"level for vertex {u} would have {size} vertices", level=u, size=size)
        edges = []
        new_map = []
        base_edges = cur.edges()
        for i in range(E):
            off = i * cur.n
            edges.extend((a + off, b + off) for a, b in base_edges)
            new_map.extend(hmap)
        u_off = E * cur.n
        new_map.extend([u] * H.vertex_count)
        matchings = []
        for i, F in enumerate(H.edges):
            off = i * cur.n
            pairs = [(u_off + f, off + x) for f, x in zip(sorted(F), attach)]
            edges.extend(pairs)
            matchings.append(pairs)
        levels.append(Level(u, n, H, cur.n, attach, matchings))
        cur = Graph(size, edges)
        hmap = new_map

    hom = Homomorphism(cur, g0, hmap, surjective=True)
    return DescartesResult(g0, cur, hom, g, k, levels, start)


def color_transfer(result: DescartesResult, cprime: Colouring | list[int]) -> Colouring:
    """Pull a proper k-colouring of G' back to a proper k-colouring of the base.

    Walks the levels top-down: the colouring of U must make some hyperedge F
    monochromatic (colour a); recurse into the copy attached to F and give
    the pivot colour a.
    """
    assignment = cprime.assignment if isinstance(cprime, Colouring) else list(cprime)
    rep = verify_proper(result.gprime, Colouring(assignment, max(assignment, default=0)))
    if not rep.ok:
        raise ParameterError(f"colouring of G' is not proper: {rep.violation}")
    if len(set(assignment)) > result.k:
        raise ParameterError(f"colouring uses more than k={result.k} colours")

    pivot_colour: dict[int, int] = {}
    cur = assignment
    for lv in reversed(result.levels):
        if lv.n == 0:
            pivot_colour[lv.pivot] = cur[-1]
            cur = cur[: lv.copy_size]
            continue
        u_off = lv.u_offset
        on_u = cur[u_off : u_off + lv.hypergraph.vertex_count]
        chosen = None
        for i, F in enumerate(lv.hypergraph.edges):
            cols = {on_u[f] for f in F}
            if len(cols) == 1:
                chosen = (i, cols.pop())
                break
        if chosen is None:
            raise InvariantViolation(f"no monochromatic hyperedge at level {lv.pivot}")
        i, a = chosen
        pivot_colour[lv.pivot] = a
        cur = cur[i * lv.copy_size : (i + 1) * lv.copy_size]
    out = list(cur) + [pivot_colour[u] for u in range(result.base_size, result.base.n)]
    col = Colouring(out, max(out, default=0))
    if not verify_proper(result.base, col).ok:
        raise InvariantViolation("transferred colouring is not proper")
    return col


def check_membership(result: DescartesResult, cprime: list[int], c: list[int]) -> bool:
    """c(v) is among the colours c' uses on the preimage of v, for every v."""
    seen: list[set[int]] = [set() for _ in range(result.base.n)]
    for x, v in enumerate(result.hom.map):
        seen[v].add(cprime[x])
    return all(c[v] in seen[v] for v in range(result.base.n))
