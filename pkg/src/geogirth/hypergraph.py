"""Uniform hypergraphs: cycles, girth, weak chromatic number, random generation.

A cycle of length l >= 2 is a sequence of distinct edges F_1..F_l with
distinct vertices v_i in F_i & F_{i+1} (cyclically).  Such cycles are exactly
the cycles of length 2l in the vertex/edge incidence graph, which is how the
girth is computed.
"""

from __future__ import annotations

import math
import random
import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvariantViolation, ParameterError, ResourceError
from .graph import Graph, girth

#: Exact colouring search refuses hypergraphs with more vertices than this.
MAX_COLOURING_VERTICES = 64
NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        sizes = {len(e) for e in edges}
        if len(sizes) > 1:
            raise ParameterError("hypergraph is not uniform")
        for e in edges:
            if len(set(e)) != len(e):
                raise ParameterError(f"edge {e} repeats a vertex")
            if e and not (0 <= e[0] and e[-1] < self.vertex_count):
                raise ParameterError(f"edge {e} out of range")
        if len(set(edges)) != len(edges):
            raise ParameterError("duplicate edges")
        object.__setattr__(self, "edges", edges)

    @property
    def r(self) -> int | None:
        return len(self.edges[0]) if self.edges else None

    def incidence_graph(self) -> Graph:
        """Bipartite graph: vertices 0..V-1, then one node per edge."""
        V = self.vertex_count
        return Graph(V + len(self.edges), [(v, V + i) for i, e in enumerate(self.edges) for v in e])

    def to_json_dict(self) -> dict:
        out = {"r": self.r, "vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> Hypergraph:
        return cls(int(data["vertices"]), tuple(tuple(e) for e in data["edges"]), dict(data.get("meta", {})))


def fano_plane() -> Hypergraph:
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    return Hypergraph(7, tuple(lines))


def hypergraph_girth(H: Hypergraph) -> float:
    """Length of a shortest cycle (math.inf when there is none)."""
    gi = girth(H.incidence_graph()).girth
    return gi if gi == math.inf else gi // 2


# ---------------------------------------------------------------- weak colouring


def _colour_search(H: Hypergraph, k: int, budget: int) -> list[int] | None:
    """Colours 0..k-1 with no monochromatic edge, or None."""
    n = H.vertex_count
    if k <= 0:
        return None if n else []
    r = H.r or 0
    if r == 1:
        return None
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, e in enumerate(H.edges):
        for v in e:
            inc[v].append(i)
    full = (1 << k) - 1
    domain = [full] * n
    colour = [-1] * n
    # per edge: number of coloured vertices, and their common colour or -2 if mixed
    ncol = [0] * len(H.edges)
    mono = [-1] * len(H.edges)
    trail: list[tuple[int, int, int]] = []  # (kind, index, old)
    order_key = [-len(inc[v]) for v in range(n)]
    nodes = 0
    state = {"used": 0, "left": n}

    def remove(w: int, c: int, queue) -> bool:
        d = domain[w]
        if not d >> c & 1:
            return True
        trail.append((0, w, d))
        d &= ~(1 << c)
        domain[w] = d
        if not d:
            return False
        if d & (d - 1) == 0:
            queue.append((w, d.bit_length() - 1))
        return True

    def assign(v: int, c: int) -> bool:
        queue = [(v, c)]
        while queue:
            x, cx = queue.pop()
            if colour[x] >= 0:
                if colour[x] != cx:
                    return False
                continue
            if not domain[x] >> cx & 1:
                return False
            trail.append((1, x, state["used"]))
            colour[x] = cx
            state["used"] |= 1 << cx
            state["left"] -= 1
            for ei in inc[x]:
                trail.append((2, ei, ncol[ei] * 64 + (mono[ei] + 2)))
                ncol[ei] += 1
                if ncol[ei] == 1:
                    mono[ei] = cx
                elif mono[ei] != cx:
                    mono[ei] = -2
                if mono[ei] == cx:
                    if ncol[ei] == r:
                        return False
                    if ncol[ei] == r - 1:
                        w = next(y for y in H.edges[ei] if colour[y] < 0)
                        if not remove(w, cx, queue):
                            return False
        return True

    def undo(mark: int):
        while len(trail) > mark:
            kind, i, old = trail.pop()
            if kind == 0:
                domain[i] = old
            elif kind == 1:
                colour[i] = -1
                state["used"] = old
                state["left"] += 1
            else:
                ncol[i], mono[i] = divmod(old, 64)
                mono[i] -= 2

    def solve() -> bool:
        nonlocal nodes
        if state["left"] == 0:
            return True
        nodes += 1
        if nodes > budget:
            raise ResourceError("hypergraph colouring search exceeded its budget", nodes=nodes)
        v = min((x for x in range(n) if colour[x] < 0), key=lambda x: (domain[x].bit_count(), order_key[x], x))
        dom, used = domain[v], state["used"]
        choices = [c for c in range(k) if dom >> c & 1 and used >> c & 1]
        fresh = dom & ~used
        if fresh:
            choices.append((fresh & -fresh).bit_length() - 1)
        for c in choices:
            mark = len(trail)
            if assign(v, c) and solve():
                return True
            undo(mark)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 1000))
    try:
        return list(colour) if solve() else None
    finally:
        sys.setrecursionlimit(limit)


def weak_colouring(H: Hypergraph, k: int, *, max_vertices: int = MAX_COLOURING_VERTICES, node_budget: int = NODE_BUDGET):
    """A k-colouring (colours 1..k) with no monochromatic edge, or None."""
    if H.vertex_count > max_vertices:
        raise ResourceError(f"{H.vertex_count} vertices exceeds the colouring budget {max_vertices}")
    res = _colour_search(H, k, node_budget)
    return None if res is None else [c + 1 for c in res]


def hypergraph_chromatic(H: Hypergraph, *, max_vertices: int = MAX_COLOURING_VERTICES, node_budget: int = NODE_BUDGET) -> int:
    """Exact weak chromatic number."""
    if H.vertex_count > max_vertices:
        raise ResourceError(f"{H.vertex_count} vertices exceeds the colouring budget {max_vertices}")
    if H.vertex_count == 0:
        return 0
    k = 1
    while _colour_search(H, k, node_budget) is None:
        k += 1
    return k


def is_proper_weak_colouring(H: Hypergraph, colouring: Sequence[int]) -> bool:
    return all(len({colouring[v] for v in e}) > 1 for e in H.edges)


# ---------------------------------------------------------------- generation


def _closes_short_cycle(inc: list[list[int]], edges: list[tuple[int, ...]], F: tuple[int, ...], g: int) -> bool:
    """Would adding F create a cycle of length < g?

    A cycle through F of length l is a path of l-1 edge-hops between two
    distinct vertices of F.
    """
    if g <= 2:
        return False
    members = set(F)
    max_hops = g - 2
    for x in F:
        dist = {x: 0}
        seen_edges = set()
        queue = deque([x])
        while queue:
            y = queue.popleft()
            d = dist[y]
            if d == max_hops:
                continue
            for ei in inc[y]:
                if ei in seen_edges:
                    continue
                seen_edges.add(ei)
                for z in edges[ei]:
                    if z not in dist:
                        if z in members:
                            return True
                        dist[z] = d + 1
                        queue.append(z)
    return False


def _random_high_girth(r: int, g: int, N: int, rng: random.Random, tries: int) -> Hypergraph:
    edges: list[tuple[int, ...]] = []
    inc: list[list[int]] = [[] for _ in range(N)]
    present = set()
    if r == 2 or math.comb(N, r) <= 4 * tries:
        candidates = [tuple(c) for c in _combinations(N, r)]
        rng.shuffle(candidates)
    else:
        candidates = [tuple(sorted(rng.sample(range(N), r))) for _ in range(tries)]
    for F in candidates:
        if F in present:
            continue
        if _closes_short_cycle(inc, edges, F, g):
            continue
        present.add(F)
        for v in F:
            inc[v].append(len(edges))
        edges.append(F)
    return Hypergraph(N, tuple(edges))


def _combinations(N: int, r: int):
    from itertools import combinations

    return combinations(range(N), r)


def generate_hypergraph(
    r: int,
    k: int,
    g: int,
    seed: int = 0,
    *,
    max_attempts: int = 200,
    max_vertices: int = MAX_COLOURING_VERTICES,
    start_vertices: int | None = None,
) -> Hypergraph:
    """An r-uniform hypergraph with girth >= g and weak chromatic number >= k+1.

    Random r-sets are offered in random order and each is discarded if it
    would close a cycle shorter than g (for g >= 3 this keeps pairwise edge
    intersections <= 1).  The result must then fail to be k-colourable; both
    properties are re-verified exactly before returning.  Attempt ``a`` uses
    seed ``seed + a`` and one more vertex every few attempts.
    """
    if r < 2:
        raise ParameterError("uniformity must be >= 2")
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k == 1:
        H = Hypergraph(r, (tuple(range(r)),), {"seed": seed, "attempts": 0})
        return H
    N = start_vertices if start_vertices is not None else max(r + 1, r * k + 1)
    per_size = 5
    for a in range(max_attempts):
        n_vertices = N + a // per_size
        if n_vertices > max_vertices:
            break
        rng = random.Random(seed + a)
        H = _random_high_girth(r, g, n_vertices, rng, tries=40 * n_vertices)
        if not H.edges:
            continue
        try:
            if weak_colouring(H, k, max_vertices=max_vertices) is not None:
                continue
        except ResourceError:
            continue
        gi = hypergraph_girth(H)
        chi = hypergraph_chromatic(H, max_vertices=max_vertices)
        if gi < g or chi < k + 1:
            raise InvariantViolation("generated hypergraph failed verification")
        meta = {"seed": seed + a, "attempts": a, "girth": gi, "chromatic": chi, "r": r, "k": k, "g": g}
        return Hypergraph(H.vertex_count, H.edges, meta)
    raise ResourceError(
        f"no {r}-uniform hypergraph with girth >= {g} and chromatic number >= {k + 1} "
        f"found within {max_attempts} attempts / {max_vertices} vertices"
    )
