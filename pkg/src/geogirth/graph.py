"""Finite simple graphs: girth, cycle counting, blow-ups, homomorphisms, I/O."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import ParameterError, ResourceError
from .report import Report

INF = math.inf

#: Longest cycle length count_cycles_upto will enumerate by default.
MAX_CYCLE_LENGTH = 12


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Adjacency is kept as sorted neighbour tuples plus one integer bitset per
    vertex.  ``labels`` holds optional per-vertex payloads; ``parts`` maps each
    vertex to a base-vertex id when the graph lives inside a blow-up.
    """

    __slots__ = ("n", "_adj", "_bits", "_edges", "labels", "parts")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        labels: Sequence[Any] | None = None,
        parts: Sequence[int] | None = None,
    ):
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self._adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._bits = tuple(sum(1 << w for w in s) for s in nbrs)
        self._edges = tuple((u, v) for u in range(n) for v in self._adj[u] if u < v)
        if labels is not None and len(labels) != n:
            raise ParameterError("labels must have one entry per vertex")
        if parts is not None and len(parts) != n:
            raise ParameterError("parts must have one entry per vertex")
        self.labels = tuple(labels) if labels is not None else None
        self.parts = tuple(parts) if parts is not None else None

    # queries
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(i, j)`` with ``i < j``, sorted."""
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_bits(self, v: int) -> int:
        return self._bits[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._bits[u] >> v & 1)

    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"

    def with_labels(self, labels=None, parts=None) -> Graph:
        return Graph(self.n, self._edges, labels=labels, parts=parts)


# ---------------------------------------------------------------- girth


@dataclass(frozen=True)
class GirthReport:
    girth: float  # int, or math.inf for forests
    witness: tuple[int, ...] = ()


def _tree_path(parent: list[int], x: int) -> list[int]:
    path = [x]
    while parent[x] >= 0:
        x = parent[x]
        path.append(x)
    return path[::-1]


def girth(g: Graph, upto: float = INF) -> GirthReport:
    """Exact girth by breadth-first search from every vertex.

    With ``upto`` set, the search stops early once it is clear no cycle of
    length ``<= upto`` exists and reports ``inf`` in that case.
    """
    adj = g.adjacency()
    best = INF if upto == INF else upto + 1
    witness: tuple[int, ...] = ()
    dist = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if not adj[s]:
            continue
        touched = [s]
        dist[s] = 0
        parent[s] = -1
        queue = deque([s])
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if 2 * dx + 1 >= best:
                break
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dx + 1
                    parent[y] = x
                    touched.append(y)
                    queue.append(y)
                elif y != parent[x]:
                    length = dx + dist[y] + 1
                    if length < best:
                        px, py = _tree_path(parent, x), _tree_path(parent, y)
                        i = 0
                        while i + 1 < min(len(px), len(py)) and px[i + 1] == py[i + 1]:
                            i += 1
                        cyc = px[i:] + py[i + 1 :][::-1]
                        best = len(cyc)
                        witness = tuple(cyc)
        for v in touched:
            dist[v] = -1
    if not witness:
        return GirthReport(INF, ())
    return GirthReport(best, witness)


def is_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    """True when ``cycle`` lists >= 3 distinct vertices forming a closed walk in ``g``."""
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % k]) for i in range(k))


def count_cycles_upto(g: Graph, max_len: int, *, max_allowed: int = MAX_CYCLE_LENGTH) -> dict[int, int]:
    """Count undirected simple cycles of each length ``3..max_len``.

    Every cycle is counted once: enumeration starts at the cycle's smallest
    vertex and keeps one of its two orientations.
    """
    if max_len > max_allowed:
        raise ResourceError(f"cycle length {max_len} exceeds budget {max_allowed}", limit=max_allowed)
    counts = {ell: 0 for ell in range(3, max_len + 1)}
    if max_len < 3:
        return counts
    adj = g.adjacency()
    bits = [g.neighbor_bits(v) for v in range(g.n)]

    for s in range(g.n):
        s_bits = bits[s]
        stack = [(s, 1 << s, 1, None)]
        while stack:
            x, seen, depth, first = stack.pop()
            if depth >= 3 and s_bits >> x & 1 and first < x:
                counts[depth] += 1
            if depth == max_len:
                continue
            for y in adj[x]:
                if y > s and not seen >> y & 1:
                    stack.append((y, seen | 1 << y, depth + 1, y if first is None else first))
    return counts


def find_lex_least_cycle(g: Graph, length: int, start: int = 0, adj=None) -> tuple[int, ...] | None:
    """Lexicographically least cycle of exactly ``length`` vertices.

    Cycles are written from their smallest vertex in the orientation whose
    second vertex is smaller than the last.  Only cycles whose smallest vertex
    is ``>= start`` are considered.  ``adj`` may be a list of neighbour
    collections overriding ``g`` (used by the pruning loop).
    """
    if adj is None:
        adj = g.adjacency()
    n = len(adj)
    for v0 in range(start, n):
        if len(adj[v0]) < 2:
            continue
        # distances to v0 inside the subgraph of vertices >= v0, capped
        dist = {v0: 0}
        frontier = [v0]
        d = 0
        while frontier and d < length // 2 + 1:
            d += 1
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y > v0 and y not in dist:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
        path = [v0]
        on_path = {v0}
        found = _extend(adj, v0, path, on_path, dist, length)
        if found is not None:
            return found
    return None


def _extend(adj, v0, path, on_path, dist, length):
    x = path[-1]
    k = len(path)
    if k == length:
        if v0 in adj[x] and path[1] < x:
            return tuple(path)
        return None
    remaining = length - k  # vertices still to add; the last one must touch v0
    for y in sorted(adj[x]):
        if y <= v0 or y in on_path:
            continue
        dy = dist.get(y)
        if dy is None or dy > remaining:
            continue
        path.append(y)
        on_path.add(y)
        res = _extend(adj, v0, path, on_path, dist, length)
        path.pop()
        on_path.discard(y)
        if res is not None:
            return res
    return None


# ---------------------------------------------------------------- blow-ups and homomorphisms


def blowup_graph(g: Graph, m: int) -> Graph:
    """Replace each vertex by an independent m-set and each edge by K_{m,m}.

    Copy ``c`` of base vertex ``v`` gets id ``v * m + c``.
    """
    if m < 1:
        raise ParameterError("blow-up size m must be >= 1")
    edges = [
        (u * m + a, v * m + b) for u, v in g.edges() for a in range(m) for b in range(m)
    ]
    labels = [(v, c) for v in range(g.n) for c in range(m)]
    parts = [v for v in range(g.n) for _ in range(m)]
    return Graph(g.n * m, edges, labels=labels, parts=parts)


@dataclass
class Homomorphism:
    source: Graph
    target: Graph
    map: list[int]
    surjective: bool = False

    def preimage(self, v: int) -> list[int]:
        return [x for x, y in enumerate(self.map) if y == v]


def part_homomorphism(g: Graph, base: Graph) -> Homomorphism:
    """The collapse map of a blow-up subgraph onto its base graph."""
    if g.parts is None:
        raise ParameterError("graph carries no part labels")
    return Homomorphism(g, base, list(g.parts), surjective=True)


def verify_homomorphism(h: Homomorphism) -> Report:
    src, dst = h.source, h.target
    if len(h.map) != src.n:
        return Report("homomorphism", False, {"reason": "map is not total"}, None)
    for x, y in enumerate(h.map):
        if not 0 <= y < dst.n:
            return Report("homomorphism", False, {"reason": "image out of range"}, x)
    for a, b in src.edges():
        if not dst.has_edge(h.map[a], h.map[b]):
            return Report(
                "homomorphism",
                False,
                {"reason": "edge not preserved", "image": (h.map[a], h.map[b])},
                (a, b),
            )
    details: dict[str, Any] = {"edges_checked": src.num_edges}
    if h.surjective:
        missing = sorted(set(range(dst.n)) - set(h.map))
        details["surjective"] = not missing
        if missing:
            return Report("homomorphism", False, {**details, "reason": "not surjective"}, missing[0])
    return Report("homomorphism", True, details)


# ---------------------------------------------------------------- manipulations


def remove_edge(g: Graph, u: int, v: int) -> Graph:
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ParameterError(f"vertex out of range: ({u}, {v})")
    e = (min(u, v), max(u, v))
    return Graph(g.n, [f for f in g.edges() if f != e], labels=g.labels, parts=g.parts)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Induced subgraph, relabelled by ascending original id."""
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < g.n:
            raise ParameterError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[a], index[b]) for a, b in g.edges() if a in index and b in index]
    labels = [g.labels[v] for v in keep] if g.labels is not None else None
    parts = [g.parts[v] for v in keep] if g.parts is not None else None
    return Graph(len(keep), edges, labels=labels, parts=parts)


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


# ---------------------------------------------------------------- standard graphs


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def moser_spindle() -> Graph:
    # two rhombi of equilateral triangles sharing vertex 0, tips joined
    return Graph(7, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (4, 5), (4, 6), (5, 6), (3, 6)])


# ---------------------------------------------------------------- serialization


def to_edge_list(g: Graph) -> str:
    return "".join(f"{i} {j}\n" for i, j in g.edges())


def from_edge_list(text: str, n: int | None = None) -> Graph:
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        a, b = line.split()[:2]
        edges.append((int(a), int(b)))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)


def to_json_dict(g: Graph, **extra) -> dict[str, Any]:
    out: dict[str, Any] = dict(extra)
    out["n"] = g.n
    out["edges"] = [list(e) for e in g.edges()]
    if g.parts is not None:
        parts: dict[str, list[int]] = {}
        for v, p in enumerate(g.parts):
            parts.setdefault(str(p), []).append(v)
        out["parts"] = parts
    return out


def from_json_dict(data: dict[str, Any]) -> Graph:
    n = data.get("n")
    if n is None:
        n = len(data["vertices"])
    parts = None
    if "parts" in data:
        parts = [0] * n
        for p, members in data["parts"].items():
            for v in members:
                parts[v] = int(p)
    labels = data.get("vertices")
    return Graph(n, [tuple(e) for e in data["edges"]], labels=labels, parts=parts)


def dumps(g: Graph, **extra) -> str:
    return json.dumps(to_json_dict(g, **extra), sort_keys=True)


def load(path: str | Path) -> Graph:
    """Read a graph from JSON (``.json``) or an ``i j`` edge list."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return from_json_dict(json.loads(text))
    return from_edge_list(text)
