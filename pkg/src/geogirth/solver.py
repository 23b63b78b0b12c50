"""Exact chromatic number, independence number and colouring checks.

The k-colourability kernel is a DSATUR-ordered backtracking search over
bitmask colour domains with forward checking, singleton propagation and
colour-symmetry breaking.  Before searching, vertices of degree < k are peeled
(they can always be coloured last) and the remaining core is split into
connected components.
"""

from __future__ import annotations

import sys
import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError, ResourceError
from .graph import Graph, connected_components, induced_subgraph
from .report import Report

#: Search-node budget per exact_chromatic call.
DEFAULT_NODE_BUDGET = 5_000_000
DEFAULT_MAX_VERTICES = 200


@dataclass
class Colouring:
    """Colours are ``1..k``; ``assignment[v]`` is the colour of vertex ``v``."""

    assignment: list[int]
    k: int

    def to_json_dict(self) -> dict:
        return {"k": self.k, "assignment": list(self.assignment)}

    @classmethod
    def from_json_dict(cls, data: dict) -> Colouring:
        return cls(list(data["assignment"]), int(data["k"]))

    @property
    def colours_used(self) -> int:
        return len(set(self.assignment))


def verify_proper(g: Graph, c: Colouring | Sequence[int]) -> Report:
    assignment = c.assignment if isinstance(c, Colouring) else list(c)
    k = c.k if isinstance(c, Colouring) else max(assignment, default=0)
    if len(assignment) != g.n:
        return Report("proper-colouring", False, {"reason": "colouring is not total"})
    for v, col in enumerate(assignment):
        if not 1 <= col <= k:
            return Report("proper-colouring", False, {"reason": "colour out of range"}, v)
    for a, b in g.edges():
        if assignment[a] == assignment[b]:
            return Report("proper-colouring", False, {"reason": "monochromatic edge"}, (a, b))
    return Report("proper-colouring", True, {"k": k, "colours_used": len(set(assignment))})


# ---------------------------------------------------------------- heuristics


def dsatur_greedy(g: Graph) -> list[int]:
    """Greedy DSATUR colouring (colours from 1); ties broken by degree then id."""
    n = g.n
    colour = [0] * n
    sat: list[set[int]] = [set() for _ in range(n)]
    uncoloured = set(range(n))
    while uncoloured:
        v = min(uncoloured, key=lambda x: (-len(sat[x]), -g.degree(x), x))
        c = 1
        while c in sat[v]:
            c += 1
        colour[v] = c
        uncoloured.discard(v)
        for w in g.neighbors(v):
            sat[w].add(c)
    return colour


def greedy_clique(g: Graph) -> list[int]:
    """A maximal clique grown greedily from each vertex; the largest is kept."""
    best: list[int] = []
    for s in range(g.n):
        clique = [s]
        cand = g.neighbor_bits(s)
        while cand:
            v = max(_iter_bits(cand), key=lambda x: ((g.neighbor_bits(x) & cand).bit_count(), -x))
            clique.append(v)
            cand &= g.neighbor_bits(v)
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# ---------------------------------------------------------------- k-colourability kernel


class _Budget:
    def __init__(self, nodes: int, deadline: float | None):
        self.nodes = nodes
        self.deadline = deadline
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.nodes:
            raise _OutOfBudget
        if self.deadline is not None and self.used & 1023 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget


class _OutOfBudget(Exception):
    pass


def _search_component(adj: list[list[int]], k: int, budget: _Budget) -> list[int] | None:
    """Colour a connected graph with colours 0..k-1, or prove it impossible."""
    n = len(adj)
    full = (1 << k) - 1
    domain = [full] * n
    colour = [-1] * n
    degree = [len(a) for a in adj]
    trail: list[tuple[int, int]] = []  # (vertex, old domain); vertex ~v means colour reset
    state = {"used": 0, "left": n}

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
            trail.append((~x, state["used"]))
            colour[x] = cx
            state["used"] |= 1 << cx
            state["left"] -= 1
            bit = 1 << cx
            for y in adj[x]:
                dy = domain[y]
                if colour[y] < 0 and dy & bit:
                    trail.append((y, dy))
                    dy &= ~bit
                    domain[y] = dy
                    if not dy:
                        return False
                    if dy & (dy - 1) == 0:
                        queue.append((y, dy.bit_length() - 1))
                elif colour[y] == cx:
                    return False
        return True

    def undo(mark: int):
        while len(trail) > mark:
            x, old = trail.pop()
            if x < 0:
                x = ~x
                colour[x] = -1
                state["used"] = old
                state["left"] += 1
            else:
                domain[x] = old

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                kv = (domain[v].bit_count(), -degree[v])
                if key is None or kv < key:
                    best, key = v, kv
                    if kv[0] == 1:
                        break
        return best

    def solve() -> bool:
        if state["left"] == 0:
            return True
        budget.tick()
        v = pick()
        dom = domain[v]
        used = state["used"]
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
        if solve():
            return colour
        return None
    finally:
        sys.setrecursionlimit(limit)


def k_colouring(g: Graph, k: int, *, node_budget: int = DEFAULT_NODE_BUDGET, deadline: float | None = None) -> list[int] | None:
    """A proper colouring with colours ``1..k`` or None if none exists.

    Raises ResourceError when the node budget or deadline runs out.
    """
    if k < 0:
        raise ParameterError("k must be non-negative")
    if g.n == 0:
        return []
    if k == 0:
        return None
    # peel vertices of degree < k; they are coloured in reverse peel order
    deg = [g.degree(v) for v in range(g.n)]
    removed = [False] * g.n
    order = []
    stack = [v for v in range(g.n) if deg[v] < k]
    for v in stack:
        removed[v] = True
    while stack:
        v = stack.pop()
        order.append(v)
        for w in g.neighbors(v):
            if not removed[w]:
                deg[w] -= 1
                if deg[w] < k:
                    removed[w] = True
                    stack.append(w)
    core = [v for v in range(g.n) if not removed[v]]
    colour = [0] * g.n
    budget = _Budget(node_budget, deadline)
    if core:
        sub = induced_subgraph(g, core)
        for comp in connected_components(sub):
            index = {v: i for i, v in enumerate(comp)}
            adj = [[index[w] for w in sub.neighbors(v)] for v in comp]
            try:
                res = _search_component(adj, k, budget)
            except _OutOfBudget:
                raise ResourceError(
                    f"k-colouring search for k={k} exceeded its budget", nodes=budget.used
                ) from None
            if res is None:
                return None
            for v, c in zip(comp, res):
                colour[core[v]] = c + 1
    for v in reversed(order):
        taken = {colour[w] for w in g.neighbors(v)}
        colour[v] = next(c for c in range(1, k + 1) if c not in taken)
    return colour


def exact_chromatic(
    g: Graph,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    timeout: float | None = None,
    max_vertices: int | None = None,
) -> tuple[int, Colouring]:
    """Exact chromatic number with a witness colouring using exactly chi colours.

    Bounds: a greedy clique from below, DSATUR from above; k is searched
    upward from the lower bound.  On budget exhaustion a ResourceError with
    ``bounds={"lower": ..., "upper": ...}`` is raised.
    """
    if max_vertices is not None and g.n > max_vertices:
        raise ResourceError(f"{g.n} vertices exceeds the solver limit {max_vertices}", lower=0, upper=g.n)
    if g.n == 0:
        return 0, Colouring([], 0)
    greedy = dsatur_greedy(g)
    upper = max(greedy)
    lower = max(len(greedy_clique(g)), 1)
    best = greedy
    deadline = time.monotonic() + timeout if timeout is not None else None
    k = lower
    while k < upper:
        try:
            res = k_colouring(g, k, node_budget=node_budget, deadline=deadline)
        except ResourceError as exc:
            raise ResourceError(str(exc), lower=k, upper=upper) from None
        if res is not None:
            best, upper = res, k
            break
        k += 1
    chi = upper
    return chi, Colouring(_normalise(best), chi)


def _normalise(assignment: list[int]) -> list[int]:
    """Relabel colours 1..c in order of first appearance."""
    relabel: dict[int, int] = {}
    out = []
    for c in assignment:
        if c not in relabel:
            relabel[c] = len(relabel) + 1
        out.append(relabel[c])
    return out


def chromatic_number(g: Graph, **kw) -> int:
    return exact_chromatic(g, **kw)[0]


# ---------------------------------------------------------------- independence number


@dataclass
class IndependentSet:
    size: int
    vertices: list[int]
    exact: bool


def max_independent_set(g: Graph, *, node_budget: int = DEFAULT_NODE_BUDGET) -> IndependentSet:
    """Exact independence number as a maximum clique of the complement.

    Branch and bound with a greedy-colouring bound.  If the budget runs out
    the best set found so far is returned with ``exact=False``.
    """
    n = g.n
    full = (1 << n) - 1
    comp = [full & ~g.neighbor_bits(v) & ~(1 << v) for v in range(n)]
    best: list[int] = []
    nodes = 0

    def colour_bound(cand: int) -> list[tuple[int, int]]:
        # greedy colour classes over the candidate set, returned in ascending bound
        order = []
        colour_no = 0
        rest = cand
        while rest:
            colour_no += 1
            q = rest
            while q:
                low = q & -q
                v = low.bit_length() - 1
                rest &= ~low
                q &= ~low & ~comp[v]
                order.append((v, colour_no))
        return order

    def expand(clique: list[int], cand: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise _OutOfBudget
        order = colour_bound(cand)
        for v, bound in reversed(order):
            if len(clique) + bound <= len(best):
                return
            clique.append(v)
            new = cand & comp[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    try:
        if n:
            expand([], full)
        return IndependentSet(len(best), sorted(best), True)
    except _OutOfBudget:
        return IndependentSet(len(best), sorted(best), False)


# ---------------------------------------------------------------- projection


def majority_project(gb: Graph, base: Graph, c: Colouring | Sequence[int]) -> Colouring:
    """Colour each base vertex with the most frequent colour in its part.

    Ties go to the smallest colour id.
    """
    if gb.parts is None:
        raise ParameterError("graph carries no part labels")
    assignment = c.assignment if isinstance(c, Colouring) else list(c)
    k = c.k if isinstance(c, Colouring) else max(assignment, default=0)
    counts: list[Counter] = [Counter() for _ in range(base.n)]
    for v, p in enumerate(gb.parts):
        if not 0 <= p < base.n:
            raise ParameterError(f"part label {p} out of range")
        counts[p][assignment[v]] += 1
    out = []
    for cnt in counts:
        if not cnt:
            out.append(1)
            continue
        top = max(cnt.values())
        out.append(min(col for col, x in cnt.items() if x == top))
    return Colouring(out, k)


def is_k_colourable(g: Graph, k: int, **kw) -> bool:
    return k_colouring(g, k, **kw) is not None


def relabel_colouring(assignment: Iterable[int], perm: Sequence[int]) -> list[int]:
    """Apply a colour permutation given as a list with ``perm[c-1]`` the new colour."""
    return [perm[c - 1] for c in assignment]
