"""Shared oracles and the acceptance summary hook."""

from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import settings

from geogirth.graph import Graph

# exact oracles have heavy-tailed running times; pin the profile for reproducibility
settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")

_ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def brute_chromatic(g: Graph) -> int:
    """Smallest k admitting a proper colouring, by exhaustive product search."""
    edges = g.edges()
    for k in range(0 if g.n == 0 else 1, g.n + 1):
        for col in itertools.product(range(k), repeat=g.n):
            if all(col[a] != col[b] for a, b in edges):
                return k
    return g.n


def brute_alpha(g: Graph) -> int:
    best = 0
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if len(vs) > best and all(not g.has_edge(a, b) for a, b in itertools.combinations(vs, 2)):
            best = len(vs)
    return best


def nx_cycle_counts(g: Graph, max_len: int) -> dict[int, int]:
    counts = {ell: 0 for ell in range(3, max_len + 1)}
    for cyc in nx.simple_cycles(to_nx(g), length_bound=max_len):
        if len(cyc) >= 3:
            counts[len(cyc)] += 1
    return counts


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        num, text = marker
        _ACCEPTANCE.setdefault(num, []).append((report.passed, text))


@pytest.fixture
def criterion(request):
    """Tag an acceptance test: ``criterion(n, text)``."""

    def tag(num: int, text: str):
        request.node.user_properties.append(("criterion", (num, text)))

    return tag


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[num]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        text = "; ".join(f"{t} [{'ok' if ok else 'failed'}]" if len(parts) > 1 else t for ok, t in parts)
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {text}")
