"""Exact constructions of high-girth geometric graphs with large chromatic number.

Submodules: signvec (balanced sign vectors, orthogonality graph, rank
certificate), geometry (exact symbolic embeddings), graph (graphs, girth,
blow-ups, homomorphisms), randboost and descartes (the two girth boosters),
hypergraph, solver (exact colouring) and cli.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .descartes import DescartesResult, color_transfer, descartes_boost
from .errors import BoostFailure, InvariantViolation, ParameterError, ResourceError, UnsupportedInputError
from .geometry import Embedding, SymbolicPoint
from .graph import Graph, Homomorphism, blowup_graph, girth, verify_homomorphism
from .hypergraph import Hypergraph, generate_hypergraph, hypergraph_chromatic, hypergraph_girth
from .randboost import BoostParams, boost_girth_random, prune_short_cycles, subsample_edges
from .report import Report
from .signvec import SignVector, build_orthogonality_graph, enumerate_vprime, frankl_wilson_certificate
from .solver import Colouring, exact_chromatic, verify_proper

__all__ = [
    "BoostFailure", "BoostParams", "Colouring", "DescartesResult", "Embedding", "Graph",
    "Homomorphism", "Hypergraph", "InvariantViolation", "ParameterError", "Report",
    "ResourceError", "SignVector", "SymbolicPoint", "UnsupportedInputError",
    "blowup_graph", "boost_girth_random", "build_orthogonality_graph", "color_transfer",
    "descartes_boost", "enumerate_vprime", "exact_chromatic", "frankl_wilson_certificate",
    "generate_hypergraph", "girth", "hypergraph_chromatic", "hypergraph_girth",
    "prune_short_cycles", "subsample_edges", "verify_homomorphism", "verify_proper",
]
