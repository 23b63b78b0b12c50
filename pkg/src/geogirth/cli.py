"""Command line: seeded, reproducible pipelines writing one directory per run.

Every command writes its artifacts plus ``manifest.json`` (sha256 of every
input and output file, parameters, seeds, verification summaries, tool
version and timing).  Exit status: 0 all checks passed, 1 a verification
failed, 2 parameter/resource/boost failure, 3 I/O error.

Budgets can be overridden with ``GEOGIRTH_BUDGET="nodes=...,vertices=...,..."``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from . import descartes as dsc
from . import geometry as geo
from . import graph as gr
from . import hypergraph as hg
from . import randboost as rb
from . import signvec as sv
from . import solver as sol
from .errors import BoostFailure, ParameterError, ResourceError
from .report import Report, _plain

BUDGET_ENV = "GEOGIRTH_BUDGET"
DEFAULT_BUDGET = {
    "nodes": 2_000_000,  # solver search nodes
    "vertices": dsc.MAX_VERTICES,  # largest Descartes output
    "hyper_vertices": hg.MAX_COLOURING_VERTICES,
    "verify_edges": 250_000,  # full blow-up orthogonality check cap
    "seconds": 600,  # time budget of the random doubling search
}

EXIT_OK, EXIT_FAILED, EXIT_ERROR, EXIT_IO = 0, 1, 2, 3


def budget() -> dict[str, int]:
    out = dict(DEFAULT_BUDGET)
    raw = os.environ.get(BUDGET_ENV, "").strip()
    if not raw:
        return out
    for item in raw.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in out:
            raise ParameterError(f"{BUDGET_ENV}: unknown key {key!r}")
        out[key] = int(val)
    return out


# ---------------------------------------------------------------- output plumbing


def canonical_json(obj: Any) -> bytes:
    return (json.dumps(_plain(obj), sort_keys=True, indent=1) + "\n").encode()


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Run:
    """Collects artifacts and reports, then writes the manifest."""

    def __init__(self, command: str, out: Path, params: dict, seeds: list[int] | None = None):
        self.command = command
        self.out = Path(out)
        self.params = params
        self.seeds = seeds or []
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.reports: list[Report] = []
        self.started = time.monotonic()
        self.timing: dict[str, float] = {}

    def add_input(self, path: str | Path) -> Path:
        p = Path(path)
        if not p.is_file():
            raise FileNotFoundError(f"input file not found: {p}")
        self.inputs[str(p)] = sha256_file(p)
        return p

    def write(self, name: str, obj: Any = None, *, raw: bytes | None = None) -> None:
        data = raw if raw is not None else canonical_json(obj)
        atomic_write(self.out / name, data)
        self.outputs[name] = hashlib.sha256(data).hexdigest()

    def check(self, rep: Report) -> Report:
        self.reports.append(rep)
        return rep

    def mark(self, label: str) -> None:
        self.timing[label] = round(time.monotonic() - self.started, 3)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def finish(self, extra: dict | None = None) -> int:
        self.mark("total")
        manifest = {
            "command": self.command,
            "parameters": self.params,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verification": [r.to_dict() for r in self.reports],
            "ok": self.ok,
            "version": __version__,
            "timing_seconds": self.timing,
        }
        if extra:
            manifest.update(extra)
        atomic_write(self.out / "manifest.json", canonical_json(manifest))
        return EXIT_OK if self.ok else EXIT_FAILED


# ---------------------------------------------------------------- inputs


_NAMED = {
    "petersen": gr.petersen_graph,
    "moser": gr.moser_spindle,
}


def named_graph(name: str) -> gr.Graph:
    """K<n>, C<n>, P<n>, petersen or moser."""
    low = name.lower()
    if low in _NAMED:
        return _NAMED[low]()
    m = re.fullmatch(r"([kcp])(\d+)", low)
    if not m:
        raise ParameterError(f"unknown graph name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"k": gr.complete_graph, "c": gr.cycle_graph, "p": gr.path_graph}[kind](n)


def read_graph(run: Run, path: str | None, name: str | None) -> gr.Graph:
    if path:
        return gr.load(run.add_input(path))
    if name:
        return named_graph(name)
    raise ParameterError("give an input graph file or --base NAME")


def read_json(run: Run, path: str) -> dict:
    return json.loads(run.add_input(path).read_text())


def read_embedding(run: Run, path: str) -> geo.Embedding:
    return geo.Embedding.from_json_dict(read_json(run, path))


# ---------------------------------------------------------------- commands


def cmd_construct(args) -> int:
    p = sv.check_p(args.p)
    b = budget()
    run = Run("construct", args.out, {"p": p, "m": args.m})
    G = sv.build_orthogonality_graph(p)
    emb = geo.rotate_family(G.labels, args.m)
    cert = sv.frankl_wilson_certificate(p)
    run.mark("build")
    run.write("graph.json", sv.graph_to_json_dict(G, p))
    run.write("embedding.json", emb.to_json_dict())
    run.write("certificate.json", cert.to_json_dict())

    blown_edges = G.num_edges * args.m * args.m
    if blown_edges <= b["verify_edges"]:
        rep = geo.verify_orthogonality(emb, gr.blowup_graph(G, args.m))
        rep.details["scope"] = "blow-up"
    else:
        # <v(j), u(j')> = <v, u> cos(...) so base orthogonality covers every copy
        rep = geo.verify_orthogonality(geo.rotate_family(G.labels, 1), G)
        rep.details["scope"] = "base"
    run.check(rep)
    run.check(
        Report(
            "certificate",
            cert.family_size == G.n and cert.chromatic_lower_bound * cert.independence_bound == cert.family_size,
            {"family_size": cert.family_size, "chromatic_lower_bound": cert.chromatic_lower_bound},
        )
    )
    run.mark("verify")
    return run.finish({"summary": {"vertices": G.n, "edges": G.num_edges, "points": len(emb)}})


def cmd_boost(args) -> int:
    b = budget()
    params = {"method": args.method, "g": args.g, "k": args.k, "seed": args.seed, "m": args.m, "q": args.q}
    run = Run("boost", args.out, params, [args.seed])
    base = read_graph(run, args.input, args.base)
    chi_oracle = lambda h: sol.chromatic_number(h, node_budget=b["nodes"])  # noqa: E731
    target = chi_oracle(base)

    if args.method == "random":
        try:
            if args.m:
                q = Fraction(args.q) if args.q else rb.desk_q(args.m, args.g)
                bp = rb.BoostParams(args.g, args.m, q, args.seed, args.max_retries)
                res = rb.boost_girth_random(base, bp, chi_oracle, target_chi=target)
            else:
                res = rb.boost_girth_doubling(
                    base, args.g, chi_oracle, seed=args.seed, max_retries=args.max_retries,
                    m_max=args.m_max, time_budget=b["seconds"],
                )
        except BoostFailure as exc:
            run.write("failure.json", {"message": str(exc), "attempts": exc.attempts})
            run.check(Report("boost", False, {"reason": "retries exhausted", "attempts": len(exc.attempts)}))
            run.finish()
            return EXIT_ERROR
        out = res.graph
        hom = gr.part_homomorphism(out, base)
        run.write("params.json", {**res.params.to_json_dict(), "retries": res.retries, "seed_used": res.seed_used})
        run.write("attempts.json", res.attempts)
        gi = gr.girth(out).girth
        run.check(Report("girth", gi > args.g, {"girth": gi, "required": f"> {args.g}"}))
    else:
        res = dsc.descartes_boost(base, args.g, args.k, args.seed, max_vertices=b["vertices"])
        out = res.gprime
        hom = res.hom
        run.write("trace.json", res.trace_json())
        gi = gr.girth(out).girth
        run.check(Report("girth", gi >= args.g, {"girth": gi, "required": f">= {args.g}"}))
    run.mark("construct")
    run.write("graph.json", gr.to_json_dict(out))
    run.write("homomorphism.json", {"map": hom.map, "surjective": hom.surjective, "target": gr.to_json_dict(base)})
    run.check(gr.verify_homomorphism(hom))
    chi_out, col = sol.exact_chromatic(out, node_budget=b["nodes"])
    run.check(Report("chromatic", chi_out == target, {"base": target, "output": chi_out}))
    run.write("colouring.json", col.to_json_dict())
    if args.method == "descartes" and chi_out <= res.k:
        c = dsc.color_transfer(res, col)
        run.check(
            Report(
                "colour-transfer",
                sol.verify_proper(base, c).ok and dsc.check_membership(res, col.assignment, c.assignment),
                {"colouring": c.assignment},
            )
        )
    run.mark("verify")
    return run.finish({"summary": {"vertices": out.n, "edges": out.num_edges, "girth": gi, "chi": chi_out}})


def cmd_convert(args) -> int:
    run = Run("convert", args.out, {"target": args.target, "blowup": args.blowup, "vertices": args.vertices})
    emb = read_embedding(run, args.embedding)
    G = read_graph(run, args.graph, None)
    if args.blowup > 1:
        G = gr.blowup_graph(G, args.blowup)
    if emb.common_squared_norm() is None or emb.kind != "orthogonality-sphere":
        raise ParameterError("conversion needs a spherical orthogonality embedding")
    if args.vertices is not None:
        keep = list(range(min(args.vertices, G.n)))
        G = gr.induced_subgraph(G, keep)
        emb = geo.Embedding({i: emb.points[i] for i in keep}, emb.ambient_dim, emb.kind)
    if set(emb.points) != set(range(G.n)):
        raise ParameterError("embedding ids do not match the graph's vertices")
    if args.target == "unit-distance":
        conv = geo.to_unit_distance(emb)
        run.check(geo.verify_unit_distance(conv, G))
    else:
        conv = geo.tensor_square(emb)
        run.check(geo.verify_diameter_property(conv, G))
    run.write("embedding.json", conv.to_json_dict())
    run.write("graph.json", gr.to_json_dict(G))
    return run.finish()


CHECKS = ("girth", "cycles", "orthogonality", "homomorphism", "proper-colouring", "supersaturation", "rank-argument")


def cmd_verify(args) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECKS:
            raise ParameterError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
    run = Run("verify", args.out, {"checks": checks, "max_len": args.max_len, "m_prime": args.m_prime, "p": args.p})
    G = read_graph(run, args.graph, args.base_name) if (args.graph or args.base_name) else None

    def need(x, what):
        if x is None:
            raise ParameterError(f"check needs {what}")
        return x

    for c in checks:
        if c == "girth":
            rep = gr.girth(need(G, "--graph"))
            run.check(Report("girth", True, {"girth": rep.girth, "witness": rep.witness}))
        elif c == "cycles":
            counts = gr.count_cycles_upto(need(G, "--graph"), args.max_len)
            run.check(Report("cycles", True, {"counts": counts}))
        elif c == "orthogonality":
            run.check(geo.verify_orthogonality(read_embedding(run, need(args.embedding, "--embedding")), need(G, "--graph")))
        elif c == "homomorphism":
            data = read_json(run, need(args.hom, "--hom"))
            target = gr.from_json_dict(data["target"])
            h = gr.Homomorphism(need(G, "--graph"), target, list(data["map"]), bool(data.get("surjective")))
            run.check(gr.verify_homomorphism(h))
        elif c == "proper-colouring":
            col = sol.Colouring.from_json_dict(read_json(run, need(args.colouring, "--colouring")))
            run.check(sol.verify_proper(need(G, "--graph"), col))
        elif c == "supersaturation":
            base = gr.load(run.add_input(need(args.target, "--target")))
            run.check(rb.check_supersaturation(need(G, "--graph"), base, need(args.m_prime, "--m-prime")))
        elif c == "rank-argument":
            if args.family:
                data = read_json(run, args.family)
                p = int(data["p"])
                S = [sv.SignVector.from_bitstring(s) for s in data["vectors"]]
            else:
                p = need(args.p, "--p or --family")
                S = sv.greedy_orthogonality_free(sv.enumerate_vprime(p))
            run.check(sv.verify_rank_argument(S, p))
    run.write("report.json", {"checks": [r.to_dict() for r in run.reports], "ok": run.ok})
    return run.finish()


def cmd_hypergraph(args) -> int:
    b = budget()
    run = Run("hypergraph", args.out, {"r": args.r, "k": args.k, "g": args.g}, [args.seed])
    H = hg.generate_hypergraph(args.r, args.k, args.g, args.seed, max_vertices=b["hyper_vertices"])
    run.write("hypergraph.json", H.to_json_dict())
    gi = hg.hypergraph_girth(H)
    chi = hg.hypergraph_chromatic(H, max_vertices=b["hyper_vertices"])
    run.check(Report("hypergraph-girth", gi >= args.g, {"girth": gi, "required": args.g}))
    run.check(Report("hypergraph-chromatic", chi >= args.k + 1, {"chromatic": chi, "required": args.k + 1}))
    return run.finish()


def cmd_solve(args) -> int:
    b = budget()
    run = Run("solve", args.out, {"mis": args.mis})
    G = read_graph(run, args.graph, args.base_name)
    chi, col = sol.exact_chromatic(G, node_budget=b["nodes"])
    run.write("colouring.json", col.to_json_dict())
    run.check(sol.verify_proper(G, col))
    summary: dict[str, Any] = {"chromatic_number": chi}
    if args.mis:
        ind = sol.max_independent_set(G, node_budget=b["nodes"])
        run.write("independent_set.json", {"size": ind.size, "vertices": ind.vertices, "exact": ind.exact})
        summary["independence_number"] = ind.size
    run.write("result.json", summary)
    return run.finish({"summary": summary})


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geogirth", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="orthogonality graph on V', rotation embedding, certificate")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    b = sub.add_parser("boost", help="raise girth while keeping the chromatic number")
    b.add_argument("input", nargs="?", help="graph file (.json or edge list)")
    b.add_argument("--base", help="named base graph instead of a file (K3, C5, petersen, moser)")
    b.add_argument("--method", choices=("random", "descartes"), default="random")
    b.add_argument("--g", type=int, required=True)
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--m", type=int, default=None, help="fixed blow-up size (random); default doubling search")
    b.add_argument("--m-max", type=int, default=256)
    b.add_argument("--q", default=None, help="keep probability as a fraction, e.g. 1/4")
    b.add_argument("--max-retries", type=int, default=20)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_boost)

    v = sub.add_parser("convert", help="unit-distance or diameter conversion")
    v.add_argument("--embedding", required=True)
    v.add_argument("--graph", required=True)
    v.add_argument("--target", choices=("unit-distance", "diameter"), required=True)
    v.add_argument("--blowup", type=int, default=1, help="blow the graph up to match a rotated embedding")
    v.add_argument("--vertices", type=int, default=None, help="restrict to the first N vertices")
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_convert)

    f = sub.add_parser("verify", help="run verification checks")
    f.add_argument("--checks", required=True, help=",".join(CHECKS))
    f.add_argument("--graph")
    f.add_argument("--base", dest="base_name")
    f.add_argument("--embedding")
    f.add_argument("--hom")
    f.add_argument("--colouring")
    f.add_argument("--target", help="base graph for supersaturation")
    f.add_argument("--m-prime", type=int)
    f.add_argument("--max-len", type=int, default=6)
    f.add_argument("--family")
    f.add_argument("--p", type=int)
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_verify)

    h = sub.add_parser("hypergraph", help="uniform hypergraph with high girth and chromatic number")
    h.add_argument("--r", type=int, required=True)
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--g", type=int, required=True)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--out", required=True)
    h.set_defaults(func=cmd_hypergraph)

    s = sub.add_parser("solve", help="exact chromatic number")
    s.add_argument("--graph")
    s.add_argument("--base", dest="base_name")
    s.add_argument("--mis", action="store_true", help="also compute the independence number")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, ResourceError, BoostFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
