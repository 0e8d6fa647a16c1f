"""Command-line entry point.

Exit status: 0 when every assertion holds, 1 on a soundness violation (a
measurement contradicting a proven bound), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import available_kinds, multiplicity_bounds, structural_bounds
from .determinacy import FiniteRelationSet, all_leaf_selections, certify_compatibility, forest_determinacy_check
from .dynamics import NetworkSystem, parse_coupling, validate_dynamics_bounds
from .eigen import ConvergenceError
from .forest import STRONG, WEAK, SearchBudget, best_forest, forest_value, greedy_forest
from .graph import Graph, GraphError, induced
from .graphio import parse_graph
from .homology import (
    CycleError,
    cycle_forest_bound,
    fundamental_cycle_basis,
    homology_dims,
    search_cycle_forest,
)
from .spectral import KINDS, SpectralError, build_matrix, exact_multiplicity, exact_refinement, spectrum

log = logging.getLogger("forestbound")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
MANIFESTS = ("families.txt", "manifest.txt")
GRAPH_SUFFIXES = (".txt", ".edges", ".edgelist", ".adj", ".el")


class UsageError(Exception):
    pass


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _clean(o):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(o, float) and not math.isfinite(o):
        return None if math.isnan(o) else ("inf" if o > 0 else "-inf")
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, default=_json_default)


def _budget(args) -> SearchBudget:
    mode = "heuristic" if getattr(args, "heuristic", False) else "exact"
    return SearchBudget(node_limit=args.node_limit, time_limit=args.time_limit, mode=mode)


def _kinds(arg: str) -> list[str]:
    if arg == "all":
        return list(KINDS)
    if arg not in KINDS:
        raise UsageError(f"--kind must be 'all' or one of {', '.join(KINDS)}")
    return [arg]


# --- per-graph pipelines ---------------------------------------------------


@dataclass
class Outcome:
    report: dict
    sound: bool = True
    csv_rows: list[dict] = field(default_factory=list)


def run_bounds(g: Graph, name: str, kinds: list[str], budget: SearchBudget, tau: float | None) -> Outcome:
    weak = best_forest(g, WEAK, budget)
    strong = best_forest(g, STRONG, budget)
    out = {"graph": name, "n": g.n, "m": g.m, "kinds": {}, "skipped": []}
    rows = []
    sound = True
    usable = set(available_kinds(g))
    for kind in kinds:
        if kind not in usable:
            out["skipped"].append(kind)
            continue
        rep = multiplicity_bounds(g, kind, budget, tau, name, weak, strong)
        out["kinds"][kind] = rep.to_json()
        sound &= rep.sound
        for r in rep.rows:
            rows.append({
                "graph": name,
                "kind": kind,
                "lambda": str(r.exact) if r.exact is not None else f"{r.value:.12g}",
                "mult": r.mult,
                "bound": r.applicable_bound,
                "tight": r.tight,
            })
    out["structural"] = [row.to_json() for row in structural_bounds(g, budget, tau)]
    sound &= all(r["holds"] for r in out["structural"])
    out["sound"] = sound
    return Outcome(out, sound, rows)


def run_forest(g: Graph, name: str, mode: str, budget: SearchBudget) -> Outcome:
    cert = best_forest(g, mode, budget)
    rep = {"graph": name, "certificate": cert.to_json()}
    if budget.mode == "heuristic":
        rep["greedy_bound"] = forest_value(g, greedy_forest(g, mode), mode)
    return Outcome(rep)


def run_cycles(g: Graph, name: str, budget: SearchBudget, list_basis: bool = True,
               chosen: list[int] | None = None, search: bool = True) -> Outcome:
    h0, h1 = homology_dims(g)
    basis = fundamental_cycle_basis(g)
    rep: dict = {"graph": name, "h0": h0, "h1": h1, "basis_size": len(basis)}
    sound = len(basis) == h1
    if list_basis:
        rep["basis"] = [c.to_json() for c in basis]
    if chosen is not None:
        try:
            rep["certificate"] = cycle_forest_bound(g, [basis[i] for i in chosen]).to_json()
        except (CycleError, IndexError) as exc:
            rep["certificate_error"] = str(exc)
    if search:
        best = search_cycle_forest(g, budget)
        rep["search"] = None if best is None else best.to_json()
        if best is not None:
            sound &= best.bound <= h0 + h1 - 1
    rep["sound"] = sound
    return Outcome(rep, sound)


def _pipeline(task: tuple) -> tuple[str, Outcome | None, str | None]:
    name, source, sub, opts = task
    try:
        g = parse_graph(source)
        budget = SearchBudget(opts["node_limit"], opts["time_limit"], opts["search_mode"])
        if sub == "bounds":
            res = run_bounds(g, name, opts["kinds"], budget, opts["tau"])
        elif sub == "forest":
            res = run_forest(g, name, opts["mode"], budget)
        elif sub == "cycles":
            res = run_cycles(g, name, budget, list_basis=False)
        else:
            raise UsageError(f"corpus cannot run {sub!r}")
        return name, res, None
    except (GraphError, SpectralError, CycleError, ConvergenceError, OSError, ValueError) as exc:
        return name, None, f"{type(exc).__name__}: {exc}"


def collect_corpus(directory: str) -> list[tuple[str, str]]:
    """``(name, source)`` pairs: graph files plus family specs from a manifest."""
    if not os.path.isdir(directory):
        raise UsageError(f"{directory} is not a directory")
    items = []
    for fname in sorted(os.listdir(directory)):
        path = os.path.join(directory, fname)
        if not os.path.isfile(path):
            continue
        if fname in MANIFESTS:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    spec = line.split("#", 1)[0].strip()
                    if spec:
                        items.append((spec, spec))
        elif fname.endswith(GRAPH_SUFFIXES):
            items.append((fname, path))
    return sorted(items)


def run_corpus(directory: str, sub: str, opts: dict, out_dir: str | None = None,
               csv_path: str | None = None, jobs: int = 1) -> tuple[int, dict]:
    items = collect_corpus(directory)
    if not items:
        raise UsageError(f"no graphs found in {directory}")
    tasks = [(name, src, sub, opts) for name, src in items]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pipeline, tasks))
    else:
        results = [_pipeline(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    summary = {"graphs": len(results), "violations": [], "errors": {}}
    all_rows = []
    for name, res, err in results:
        if err is not None:
            summary["errors"][name] = err
            log.warning("%s: %s", name, err)
            continue
        if not res.sound:
            summary["violations"].append(name)
        all_rows.extend(res.csv_rows)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            safe = name.replace(os.sep, "_").replace(":", "_").replace(",", "_").replace("=", "_")
            with open(os.path.join(out_dir, f"{safe}.json"), "w", encoding="utf-8") as fh:
                fh.write(dumps(res.report))
    if csv_path and all_rows:
        write_csv(csv_path, all_rows)
    summary["rows"] = len(all_rows)
    if summary["violations"]:
        code = EXIT_VIOLATION
    elif summary["errors"]:
        code = EXIT_USAGE
    else:
        code = EXIT_OK
    return code, summary


def write_csv(path: str, rows: list[dict]) -> None:
    cols = ["graph", "kind", "lambda", "mult", "bound", "tight"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)


# --- subcommands -----------------------------------------------------------


def cmd_spectrum(args) -> int:
    g = parse_graph(args.graph)
    rep = spectrum(build_matrix(g, args.kind), args.tau)
    rep.exact_entries = exact_refinement(g, rep)
    out = rep.to_json()
    if args.exact:
        out["requested"] = {}
        for text in args.exact:
            lam = Fraction(text.split("=", 1)[-1])
            out["requested"][str(lam)] = exact_multiplicity(g, args.kind, lam)
    emit(args, out)
    return EXIT_OK


def cmd_forest(args) -> int:
    g = parse_graph(args.graph)
    res = run_forest(g, args.graph, args.mode, _budget(args))
    if args.emit_certificate:
        with open(args.emit_certificate, "w", encoding="utf-8") as fh:
            fh.write(dumps(res.report["certificate"]))
    emit(args, res.report)
    return EXIT_OK


def _opts(args) -> dict:
    return {
        "node_limit": args.node_limit,
        "time_limit": args.time_limit,
        "search_mode": "heuristic" if getattr(args, "heuristic", False) else "exact",
        "kinds": _kinds(getattr(args, "kind", "all")),
        "tau": getattr(args, "tau", None),
        "mode": getattr(args, "mode", WEAK),
    }


def cmd_bounds(args) -> int:
    if args.corpus:
        code, summary = run_corpus(args.corpus, "bounds", _opts(args), args.out, args.csv, args.jobs)
        emit(args, summary)
        return code
    if not args.graph:
        raise UsageError("bounds needs a graph or --corpus")
    g = parse_graph(args.graph)
    res = run_bounds(g, args.graph, _kinds(args.kind), _budget(args), args.tau)
    if args.csv:
        write_csv(args.csv, res.csv_rows)
    emit(args, res.report)
    return EXIT_OK if res.sound else EXIT_VIOLATION


def cmd_cycles(args) -> int:
    g = parse_graph(args.graph)
    chosen = None
    if args.certificate:
        text = args.certificate
        if os.path.isfile(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        chosen = [int(i) for i in json.loads(text)]
    res = run_cycles(g, args.graph, _budget(args), args.list_basis, chosen, args.search)
    emit(args, res.report)
    if "certificate_error" in res.report:
        return EXIT_USAGE
    return EXIT_OK if res.sound else EXIT_VIOLATION


def cmd_dynamics(args) -> int:
    g = parse_graph(args.graph)
    coupling = parse_coupling(args.coupling)
    if args.omega in (None, "zero"):
        omega = np.zeros(g.n)
    else:
        with open(args.omega, encoding="utf-8") as fh:
            omega = np.array([float(t) for t in fh.read().split()])
    sys_ = NetworkSystem.uniform(g, coupling, omega)
    rep = validate_dynamics_bounds(sys_, _budget(args), args.starts, args.seed)
    out = {"graph": args.graph, "coupling": coupling.spec(), "space": sys_.space,
           "fiber_bound": sys_.fiber_bound, "seed": args.seed, "starts": args.starts, **rep.to_json()}
    emit(args, out)
    return EXIT_OK


def _parse_vertices(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(t) for t in text.replace(",", " ").split()]


def cmd_oracle(args) -> int:
    g = parse_graph(args.graph)
    with open(args.relation, encoding="utf-8") as fh:
        x = FiniteRelationSet.loads(fh.read())
    cert = certify_compatibility(x, g)
    out = {"graph": args.graph, "points": len(x.points), "certificate": cert.to_json()}
    ok = True
    forest = _parse_vertices(args.forest)
    if forest is not None:
        f = induced(g, forest)
        leaves = _parse_vertices(args.leaves)
        selections = [tuple(leaves)] if leaves is not None else all_leaf_selections(f)
        checks = []
        for sel in selections:
            chk = forest_determinacy_check(x, g, f, sel, strong=args.strong, certificate=cert)
            checks.append({"leaves": list(sel), **chk.to_json()})
            ok &= chk.passed
        out["checks"] = checks
    out["passed"] = ok
    emit(args, out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_corpus(args) -> int:
    code, summary = run_corpus(args.directory, args.run, _opts(args), args.out, args.csv, args.jobs)
    emit(args, summary)
    return code


def emit(args, obj) -> None:
    text = dumps(obj)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _common(p: argparse.ArgumentParser, search: bool = True) -> None:
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    if search:
        p.add_argument("--time-limit", type=float, default=60.0, help="search time limit in seconds")
        p.add_argument("--node-limit", type=int, default=5_000_000, help="search node limit")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--exact", dest="heuristic", action="store_false", help="exact search (default)")
        g.add_argument("--heuristic", dest="heuristic", action="store_true", help="greedy + local search")
        p.set_defaults(heuristic=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forestbound", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and multiplicities of a graph matrix")
    p.add_argument("graph", help="edge list / adjacency file or family spec like star:10")
    p.add_argument("--kind", choices=KINDS, default="laplacian")
    p.add_argument("--tau", type=float, default=None, help="clustering tolerance")
    p.add_argument("--exact", action="append", metavar="LAMBDA=P/Q",
                   help="exact multiplicity of a rational eigenvalue (repeatable)")
    _common(p, search=False)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("forest", help="best induced forest certificate")
    p.add_argument("graph")
    p.add_argument("--mode", choices=(WEAK, STRONG), default=WEAK)
    p.add_argument("--emit-certificate", metavar="PATH")
    _common(p)
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("bounds", help="multiplicity bounds against actual spectra")
    p.add_argument("graph", nargs="?")
    p.add_argument("--kind", default="all")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--corpus", metavar="DIR")
    p.add_argument("--out", metavar="DIR", help="per-graph JSON directory (corpus mode)")
    p.add_argument("--csv", metavar="PATH", help="aggregate CSV")
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cycles", help="homology, cycle basis and cycle-forest bound")
    p.add_argument("graph")
    p.add_argument("--list-basis", action="store_true")
    p.add_argument("--certificate", metavar="JSON", help="basis indices as JSON list (or a file)")
    p.add_argument("--search", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("dynamics", help="equilibria of coupled oscillators against the bounds")
    p.add_argument("graph")
    p.add_argument("--coupling", default="sin:K=1")
    p.add_argument("--omega", default="zero", help="'zero' or a file of per-vertex frequencies")
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("oracle", help="brute-force determinacy certificate for a finite relation")
    p.add_argument("graph")
    p.add_argument("--relation", required=True, help="FiniteRelationSet JSON file")
    p.add_argument("--forest", help="vertices of an induced forest, comma separated")
    p.add_argument("--leaves", help="leaf selection; default tries every valid one")
    p.add_argument("--strong", action="store_true", help="allow isolated forest vertices")
    _common(p, search=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="run a subcommand over a directory of graphs")
    p.add_argument("directory")
    p.add_argument("--run", choices=("bounds", "forest", "cycles"), default="bounds")
    p.add_argument("--kind", default="all")
    p.add_argument("--mode", choices=(WEAK, STRONG), default=WEAK)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphError, SpectralError, CycleError, ConvergenceError, OSError, ValueError) as exc:
        sys.stderr.write(f"forestbound: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
