"""Command-line front end. Every subcommand prints one JSON report on stdout.

Exit codes: 0 success, 2 invalid input, 3 budget or cap exceeded, 64 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import Field
from .budget import Deadline
from .errors import BudgetExceeded, InvalidInput
from .graphs import (
    ColoredGraph,
    Graph,
    Hypergraph,
    complement,
    gen_complete,
    gen_cycle,
    gen_empty,
    gen_H,
    gen_kneser,
    is_proper,
    kneser_representation,
)

log = logging.getLogger("topobounds")

EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


# input helpers ---------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _read_json(path: str) -> Any:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def generate(spec: str) -> tuple[Graph, Hypergraph | None]:
    """Inline generators: ``H:6``, ``kneser:5,2``, ``cycle:5``, ``complete:4``, ``empty:3``."""
    name, _, arg = spec.partition(":")
    try:
        nums = [int(x) for x in arg.split(",")] if arg else []
    except ValueError:
        raise InvalidInput(f"bad generator arguments in {spec!r}") from None
    name = name.lower()
    table: dict[str, tuple[int, Callable]] = {
        "h": (1, lambda t: (gen_H(t), None)),
        "kneser": (2, lambda n, k: gen_kneser(n, k)),
        "cycle": (1, lambda n: (gen_cycle(n), None)),
        "complete": (1, lambda n: (gen_complete(n), None)),
        "empty": (1, lambda n: (gen_empty(n), None)),
    }
    if name not in table:
        raise InvalidInput(f"unknown generator {name!r}")
    arity, fn = table[name]
    if len(nums) != arity:
        raise InvalidInput(f"generator {name} takes {arity} integer argument(s)")
    return fn(*nums)


def load_graph(args) -> Graph:
    if getattr(args, "gen", None):
        return generate(args.gen)[0]
    if not getattr(args, "graph", None):
        raise UsageError("a graph is required (--graph FILE or --gen SPEC)")
    text = _read(args.graph)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return Graph.from_edge_list(text)
    return Graph.from_json(data)


def load_coloring(path: str) -> dict[str, int]:
    data = _read_json(path)
    if isinstance(data, dict) and "colors" in data:
        data = data["colors"]
    if not isinstance(data, dict):
        raise InvalidInput("coloring JSON must map vertices to colors")
    try:
        return {str(k): int(v) for k, v in data.items()}
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad coloring: {exc}") from exc


def load_field(text: str) -> Field:
    return Field.from_json(int(text) if text.isdigit() else text)


def load_assignment(args, g: Graph):
    """Matroid assignment from --coloring, --rep or --assignment."""
    from .representations import MatroidAssignment, VectorAssignment, coloring_assignment

    if getattr(args, "coloring", None):
        col = load_coloring(args.coloring)
        if not is_proper(g, col):
            raise InvalidInput("coloring is not proper")
        return coloring_assignment(col, getattr(args, "m", None), getattr(args, "rank", None))
    if getattr(args, "rep", None):
        return VectorAssignment.from_json(_read_json(args.rep)).to_matroid()
    if getattr(args, "assignment", None):
        return MatroidAssignment.from_json(_read_json(args.assignment))
    raise UsageError("one of --coloring, --rep or --assignment is required")


# subcommands -------------------------------------------------------------------------


def cmd_gen(args, ctx) -> dict:
    g, h = generate(args.gen)
    out = {"graph": g.to_json()}
    if h is not None:
        out["hypergraph"] = h.to_json()
    return out


def cmd_xind(args, ctx) -> dict:
    from .topo import build_hom_poset, cross_index

    g = load_graph(args)
    poset = build_hom_poset(g, args.max_poset)
    res = cross_index(poset, engine=args.engine, use_clique_bound=not args.no_clique_bound, deadline=ctx["deadline"])
    out = {
        "xind": res.value,
        "bound_chi": res.value + 2,
        "poset_size": len(poset),
        "lower_bound": {"value": res.lower_bound, "reason": res.lower_reason},
        "upper_bound": {"value": res.upper_bound, "reason": res.upper_reason},
    }
    if args.certificate:
        out["map"] = [
            {**poset.elements[i].to_json(), "value": v} for i, v in enumerate(res.qmap or [])
        ]
    return out


def cmd_cd2(args, ctx) -> dict:
    from .topo import cd2

    if args.hypergraph:
        h = Hypergraph.from_json(_read_json(args.hypergraph))
    elif args.gen:
        g, h = generate(args.gen)
        if h is None:
            h = kneser_representation(g)
    else:
        h = kneser_representation(load_graph(args))
    d, removed = cd2(h, ctx["deadline"])
    return {"cd2": d, "removed": removed}


def cmd_chromatic(args, ctx) -> dict:
    from .solvers import chromatic_number

    chi, col = chromatic_number(load_graph(args), ctx["deadline"])
    return {"chi": chi, "coloring": dict(col.colors)}


def cmd_clique(args, ctx) -> dict:
    from .solvers import max_clique

    omega, witness = max_clique(load_graph(args))
    return {"omega": omega, "clique": list(witness)}


def cmd_orthodim(args, ctx) -> dict:
    from .representations import orthogonality_dimension

    g = load_graph(args)
    res = orthogonality_dimension(g, load_field(args.field), args.t_max, ctx["deadline"])
    if res is None:
        return {"dim": None, "t_max": args.t_max}
    return {"dim": res[0], "representation": res[1].to_json()}


def cmd_minrank(args, ctx) -> dict:
    from .representations import minrank_bruteforce

    g = load_graph(args)
    if args.complement:
        g = complement(g)
    r, a = minrank_bruteforce(g, load_field(args.field), args.engine, args.cap, ctx["deadline"])
    return {"minrank": r, "matrix": a.to_json(), "symmetric": a.is_symmetric()}


def cmd_indrep(args, ctx) -> dict:
    from .representations import min_indrep_dimension

    g = load_graph(args)
    res = min_indrep_dimension(g, load_field(args.field), args.s_max, ctx["deadline"])
    if res is None:
        return {"dimension": None, "s_max": args.s_max}
    return {"dimension": res[0], "representation": res[1].to_json()}


def cmd_extract(args, ctx) -> dict:
    from .topo import extract_colorful_bipartite

    g = load_graph(args)
    return extract_colorful_bipartite(g, load_assignment(args, g), args.max_poset).to_json()


def cmd_star(args, ctx) -> dict:
    from .representations import check_star_condition

    g = load_graph(args)
    res = check_star_condition(g, load_assignment(args, g), args.balanced, args.max_poset)
    return {
        "satisfied": res.ok,
        "independent": res.independent,
        "violation": res.violation,
        "pairs_checked": res.checked,
    }


def cmd_local(args, ctx) -> dict:
    from .representations import local_chromatic

    psi, col = local_chromatic(load_graph(args), args.m_max, ctx["deadline"])
    return {"psi": psi, "coloring": dict(col.colors)}


def cmd_reduce(args, ctx) -> dict:
    from .hardness import parse_monotone_3sat, reduce_3sat_to_colorful

    inst = parse_monotone_3sat(_read(args.cnf))
    cg = reduce_3sat_to_colorful(inst, pad=args.pad)
    return {"instance": inst.to_json(), "colored_graph": cg.to_json(), "colors": len(cg.colors)}


def _parse_mode(text: str):
    if text == "all":
        return "all"
    name, _, t = text.partition(":")
    if name != "balanced" or not t.isdigit():
        raise InvalidInput(f"mode must be 'all' or 'balanced:T', got {text!r}")
    return ("balanced", int(t))


def cmd_colorful(args, ctx) -> dict:
    from .hardness import colorful_complete_bipartite_exists

    cg = ColoredGraph.from_json(_read_json(args.colored))
    w = colorful_complete_bipartite_exists(cg, _parse_mode(args.mode), args.allow_empty)
    return {"exists": w is not None, "witness": None if w is None else w.to_json()}


def cmd_convert(args, ctx) -> dict:
    from .representations import RepresentingMatrix, VectorAssignment, indrep_to_matrix, matrix_to_indrep

    g = load_graph(args)
    if args.direction == "matrix-to-indrep":
        if not args.matrix:
            raise UsageError("--matrix is required")
        # the matrix represents the complement of the graph given
        a = RepresentingMatrix.from_json(_read_json(args.matrix), complement(g))
        rep = matrix_to_indrep(a, g)
        return {"rank": a.rank, "dim": rep.dim, "representation": rep.to_json()}
    if not args.rep:
        raise UsageError("--rep is required")
    rep = VectorAssignment.from_json(_read_json(args.rep))
    m = indrep_to_matrix(g, rep)
    return {"dim": rep.dim, "rank": m.rank, "matrix": m.to_json()}


def cmd_verify(args, ctx) -> dict:
    from .representations import (
        MatroidAssignment,
        RepresentingMatrix,
        VectorAssignment,
        verify_independent_rep,
        verify_orthogonal_rep,
    )

    g = load_graph(args)
    out: dict[str, Any] = {}
    if args.rep:
        rep = VectorAssignment.from_json(_read_json(args.rep))
        orth = verify_orthogonal_rep(g, rep)
        ind = verify_independent_rep(g, rep.to_matroid()) if not rep.missing(g) else orth
        out.update(orthogonal=orth.ok, dim=rep.dim, independent=ind.ok, violations=orth.violations + ind.violations)
    if args.matrix:
        a = RepresentingMatrix.from_json(_read_json(args.matrix), g)
        v = a.violations()
        out.update(represents=not v, rank=a.rank, violations=out.get("violations", []) + v)
    if args.coloring:
        col = load_coloring(args.coloring)
        out.update(proper=is_proper(g, col), colors=len(set(col.values())))
    if args.assignment:
        a = MatroidAssignment.from_json(_read_json(args.assignment))
        chk = verify_independent_rep(g, a)
        out.update(independent=chk.ok, violations=out.get("violations", []) + chk.violations)
    if args.witness:
        w = _read_json(args.witness)
        xs, ys = w.get("X_star", w.get("X", [])), w.get("Y_star", w.get("Y", []))
        out.update(complete_bipartite=bool(xs) and bool(ys) and g.is_complete_bipartite(xs, ys))
    if not out:
        raise UsageError("nothing to verify: pass --rep, --matrix, --coloring, --assignment or --witness")
    return out


def cmd_fuzz(args, ctx) -> dict:
    import random

    from .hardness import balanced_family_decision, colorful_complete_bipartite_exists, corrected_s_values
    from .hardness import fuzz_reduction, random_colored_graph

    rep = fuzz_reduction(args.seed, args.count, args.n_max, args.m_max, pad=not args.no_pad).to_json()
    rng = random.Random(args.seed)
    bad = []
    for k in range(args.colored_count):
        cg = random_colored_graph(rng, args.graph_n_max, args.colors_max)
        lhs = colorful_complete_bipartite_exists(cg) is not None
        s_values = None if args.full_range else corrected_s_values(cg)
        rhs, _ = balanced_family_decision(cg, s_values)
        if lhs != rhs:
            bad.append({"index": k, "graph": cg.to_json(), "all_colors": lhs, "family": rhs})
    rep["balanced_family"] = {"graphs": args.colored_count, "disagreements": bad}
    return rep


def cmd_export_cnf(args, ctx) -> dict:
    from .solvers import export_kcoloring_cnf

    cnf = export_kcoloring_cnf(load_graph(args), args.k)
    text = cnf.to_dimacs()
    if args.out:
        Path(args.out).write_text(text)
    return {"num_vars": cnf.num_vars, "num_clauses": len(cnf.clauses), "dimacs": None if args.out else text}


# parser --------------------------------------------------------------------------------


def _graph_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph JSON or edge-list file")
    p.add_argument("--gen", help="inline generator, e.g. H:6, kneser:5,2, cycle:5")


def _assignment_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coloring", help="proper coloring JSON, read as a uniform-matroid assignment")
    p.add_argument("--m", type=int, help="uniform matroid size for --coloring (default: largest color)")
    p.add_argument("--rank", type=int, help="uniform matroid rank for --coloring (default: m)")
    p.add_argument("--rep", help="vector representation JSON")
    p.add_argument("--assignment", help="matroid assignment JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topobounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-poset", type=int, default=200_000, help="cap on Hom(K2, G) size")
    common.add_argument("--time-budget-sec", type=float, default=600.0, help="wall-clock budget per command")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    def add(name: str, fn: Callable, help: str, graph: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        if graph:
            _graph_opts(p)
        p.set_defaults(func=fn)
        return p

    p = add("gen", cmd_gen, "emit a generated graph", graph=False)
    p.add_argument("--gen", required=True)
    p = add("xind", cmd_xind, "cross-index of Hom(K2, G)")
    p.add_argument("--engine", choices=["sat", "dfs"], default="sat")
    p.add_argument("--no-clique-bound", action="store_true", help="search from n = 0")
    p.add_argument("--certificate", action="store_true", help="include the optimal map")
    p = add("cd2", cmd_cd2, "2-colorability defect of a hypergraph")
    p.add_argument("--hypergraph")
    add("chromatic", cmd_chromatic, "chromatic number")
    add("clique", cmd_clique, "clique number")
    p = add("orthodim", cmd_orthodim, "orthogonality dimension over GF(p)")
    p.add_argument("--field", default="2")
    p.add_argument("--t-max", type=int, default=8)
    p = add("minrank", cmd_minrank, "minrank over GF(p)")
    p.add_argument("--field", default="2")
    p.add_argument("--engine", choices=["subspaces", "matrices"], default="subspaces")
    p.add_argument("--cap", type=int, default=2_000_000)
    p.add_argument("--complement", action="store_true", help="use the complement of the graph")
    p = add("indrep", cmd_indrep, "minimum independent representation dimension")
    p.add_argument("--field", default="2")
    p.add_argument("--s-max", type=int, default=8)
    p = add("extract", cmd_extract, "colorful balanced complete bipartite subgraph")
    _assignment_opts(p)
    p = add("star-check", cmd_star, "check condition (star) for an assignment")
    _assignment_opts(p)
    p.add_argument("--balanced", action="store_true")
    p = add("local-chromatic", cmd_local, "local chromatic number")
    p.add_argument("--m-max", type=int, required=True)
    p = add("reduce-3sat", cmd_reduce, "monotone 3SAT to colorful bipartite gadget", graph=False)
    p.add_argument("--cnf", required=True)
    p.add_argument("--pad", action="store_true", help="complete single-polarity instances first")
    p = add("colorful", cmd_colorful, "decide colorful complete bipartite subgraphs", graph=False)
    p.add_argument("--colored", required=True, help="colored graph JSON")
    p.add_argument("--mode", default="all", help="'all' or 'balanced:T'")
    p.add_argument("--allow-empty", action="store_true")
    p = add("convert", cmd_convert, "representing matrix <-> independent representation")
    p.add_argument("--direction", choices=["matrix-to-indrep", "indrep-to-matrix"], required=True)
    p.add_argument("--matrix")
    p.add_argument("--rep")
    p = add("verify", cmd_verify, "re-check representations, matrices, colorings, witnesses")
    p.add_argument("--rep")
    p.add_argument("--matrix")
    p.add_argument("--coloring")
    p.add_argument("--assignment")
    p.add_argument("--witness")
    p = add("fuzz", cmd_fuzz, "randomized reduction cross-checks", graph=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--no-pad", action="store_true")
    p.add_argument("--colored-count", type=int, default=50)
    p.add_argument("--graph-n-max", type=int, default=10)
    p.add_argument("--colors-max", type=int, default=4)
    p.add_argument("--full-range", action="store_true", help="use s = 0..r-1 instead of 0..r-2 for the balanced family")
    p = add("export-cnf", cmd_export_cnf, "k-coloring as DIMACS CNF")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    return parser


def _digest(args) -> str:
    h = hashlib.sha256()
    for key in sorted(vars(args)):
        val = getattr(args, key)
        if callable(val):
            continue
        h.update(f"{key}={val!r};".encode())
        if isinstance(val, str) and key not in ("command", "gen", "field", "mode", "engine", "direction") and Path(val).is_file():
            h.update(Path(val).read_bytes())
    return h.hexdigest()


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EX_USAGE, None
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    ctx = {"deadline": Deadline(args.time_budget_sec)}
    start = time.perf_counter()
    report: dict[str, Any] = {"command": ["topobounds", *argv], "inputs_digest": _digest(args), "version": __version__}
    try:
        results = args.func(args, ctx)
    except UsageError as exc:
        print(f"topobounds: {exc}", file=sys.stderr)
        return EX_USAGE, None
    except InvalidInput as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 2
    except BudgetExceeded as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 3
    else:
        report["results"] = results
        code = 0
    report["timing_sec"] = round(time.perf_counter() - start, 6)
    if "error" in report:
        print(f"topobounds: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    if report is not None:
        json.dump(report, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
