"""Command-line front end.

    graphent report    --graph petersen --json
    graphent coeffs    --graph ring:5
    graphent rank      --graph code613 --partition 1,4,5
    graphent mis | optimize | symmetric | verify --graph FILE
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bounds import best_bipartite_lower_bound, bipartite_entanglement, max_independent_set
from .graph_core import (
    Graph,
    GraphError,
    GraphParseError,
    GraphSizeError,
    is_graph_name,
    labels,
    named_graph,
    parse_graph,
    parse_vertex_list,
)
from .optimize import (
    BoundsReport,
    ConsistencyError,
    OptimizerConfig,
    OptimumResult,
    entanglement_bounds_report,
    optimize_product_fidelity,
    optimize_symmetric,
)
from .state import ProductState, symmetric_coefficients, verify_stabilizer

COMMANDS = ("report", "mis", "rank", "coeffs", "optimize", "symmetric", "verify")

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2

_NUM = {"type": "number"}
_LABELS = {"type": "array", "items": {"type": "integer", "minimum": 1}}

# JSON Schema of ``report --json``; field names are stable.
REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["graph", "lower", "upper", "exact", "conjecture_flags"],
    "properties": {
        "graph": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n", "edges"],
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "edges": {"type": "array", "items": {**_LABELS, "minItems": 2, "maxItems": 2}},
            },
        },
        "lower": {
            "type": "object",
            "additionalProperties": False,
            "required": ["ebits", "side"],
            "properties": {"ebits": {"type": "integer", "minimum": 0}, "side": _LABELS},
        },
        "upper": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mis", "symmetric", "general"],
            "properties": {
                "mis": {"type": "integer", "minimum": 0},
                "symmetric": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["F", "E", "p", "phi"],
                    "properties": {"F": _NUM, "E": _NUM, "p": _NUM, "phi": _NUM},
                },
                "general": {
                    "oneOf": [
                        {"type": "null"},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["F", "E"],
                            "properties": {"F": _NUM, "E": _NUM},
                        },
                    ]
                },
            },
        },
        "exact": {"type": ["integer", "null"]},
        "conjecture_flags": {"type": "array", "items": {"type": "string"}},
    },
}


class UsageError(Exception):
    pass


def num(x: float) -> float:
    """Round to 12 significant digits for stable JSON."""
    return float(f"{x:.12g}")


def load_graph(source: str) -> Graph:
    """Named graphs win over file paths; use ``./name`` for a file called ``name``."""
    if is_graph_name(source):
        return named_graph(source)
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read graph file {source!r}: {exc.strerror or exc}") from exc
    return parse_graph(text)


def graph_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [[a + 1, b + 1] for a, b in g.edges()]}


def report_json(g: Graph, rep: BoundsReport) -> dict:
    sym_p, sym_phi = rep.symmetric.params
    general = None
    if rep.general is not None:
        general = {"F": num(rep.general.fidelity), "E": num(rep.general.entanglement_bound)}
    return {
        "graph": graph_json(g),
        "lower": {"ebits": rep.lower_ebits, "side": labels(rep.lower_side)},
        "upper": {
            "mis": rep.mis_upper,
            "symmetric": {
                "F": num(rep.symmetric.fidelity),
                "E": num(rep.symmetric.entanglement_bound),
                "p": num(sym_p),
                "phi": num(sym_phi),
            },
            "general": general,
        },
        "exact": rep.entanglement_exact,
        "conjecture_flags": list(rep.conjecture_flags),
    }


def _optimum_json(res: OptimumResult) -> dict:
    out = {
        "F": num(res.fidelity),
        "E": num(res.entanglement_bound),
        "iterations": res.iterations,
        "converged": res.converged,
        "certified": res.certified,
        "conjecture_flags": list(res.flags),
    }
    if isinstance(res.params, ProductState):
        out["p"] = [num(v) for v in res.params.p]
        out["phi"] = [num(v) for v in res.params.phi]
    else:
        out["p"], out["phi"] = num(res.params[0]), num(res.params[1])
    return out


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _report_text(g: Graph, rep: BoundsReport) -> str:
    p, phi = rep.symmetric.params
    lines = [
        f"graph: n={g.n} edges={g.num_edges}",
        f"lower bound (bipartite): {rep.lower_ebits} ebits across side {labels(rep.lower_side)}",
        f"upper bound (independent set {labels(rep.mis_witness)}): {rep.mis_upper}",
        f"upper bound (symmetric ansatz): {_fmt(rep.symmetric_upper)}  F={rep.symmetric.fidelity:.12g} p={_fmt(p)} phi={_fmt(phi)}",
    ]
    if rep.general is not None:
        lines.append(f"upper bound (general product): {_fmt(rep.general.entanglement_bound)}  F={rep.general.fidelity:.12g}")
    if rep.entanglement_exact is not None:
        lines.append(f"entanglement: {rep.entanglement_exact} (exact)")
    else:
        lines.append(f"entanglement: in [{rep.lower_ebits}, {_fmt(rep.best_upper)}]")
    lines += [f"note: {flag}" for flag in rep.conjecture_flags]
    return "\n".join(lines)


def run(args: argparse.Namespace) -> tuple[dict, str]:
    """Execute a parsed command; returns (json payload, text output)."""
    g = load_graph(args.graph)
    if args.partition is not None and args.command != "rank":
        raise UsageError("--partition is only valid with 'rank'")
    overrides = {}
    if args.starts is not None:
        overrides["starts"] = args.starts
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.grid is not None:
        overrides["grid_p"] = overrides["grid_phi"] = args.grid
    try:
        cfg = OptimizerConfig(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    cmd = args.command
    if cmd == "report":
        rep = entanglement_bounds_report(g, cfg)
        return report_json(g, rep), _report_text(g, rep)
    if cmd == "mis":
        res = max_independent_set(g)
        payload = {"size": res.size, "witness": labels(res.witness), "upper": g.n - res.size}
        return payload, f"{res.size} {' '.join(map(str, labels(res.witness)))}"
    if cmd == "rank":
        if args.partition is not None:
            try:
                side = parse_vertex_list(args.partition, g.n)
            except GraphParseError as exc:
                raise UsageError(f"bad --partition: {exc}") from exc
            res = bipartite_entanglement(g, side)
        else:
            res = best_bipartite_lower_bound(g)
        return {"side": labels(res.side), "ebits": res.ebits}, str(res.ebits)
    if cmd == "coeffs":
        c = symmetric_coefficients(g)
        return {"coefficients": list(c)}, " ".join(map(str, c))
    if cmd == "symmetric":
        res = optimize_symmetric(g, cfg)
        return _optimum_json(res), f"F={res.fidelity:.12g} E={_fmt(res.entanglement_bound)} p={_fmt(res.params[0])} phi={_fmt(res.params[1])}"
    if cmd == "optimize":
        res = optimize_product_fidelity(g, cfg)
        text = f"F={res.fidelity:.12g} E={_fmt(res.entanglement_bound)}"
        if res.conjecture:
            text += " (uncertified)"
        return _optimum_json(res), text
    if cmd == "verify":
        failed = [a + 1 for a in range(g.n) if not verify_stabilizer(g, a)]
        text = "ok" if not failed else "stabilizer check failed at vertices " + " ".join(map(str, failed))
        return {"ok": not failed, "failed": failed}, text
    raise UsageError(f"unknown command {cmd!r}")  # pragma: no cover


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse's exit code 2, without the usage dump
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphent", description="Entanglement bounds for graph states.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--graph", required=True, help="named graph (petersen, code613, ring:k, star:k, edgeless:k) or file path")
    parser.add_argument("--json", action="store_true", help="emit one JSON object")
    parser.add_argument("--partition", help="comma-separated 1-based vertices (rank only)")
    parser.add_argument("--starts", type=int, help="random starts for the general optimizer")
    parser.add_argument("--seed", type=int, help="seed for the random starts")
    parser.add_argument("--grid", type=int, help="grid points per axis for the symmetric scan")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, text = run(args)
    except GraphSizeError as exc:
        print(f"graphent: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (UsageError, GraphParseError) as exc:
        print(f"graphent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphError as exc:
        # unknown names, bad sides: problems with the request itself
        print(f"graphent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, ArithmeticError, MemoryError) as exc:
        print(f"graphent: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text + "\n")
    if args.command == "verify" and not payload["ok"]:
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
