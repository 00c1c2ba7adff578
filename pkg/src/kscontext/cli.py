"""Command-line front end. Every subcommand reads JSON and writes deterministic JSON.

Exit codes: 0 success, 2 negative verdict (contextual, infeasible, not a
member), 1 error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import catalog
from .algebra_core import (
    Scenario, build_context_category, compatibility_graph, context_cliques, exclusivity_graph,
    is_acyclic,
)
from .errors import KSError, NoSolutionUpTo
from .exact import fraction_str
from .ortho_graph import OrthoGraph, chromatic_number, d_colouring, is_chordal, ks_colouring, maximal_cliques

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2, 64

SCHEMAS = {
    "scenario": {
        "type": "object",
        "required": ["max_contexts"],
        "properties": {
            "atoms": {"type": "array", "items": {"type": "string"}},
            "max_contexts": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "dim": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
            "d": {"type": "integer", "minimum": 1},
            "events": {"type": "object", "additionalProperties": {
                "type": "array", "items": {"type": "array", "items": {"type": "string"}}}},
        },
    },
    "graph": {
        "type": "object",
        "required": ["vertices", "edges"],
        "properties": {
            "vertices": {"type": "array", "items": {"type": "string"}},
            "edges": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        },
    },
    "vectors": {
        "type": "object",
        "required": ["d"],
        "properties": {
            "d": {"type": "integer"},
            "vectors": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "integer"}}},
            "subspaces": {"type": "object", "additionalProperties": {
                "type": "array", "items": {"type": "array", "items": {"type": "integer"}}}},
        },
    },
    "state": {
        "type": "object",
        "description": "context key (atoms joined by '|') -> atom -> rational string",
        "additionalProperties": {"type": "object", "additionalProperties": {"type": ["string", "integer"]}},
    },
    "correlation": {
        "type": "object",
        "description": "vertex -> rational string",
        "additionalProperties": {"type": ["string", "integer"]},
    },
    "functional": {
        "type": "object",
        "description": "sparse map context key -> atom -> rational coefficient",
        "additionalProperties": {"type": "object", "additionalProperties": {"type": ["string", "integer"]}},
    },
    "report": {
        "type": "object",
        "required": ["label", "acyclic", "chi_Gstar", "d"],
        "properties": {
            "label": {"enum": ["FULLY_CLASSICAL", "KS_NONCONTEXTUAL_WITH_NONCLASSICAL_CORRELATIONS", "KS_CONTEXTUAL"]},
            "acyclic": {"type": "boolean"},
            "vorobev_all_states_classical": {"type": "boolean"},
            "contextual": {"type": "boolean"},
            "chi_Gstar": {"type": "integer"},
            "d": {"type": "integer"},
            "witness": {"type": "object"},
            "obstruction": {"type": "object"},
        },
    },
    "dimension_function": {
        "type": "object",
        "required": ["d", "dims"],
        "properties": {"d": {"type": "integer"}, "dims": {"type": "object"}},
    },
}


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    d: int | None = None
    cap: int = 1_000_000
    seed: int = 0
    output: str | None = None
    pretty: bool = False

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("caps must be positive")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- input

def read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def to_graph(obj):
    """(graph, cliques, scenario or None) from scenario, graph or vector JSON."""
    if "max_contexts" in obj:
        s = Scenario.from_json(obj)
        return exclusivity_graph(s), context_cliques(s), s
    if "vertices" in obj:
        g = OrthoGraph.from_json(obj)
        return g, maximal_cliques(g), None
    if "vectors" in obj or "subspaces" in obj:
        from .realization import Realisation, graph_from_realisation
        r = Realisation.from_json(obj)
        g = graph_from_realisation(r.vertex_map, r.ambient_dim)
        return g, maximal_cliques(g), None
    raise ValueError("input is neither a scenario, a graph nor a vector file")


def to_scenario(obj):
    if "max_contexts" not in obj:
        raise ValueError("this subcommand needs a scenario")
    return Scenario.from_json(obj)


# ---------------------------------------------------------------- commands

def cmd_analyze(args, cfg):
    from .ks_decision import classify
    rep = classify(to_scenario(read_json(args.input))).to_json()
    return rep, EXIT_NEGATIVE if rep["contextual"] else EXIT_OK


def cmd_chromatic(args, cfg):
    g, _, _ = to_graph(read_json(args.input))
    k, col = chromatic_number(g)
    return {"chromatic_number": k, "colouring": col.to_json()}, EXIT_OK


def cmd_color(args, cfg):
    g, cliques, _ = to_graph(read_json(args.input))
    col = d_colouring(g, cliques, args.d)
    out = {"d": args.d, "colouring": col.to_json() if col else None}
    return out, EXIT_OK if col else EXIT_NEGATIVE


def cmd_ks_check(args, cfg):
    from .ks_decision import is_ks_contextual
    s = to_scenario(read_json(args.input))
    out = is_ks_contextual(s).to_json()
    val = ks_colouring(exclusivity_graph(s), context_cliques(s))
    out["valuation"] = sorted(val.chosen) if val else None
    return out, EXIT_NEGATIVE if out["contextual"] else EXIT_OK


def cmd_connection_check(args, cfg):
    from .diophantine import scenario_with_dims
    from .extension import maximal_extension
    from .ks_decision import ContextConnection, flat_connection_search, verify_connection
    s = to_scenario(read_json(args.input))
    if not s.is_maximal():
        s = maximal_extension(scenario_with_dims(s)).extended
    if args.connection:
        conn = ContextConnection.from_json(read_json(args.connection))
        problems = verify_connection(conn, s, all_cycles=True)
        return {"flat": not problems, "problems": problems}, EXIT_OK if not problems else EXIT_NEGATIVE
    conn = flat_connection_search(s, bound=cfg.cap)
    if conn is None:
        return {"contexts": [list(c) for c in s.max_contexts], "maps": None}, EXIT_NEGATIVE
    return conn.to_json(), EXIT_OK


def cmd_acyclic(args, cfg):
    s = to_scenario(read_json(args.input))
    cc = build_context_category(s)
    out = {
        "acyclic": is_acyclic(cc),
        "compatibility_chordal": is_chordal(compatibility_graph(s)),
        "poset_size": len(cc),
    }
    return out, EXIT_OK


def cmd_complete(args, cfg):
    from .realization import (
        Realisation, complete, graph_from_realisation, graph_from_vectors, is_freely_completable,
    )
    obj = read_json(args.input)
    if "vectors" in obj and "subspaces" not in obj:
        g, r = graph_from_vectors(obj["vectors"], obj["d"])
    else:
        r = Realisation.from_json(obj)
        g = graph_from_realisation(r.vertex_map, r.ambient_dim)
    free, why = is_freely_completable(r, g)
    g2, r2 = complete(r, g)
    out = r2.to_json()
    out["n_contexts"] = len(maximal_cliques(g2))
    out["freely_completable"] = free
    if why is not None:
        out["counterexample"] = why
    out["origins"] = {k: [list(c) for c in v] for k, v in sorted(r2.origins.items())}
    return out, EXIT_OK


def cmd_extend(args, cfg):
    from .diophantine import scenario_with_dims
    from .extension import maximal_extension
    s = to_scenario(read_json(args.input))
    return maximal_extension(scenario_with_dims(s)).to_json(), EXIT_OK


def cmd_dimfn(args, cfg):
    from .diophantine import all_dimension_functions, scenario_equalities, solve_dimension_function
    g, cliques, s = to_graph(read_json(args.input))
    eqs = scenario_equalities(s) if s is not None else ()
    if args.all:
        if args.d is None:
            raise UsageError("--all needs --d")
        sols = all_dimension_functions(g, cliques, args.d, cfg.cap, eqs)
        return {"d": args.d, "solutions": [x.to_json()["dims"] for x in sols]}, EXIT_OK if sols else EXIT_NEGATIVE
    d_max = args.d_max
    d_min = None
    if args.d is not None:
        d_min = d_max = args.d
    try:
        sol = solve_dimension_function(g, cliques, d_max, eqs, d_min=d_min)
    except NoSolutionUpTo as exc:
        return {"solution": None, "d_max": exc.d_max, "reason": str(exc)}, EXIT_NEGATIVE
    return sol.to_json(), EXIT_OK


def _correlation_weights(path):
    from .exact import to_fraction
    return {v: to_fraction(x) for v, x in read_json(path).items()}


def cmd_stab_check(args, cfg):
    from .correlations import State, _is_normalised, stab_membership, state_weights
    obj = read_json(args.input)
    if args.state:
        s = to_scenario(obj)
        st = State.from_json(s, read_json(args.state))
        target = state_weights(st)
        model = stab_membership(st, cap=cfg.cap)
        normalised = True
    elif args.correlation:
        g, cliques, _ = to_graph(obj)
        target = _correlation_weights(args.correlation)
        normalised = _is_normalised(target, cliques)
        model = stab_membership(target, g, cliques, cap=cfg.cap)
    else:
        raise UsageError("stab-check needs --state or --correlation")
    out = {
        "member": model is not None,
        "normalised": normalised,
        "target": {v: fraction_str(x) for v, x in sorted((target or {}).items())},
        "model": model.to_json() if model else None,
    }
    return out, EXIT_OK if model else EXIT_NEGATIVE


def cmd_qstab_check(args, cfg):
    from .correlations import qstab_membership
    g, _, _ = to_graph(read_json(args.input))
    if not args.correlation:
        raise UsageError("qstab-check needs --correlation")
    ok = qstab_membership(_correlation_weights(args.correlation), g)
    return {"member": ok}, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_functional(args, cfg):
    from .correlations import (
        State, classical_maximum, functional_to_json, functional_value, parse_functional,
    )
    from .ortho_graph import enumerate_valuations
    s = to_scenario(read_json(args.input))
    f = parse_functional(s, read_json(args.functional))
    best = classical_maximum(s, f, cfg.cap)
    arg = next(v for v in enumerate_valuations(exclusivity_graph(s), context_cliques(s), cfg.cap)
               if sum((c for (_, a), c in f.items() if a in v.chosen), 0) == best)
    out = {
        "functional": functional_to_json(s, f),
        "classical_max": fraction_str(best),
        "argmax_valuation": sorted(arg.chosen),
    }
    if args.state:
        val = functional_value(State.from_json(s, read_json(args.state)), f)
        out["value"] = fraction_str(val)
        out["exceeds_classical"] = val > best
    return out, EXIT_OK


def cmd_catalog(args, cfg):
    if args.action == "list":
        return {"entries": sorted(catalog.CATALOG)}, EXIT_OK
    if not args.name:
        raise UsageError("catalog export needs a name")
    return catalog.export(args.name), EXIT_OK


def cmd_verify(args, cfg):
    from .verify import verify
    obj = read_json(args.input)
    source = None
    if args.against:
        _, _, s = to_graph(read_json(args.against))
        source = s if s is not None else to_graph(read_json(args.against))[0]
    res = verify(obj, source, args.kind)
    return res.to_json(), EXIT_OK if res.ok else EXIT_NEGATIVE


COMMANDS = {
    "analyze": cmd_analyze,
    "chromatic": cmd_chromatic,
    "color": cmd_color,
    "ks-check": cmd_ks_check,
    "connection-check": cmd_connection_check,
    "acyclic": cmd_acyclic,
    "complete": cmd_complete,
    "extend": cmd_extend,
    "dimfn": cmd_dimfn,
    "stab-check": cmd_stab_check,
    "qstab-check": cmd_qstab_check,
    "functional": cmd_functional,
    "catalog": cmd_catalog,
    "verify": cmd_verify,
}


def build_parser():
    p = _Parser(prog="kscontext", description="Kochen-Specker contextuality toolkit (exact arithmetic).")
    p.add_argument("--schema", action="store_true", help="print the JSON schemas and exit")
    p.add_argument("--pretty", action="store_true", help="render a plain-text table instead of JSON")
    p.add_argument("--cap", type=int, default=1_000_000, help="enumeration cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)

    def cmd(name, help_, input_help="scenario JSON file, or - for stdin"):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help=input_help)
        return sp

    cmd("analyze", "classicality report")
    cmd("chromatic", "chromatic number with a witness colouring", "graph, scenario or vector JSON")
    cmd("color", "d-colouring", "graph, scenario or vector JSON").add_argument("--d", type=int, required=True)
    cmd("ks-check", "KS contextuality verdict and a valuation")
    cmd("connection-check", "flat context connection search, or verify one").add_argument("--connection")
    cmd("acyclic", "acyclicity of the context category")
    cmd("complete", "faithful completion of a vector realisation", "vector JSON")
    cmd("extend", "maximal extension")
    sp = cmd("dimfn", "dimension function", "graph or scenario JSON")
    sp.add_argument("--d", type=int)
    sp.add_argument("--d-max", type=int, default=16)
    sp.add_argument("--all", action="store_true", help="enumerate every solution at --d")
    sp = cmd("stab-check", "exact classical decomposition", "scenario (with --state) or graph (with --correlation)")
    sp.add_argument("--state")
    sp.add_argument("--correlation")
    cmd("qstab-check", "clique inequalities", "graph or scenario JSON").add_argument("--correlation")
    sp = cmd("functional", "linear functional value and classical maximum")
    sp.add_argument("--functional", required=True)
    sp.add_argument("--state")
    sp = sub.add_parser("catalog", help="built-in scenarios")
    sp.add_argument("action", choices=["list", "export"])
    sp.add_argument("name", nargs="?")
    sp = cmd("verify", "replay a witness", "witness JSON emitted by another subcommand")
    sp.add_argument("--against", help="scenario, graph or vector JSON the witness was computed on")
    sp.add_argument("--kind", help="witness kind, normally detected from its keys")
    return p


def render(obj, pretty):
    if not pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    rows = []
    for k in sorted(obj):
        v = obj[k]
        text = v if isinstance(v, str) else json.dumps(v, sort_keys=True, ensure_ascii=False)
        if len(text) > 100:
            text = text[:97] + "..."
        rows.append((k, text))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        print(json.dumps(SCHEMAS, sort_keys=True, indent=2))
        return EXIT_OK
    if not args.subcommand:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = RunConfig(args.subcommand, [getattr(args, "input", None)], getattr(args, "d", None),
                        args.cap, args.seed, args.output, args.pretty)
    except ValueError as exc:
        print(f"kscontext: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result, code = COMMANDS[args.subcommand](args, cfg)
    except UsageError as exc:
        print(f"kscontext: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KSError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"kscontext: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = render(result, args.pretty) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())
