"""Replay emitted witnesses against their inputs, using exact checks only."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra_core import Scenario, build_context_category, context_cliques, exclusivity_graph, is_acyclic
from .diophantine import DimSolution, is_dimension_function, scenario_equalities, scenario_with_dims
from .exact import to_fraction
from .extension import extended_cliques, extended_graph, maximal_extension
from .ortho_graph import (
    Colouring, OrthoGraph, d_colouring_with_trace, is_d_colouring, is_proper, is_valuation,
    maximal_cliques,
)
from .realization import Realisation, check_realisation, graph_from_realisation, is_unital

KINDS = (
    "report", "colouring", "valuation", "connection", "dimension_function",
    "classical_model", "realisation", "embedding", "functional",
)


@dataclass
class VerifyResult:
    kind: str
    ok: bool
    problems: list = field(default_factory=list)

    def to_json(self):
        return {"kind": self.kind, "ok": self.ok, "problems": list(self.problems)}


def detect_kind(obj) -> str:
    if "label" in obj and "chi_Gstar" in obj:
        return "report"
    if "contexts" in obj and "maps" in obj:
        return "connection"
    if "lambda_points" in obj:
        return "embedding"
    if "model" in obj and "target" in obj:
        return "classical_model"
    if "classical_max" in obj:
        return "functional"
    if "valuation" in obj:
        return "valuation"
    if "colouring" in obj:
        return "colouring"
    if "dims" in obj and "d" in obj:
        return "dimension_function"
    if "d" in obj and ("vectors" in obj or "subspaces" in obj):
        return "realisation"
    raise ValueError("cannot tell what kind of witness this is")


def _graph_and_cliques(source):
    if isinstance(source, Scenario):
        return exclusivity_graph(source), context_cliques(source)
    if isinstance(source, OrthoGraph):
        return source, maximal_cliques(source)
    raise ValueError("this witness needs a scenario or graph to replay against")


def _report(obj, s, problems):
    if s is None:
        raise ValueError("a report needs its scenario")
    s = scenario_with_dims(s)
    ext = maximal_extension(s)
    g, cliques = extended_graph(ext), extended_cliques(ext)
    if obj["d"] != s.d:
        problems.append(f"d is {obj['d']}, scenario has d = {s.d}")
    acyclic = is_acyclic(build_context_category(s))
    if obj["acyclic"] != acyclic:
        problems.append("acyclicity flag disagrees with the context category")
    if obj.get("witness") is not None:
        col = Colouring({k: int(v) for k, v in obj["witness"]["colouring"].items()})
        if not is_d_colouring(g, cliques, s.d, col):
            problems.append("witness is not a d-colouring of the maximal extension")
        if obj["contextual"] or obj["chi_Gstar"] != s.d:
            problems.append("a d-colouring witness requires contextual = false and chi_Gstar = d")
        expected = "FULLY_CLASSICAL" if acyclic else "KS_NONCONTEXTUAL_WITH_NONCLASSICAL_CORRELATIONS"
        if obj["label"] != expected:
            problems.append(f"label should be {expected}")
    elif obj.get("obstruction") is not None:
        from .ks_decision import _trace_hash
        ob = obj["obstruction"]
        col, nodes = d_colouring_with_trace(g, cliques, s.d)
        if col is not None:
            problems.append("replay found a d-colouring")
        if nodes != ob["search_nodes"] or _trace_hash(g, s.d, nodes) != ob["trace_hash"]:
            problems.append("search trace does not replay")
        if ob["chi_lower_bound"] != s.d + 1 or obj["chi_Gstar"] < s.d + 1:
            problems.append("chromatic bound inconsistent with the obstruction")
        if not obj["contextual"] or obj["label"] != "KS_CONTEXTUAL":
            problems.append("an obstruction requires the KS_CONTEXTUAL label")
    else:
        problems.append("report carries neither witness nor obstruction")


def _colouring(obj, source, problems):
    g, cliques = _graph_and_cliques(source)
    if obj["colouring"] is None:
        problems.append("no colouring to replay")
        return
    col = Colouring({k: int(v) for k, v in obj["colouring"].items()})
    if set(col.assignment) != set(g.vertices) or not is_proper(g, col.assignment):
        problems.append("not a proper colouring of every vertex")
    if "chromatic_number" in obj and col.n_colours != obj["chromatic_number"]:
        problems.append("colour count differs from the claimed chromatic number")
    if obj.get("d") is not None and not is_d_colouring(g, cliques, obj["d"], col):
        problems.append("not a d-colouring")


def _valuation(obj, source, problems):
    g, cliques = _graph_and_cliques(source)
    if obj["valuation"] is None:
        problems.append("no valuation to replay")
    elif not is_valuation(g, cliques, frozenset(obj["valuation"])):
        problems.append("chosen set is not a valuation")


def _connection(obj, s, problems):
    from .ks_decision import ContextConnection, verify_connection
    if s is None:
        raise ValueError("a connection needs its scenario")
    s = s if s.is_maximal() else maximal_extension(scenario_with_dims(s)).extended
    problems.extend(verify_connection(ContextConnection.from_json(obj), s, all_cycles=s.n_contexts <= 12))


def _dimension_function(obj, source, problems):
    sol = DimSolution(int(obj["d"]), {k: int(v) for k, v in obj["dims"].items()})
    eqs = ()
    if isinstance(source, Scenario):
        eqs = scenario_equalities(source)
    g, cliques = _graph_and_cliques(source)
    if set(sol.dims) != set(g.vertices):
        problems.append("dims do not cover exactly the vertices")
    elif not is_dimension_function(cliques, sol, eqs):
        problems.append("clique sums or equalities fail")


def _classical_model(obj, source, problems):
    model = obj["model"]
    if model is None:
        problems.append("no model to replay")
        return
    vals = [frozenset(v) for v in model["valuations"]]
    weights = [to_fraction(model["weights"][str(k)]) for k in range(len(vals))]
    target = {v: to_fraction(x) for v, x in obj["target"].items()}
    if any(w < 0 for w in weights) or sum(weights, Fraction(0)) != 1:
        problems.append("weights are not a probability distribution")
    for v, x in target.items():
        if sum((w for val, w in zip(vals, weights) if v in val), Fraction(0)) != x:
            problems.append(f"marginal of {v} is not reproduced")
    if source is not None:
        g, cliques = _graph_and_cliques(source)
        normalised = obj.get("normalised", True)
        for val in vals:
            if normalised and not is_valuation(g, cliques, val):
                problems.append(f"{sorted(val)} is not a valuation")
            if not normalised and not is_proper(g, {v: 0 for v in val}):
                problems.append(f"{sorted(val)} is not an independent set")


def _realisation(obj, _source, problems):
    r = Realisation.from_json(obj)
    g = graph_from_realisation(r.vertex_map, r.ambient_dim)
    if not check_realisation(r, g):
        problems.append("realisation is not faithful")
    if obj.get("unital", True) and not is_unital(r, maximal_cliques(g)):
        problems.append("some maximal clique does not resolve the identity")
    if "n_contexts" in obj and obj["n_contexts"] != len(maximal_cliques(g)):
        problems.append("context count differs")


def _embedding(obj, s, problems):
    from .catalog import EmbeddingTable, verify_embedding
    if s is None:
        raise ValueError("an embedding needs its scenario")
    if not verify_embedding(s, EmbeddingTable.from_json(obj)):
        problems.append("table is not a faithful classical embedding")


def _functional(obj, s, problems):
    from .correlations import classical_maximum, parse_functional
    if s is None:
        raise ValueError("a functional result needs its scenario")
    f = parse_functional(s, obj["functional"])
    arg = frozenset(obj["argmax_valuation"])
    if not is_valuation(exclusivity_graph(s), context_cliques(s), arg):
        problems.append("argmax is not a valuation")
    gain = sum((c for (_, a), c in f.items() if a in arg), Fraction(0))
    if gain != to_fraction(obj["classical_max"]):
        problems.append("argmax does not attain the claimed maximum")
    if classical_maximum(s, f) != gain:
        problems.append("claimed maximum is not the maximum")


_DISPATCH = {
    "report": _report,
    "colouring": _colouring,
    "valuation": _valuation,
    "connection": _connection,
    "dimension_function": _dimension_function,
    "classical_model": _classical_model,
    "realisation": _realisation,
    "embedding": _embedding,
    "functional": _functional,
}


def verify(obj, source=None, kind=None) -> VerifyResult:
    """Replay a witness. ``source`` is the Scenario or OrthoGraph it was computed on."""
    kind = kind or detect_kind(obj)
    if kind not in _DISPATCH:
        raise ValueError(f"unknown witness kind {kind!r}")
    problems = []
    _DISPATCH[kind](obj, source, problems)
    return VerifyResult(kind, not problems, problems)
