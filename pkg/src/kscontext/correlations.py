"""States, correlations and classical models, all in exact rationals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact_lp
from .algebra_core import Scenario, _blocks, context_cliques, exclusivity_graph
from .errors import CapExceeded, InvalidColouring
from .exact import fraction_str, qdiv, to_fraction
from .extension import ExtendedScenario
from .ortho_graph import (
    DEFAULT_VALUATION_CAP, Colouring, OrthoGraph, Valuation, enumerate_valuations,
    independent_sets, is_d_colouring, maximal_cliques,
)


@dataclass(frozen=True)
class State:
    """Per-context probability distributions over atoms."""

    scenario: Scenario = field(repr=False)
    probs: tuple  # one {atom: Fraction} per maximal context, in scenario order

    @classmethod
    def build(cls, s: Scenario, probs):
        """``probs`` maps context keys (or indices, or atom tuples) to {atom: value}."""
        table = [None] * s.n_contexts
        items = probs.items() if isinstance(probs, dict) else enumerate(probs)
        for key, dist in items:
            i = key if isinstance(key, int) else s.context_index(key)
            ctx = s.max_contexts[i]
            if set(dist) - set(ctx):
                raise ValueError(f"distribution for {ctx} names foreign atoms")
            table[i] = {a: to_fraction(dist.get(a, 0)) for a in ctx}
        if any(t is None for t in table):
            raise ValueError("state must give a distribution for every maximal context")
        for i, dist in enumerate(table):
            if any(v < 0 for v in dist.values()) or sum(dist.values()) != 1:
                raise ValueError(f"context {s.max_contexts[i]} is not a probability distribution")
        return cls(s, tuple(table))

    def value(self, i, atoms):
        return sum((self.probs[i][a] for a in atoms), Fraction(0))

    def atom_value(self, atom):
        return self.probs[self.scenario.contexts_of(atom)[0]][atom]

    def to_json(self):
        s = self.scenario
        return {s.context_key(i): {a: fraction_str(v) for a, v in sorted(d.items())}
                for i, d in enumerate(self.probs)}

    @classmethod
    def from_json(cls, s, obj):
        return cls.build(s, {k: {a: to_fraction(v) for a, v in d.items()} for k, d in obj.items()})


@dataclass(frozen=True)
class Correlation:
    weights: dict = field(hash=False)

    @classmethod
    def build(cls, weights):
        w = {v: to_fraction(x) for v, x in weights.items()}
        if any(x < 0 or x > 1 for x in w.values()):
            raise ValueError("correlation weights must lie in [0, 1]")
        return cls(w)

    def to_json(self):
        return {v: fraction_str(x) for v, x in sorted(self.weights.items())}


@dataclass(frozen=True)
class ClassicalModel:
    valuations: tuple  # of frozensets of vertices
    weights: tuple  # Fractions summing to 1

    def marginal(self, vertex):
        return sum((w for v, w in zip(self.valuations, self.weights) if vertex in v), Fraction(0))

    def to_json(self):
        return {
            "valuations": [sorted(v) for v in self.valuations],
            "weights": {str(k): fraction_str(w) for k, w in enumerate(self.weights)},
        }


def check_no_disturbance(st: State, s: Scenario | None = None) -> bool:
    """Marginals agree on every shared subcontext (compared block by block)."""
    s = s or st.scenario
    for i in range(s.n_contexts):
        for j in range(i + 1, s.n_contexts):
            shared = s.named(i) & s.named(j)
            if not shared:
                continue
            mi = {sig: st.value(i, blk) for sig, blk in _blocks(s, i, shared)}
            mj = {sig: st.value(j, blk) for sig, blk in _blocks(s, j, shared)}
            for sig in set(mi) | set(mj):
                if mi.get(sig, 0) != mj.get(sig, 0):
                    return False
    return True


def state_weights(st: State):
    """Vertex weights of a state, or None when shared atoms disagree."""
    s = st.scenario
    w = {}
    for i, dist in enumerate(st.probs):
        for a, v in dist.items():
            if w.setdefault(a, v) != v:
                return None
    return {a: w[a] for a in s.atoms}


def _is_normalised(weights, cliques):
    return all(sum((weights.get(v, 0) for v in c), Fraction(0)) == 1 for c in cliques)


def _decompose(columns, g_vertices, weights):
    cols = [[1 if v in col else 0 for v in g_vertices] for col in columns]
    target = [weights.get(v, Fraction(0)) for v in g_vertices]
    x = exact_lp.convex_combination(cols, target)
    if x is None:
        return None
    keep = [(columns[k], x[k]) for k in range(len(columns)) if x[k] != 0]
    return ClassicalModel(tuple(v for v, _ in keep), tuple(w for _, w in keep))


def stab_membership(c, g: OrthoGraph | None = None, max_cliques=None, cap=DEFAULT_VALUATION_CAP):
    """Exact convex decomposition over valuations (normalised input) or
    independent sets (unnormalised input); None if the point lies outside."""
    if isinstance(c, State):
        s = c.scenario
        g = g or exclusivity_graph(s)
        max_cliques = max_cliques if max_cliques is not None else context_cliques(s)
        weights = state_weights(c)
        if weights is None or not check_no_disturbance(c):
            return None
        normalised = True
    else:
        weights = c.weights if isinstance(c, Correlation) else {v: to_fraction(x) for v, x in c.items()}
        if max_cliques is None:
            max_cliques = maximal_cliques(g)
        normalised = _is_normalised(weights, max_cliques)
    if normalised:
        columns = [v.chosen for v in enumerate_valuations(g, max_cliques, cap)]
    else:
        columns = independent_sets(g, cap)
    return _decompose(columns, g.vertices, weights)


def reproduces(model: ClassicalModel, weights) -> bool:
    if sum(model.weights, Fraction(0)) != 1 or any(w < 0 for w in model.weights):
        return False
    return all(model.marginal(v) == x for v, x in weights.items())


def qstab_membership(c, g: OrthoGraph) -> bool:
    weights = c.weights if isinstance(c, Correlation) else {v: to_fraction(x) for v, x in c.items()}
    if any(x < 0 or x > 1 for x in weights.values()):
        return False
    return all(sum((weights.get(v, 0) for v in q), Fraction(0)) <= 1 for q in maximal_cliques(g))


def classical_state_from_colouring(ext: ExtendedScenario, col: Colouring):
    """Uniform mixture of the d colour classes, pushed down to the base scenario."""
    s, es = ext.base, ext.extended
    from .extension import extended_cliques, extended_graph
    g = extended_graph(ext)
    d = es.d
    if not is_d_colouring(g, extended_cliques(ext), d, col):
        raise InvalidColouring("not a d-colouring of the extended graph")
    fresh_to_base = {}
    for (a, _), atoms in ext.local_split.items():
        for x in atoms:
            fresh_to_base[x] = a
    mix = {}
    for k in range(d):
        cls = col.colour_class(k)
        base_val = frozenset(fresh_to_base[x] for x in cls)
        mix[base_val] = mix.get(base_val, Fraction(0)) + qdiv(1, d)
    order = sorted(mix, key=lambda v: sorted(v))
    model = ClassicalModel(tuple(order), tuple(mix[v] for v in order))
    probs = {}
    for i, ctx in enumerate(s.max_contexts):
        probs[i] = {a: model.marginal(a) for a in ctx}
    st = State.build(s, probs)
    assert check_no_disturbance(st)
    return st, model


def _first_primes(k):
    out = []
    n = 2
    while len(out) < k:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out


def separable_events(s: Scenario):
    """(name, context index, atoms) for every atom and declared event, one per name."""
    out = []
    for name in s.all_names():
        i = s.contexts_of(name)[0] if s.is_atom(name) else next(
            k for k in range(s.n_contexts) if s.rep(name, k) is not None)
        out.append((name, i, s.rep(name, i)))
    return out


def separating_classical_state(s: Scenario, cap=DEFAULT_VALUATION_CAP):
    """A classical state giving distinct nonzero values to distinct events, or None.

    Valuations are mixed with weights proportional to primes, then squared
    primes, then powers of two (which separate any two events with different
    valuation supports).
    """
    from .ks_decision import is_ks_contextual
    if s.n_contexts == 0:
        return None
    if is_ks_contextual(s).contextual:
        return None
    g = exclusivity_graph(s)
    vals = [v.chosen for v in enumerate_valuations(g, context_cliques(s), cap)]
    if not vals:
        return None
    events = separable_events(s)
    supports = [frozenset(k for k, v in enumerate(vals) if v & atoms) for _, _, atoms in events]
    if len(set(supports)) != len(supports) or any(not sup for sup in supports):
        return None
    primes = _first_primes(len(vals))
    schemes = [primes, [p * p for p in primes], [2 ** k for k in range(len(vals))]]
    for raw in schemes:
        total = sum(raw)
        weights = [qdiv(x, total) for x in raw]
        values = [sum((weights[k] for k in sup), Fraction(0)) for sup in supports]
        if len(set(values)) == len(values) and all(values):
            model = ClassicalModel(tuple(vals), tuple(weights))
            probs = {i: {a: model.marginal(a) for a in ctx} for i, ctx in enumerate(s.max_contexts)}
            return State.build(s, probs), model
    return None


def is_separating(st: State) -> bool:
    s = st.scenario
    values = [st.value(i, atoms) for _, i, atoms in separable_events(s)]
    return all(values) and len(set(values)) == len(values)


def functional_value(st: State, functional):
    """Sum of coefficient * probability over (context index, atom) entries."""
    total = Fraction(0)
    for (i, a), coeff in functional.items():
        total += to_fraction(coeff) * st.probs[i][a]
    return total


def classical_maximum(s: Scenario, functional, cap=DEFAULT_VALUATION_CAP):
    vals = enumerate_valuations(exclusivity_graph(s), context_cliques(s), cap)
    if not vals:
        raise CapExceeded(cap, "scenario has no valuations; classical maximum undefined")
    best = None
    for v in vals:
        x = sum((to_fraction(c) for (i, a), c in functional.items() if a in v.chosen), Fraction(0))
        best = x if best is None or x > best else best
    return best


def classical_maximum_lp(s: Scenario, functional, cap=DEFAULT_VALUATION_CAP):
    """Same maximum, computed as an LP over the convex hull of valuations."""
    vals = enumerate_valuations(exclusivity_graph(s), context_cliques(s), cap)
    gains = [sum((to_fraction(c) for (i, a), c in functional.items() if a in v.chosen), Fraction(0))
             for v in vals]
    res = exact_lp.solve(gains, [[1] * len(vals)], [1], maximize=True)
    return res.value


def evaluate_functional(st: State, functional, cap=DEFAULT_VALUATION_CAP):
    """(value on st, classical maximum). Keys are (context index, atom) pairs."""
    return functional_value(st, functional), classical_maximum(st.scenario, functional, cap)


def parse_functional(s: Scenario, obj):
    """Sparse JSON {context key: {atom: coefficient}} to {(index, atom): Fraction}."""
    out = {}
    for key, coeffs in obj.items():
        i = s.context_index(key)
        for a, c in coeffs.items():
            if a not in s.context_set(i):
                raise ValueError(f"atom {a} is not in context {key}")
            out[(i, a)] = to_fraction(c)
    return out


def functional_to_json(s: Scenario, functional):
    out = {}
    for (i, a), c in sorted(functional.items()):
        out.setdefault(s.context_key(i), {})[a] = fraction_str(c)
    return out


def valuation_state(s: Scenario, val: Valuation):
    return State.build(s, {i: {a: int(a in val.chosen) for a in c} for i, c in enumerate(s.max_contexts)})
