"""Built-in scenarios, vector sets and seeded generators."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra_core import Scenario, is_consistent_algebra
from .errors import InvalidOverlap, NonClosing
from .realization import complete, graph_from_vectors, scenario_from_realisation

SIGNS = ("+", "-")


@dataclass(frozen=True)
class EmbeddingTable:
    lambda_points: tuple
    event_supports: dict = field(hash=False)  # named event -> frozenset of lambda points

    def to_json(self):
        return {"lambda_points": list(self.lambda_points),
                "event_supports": {k: sorted(v) for k, v in sorted(self.event_supports.items())}}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["lambda_points"]), {k: frozenset(v) for k, v in obj["event_supports"].items()})


# ---------------------------------------------------------------- CHSH

def _chsh_atom(i, j, a, b):
    return f"A{i}B{j}:{a}{b}"


def chsh_scenario():
    """Four joint-measurement contexts A_iB_j with the single-party outcomes as shared events."""
    contexts = []
    events = {}
    for i, j in itertools.product((0, 1), repeat=2):
        contexts.append([_chsh_atom(i, j, a, b) for a in SIGNS for b in SIGNS])
    for i in (0, 1):
        for a in SIGNS:
            events[f"A{i}{a}"] = [[_chsh_atom(i, j, a, b) for b in SIGNS] for j in (0, 1)]
    for j in (0, 1):
        for b in SIGNS:
            events[f"B{j}{b}"] = [[_chsh_atom(i, j, a, b) for a in SIGNS] for i in (0, 1)]
    dims = {x: 1 for c in contexts for x in c}
    return Scenario(contexts, None, dims, 4, events)


_LAMBDA = (-2, -1, 1, 2)


def _response(setting, lam):
    # setting 0: sign of lambda; setting 1: + on {-1, 1}, - on {-2, 2}
    if setting == 0:
        return "+" if lam > 0 else "-"
    return "+" if abs(lam) == 1 else "-"


def chsh():
    """CHSH scenario and its classical embedding over Lambda = Lambda_A x Lambda_B (16 points)."""
    s = chsh_scenario()
    points = [f"{la},{lb}" for la in _LAMBDA for lb in _LAMBDA]
    supports = {}
    for i, j in itertools.product((0, 1), repeat=2):
        for a in SIGNS:
            for b in SIGNS:
                supports[_chsh_atom(i, j, a, b)] = frozenset(
                    f"{la},{lb}" for la in _LAMBDA for lb in _LAMBDA
                    if _response(i, la) == a and _response(j, lb) == b)
    for i in (0, 1):
        for a in SIGNS:
            supports[f"A{i}{a}"] = frozenset(f"{la},{lb}" for la in _LAMBDA for lb in _LAMBDA if _response(i, la) == a)
    for j in (0, 1):
        for b in SIGNS:
            supports[f"B{j}{b}"] = frozenset(f"{la},{lb}" for la in _LAMBDA for lb in _LAMBDA if _response(j, lb) == b)
    return s, EmbeddingTable(tuple(points), supports)


def chsh_event_functional(s=None):
    """Indicator of s_A s_B = s_A s'_B = s'_A s_B = 1 and s'_A s'_B = -1, summed over the four contexts."""
    s = s or chsh_scenario()
    out = {}
    for i, j in itertools.product((0, 1), repeat=2):
        ci = s.context_index([_chsh_atom(i, j, a, b) for a in SIGNS for b in SIGNS])
        anti = i == 1 and j == 1
        for a, b in itertools.product(SIGNS, repeat=2):
            if (a == b) != anti:
                out[(ci, _chsh_atom(i, j, a, b))] = Fraction(1)
    return out


def pr_box(s=None):
    """Popescu-Rohrlich box: each CHSH event holds with certainty, split evenly."""
    from .correlations import State
    s = s or chsh_scenario()
    probs = {}
    for i, j in itertools.product((0, 1), repeat=2):
        anti = i == 1 and j == 1
        atoms = [_chsh_atom(i, j, a, b) for a in SIGNS for b in SIGNS]
        probs[s.context_index(atoms)] = {
            _chsh_atom(i, j, a, b): Fraction(1, 2) if (a == b) != anti else Fraction(0)
            for a, b in itertools.product(SIGNS, repeat=2)}
    return State.build(s, probs)


TSIRELSON_EVENT_APPROX = Fraction(853, 1000)


def tsirelson_demo(s=None):
    """Rational stand-in for the optimal quantum CHSH statistics.

    Each CHSH event gets probability 853/1000 (an approximation of cos^2(pi/8));
    returns (state, {"approx": True}).
    """
    from .correlations import State
    s = s or chsh_scenario()
    p = TSIRELSON_EVENT_APPROX
    probs = {}
    for i, j in itertools.product((0, 1), repeat=2):
        anti = i == 1 and j == 1
        atoms = [_chsh_atom(i, j, a, b) for a in SIGNS for b in SIGNS]
        probs[s.context_index(atoms)] = {
            _chsh_atom(i, j, a, b): (p if (a == b) != anti else 1 - p) * Fraction(1, 2)
            for a, b in itertools.product(SIGNS, repeat=2)}
    return State.build(s, probs), {"approx": True}


def product_state(s=None, pa=(Fraction(1, 2), Fraction(1, 3)), pb=(Fraction(1, 4), Fraction(2, 3))):
    """Independent local statistics; pa[i], pb[j] are the probabilities of outcome +."""
    from .correlations import State
    s = s or chsh_scenario()
    probs = {}
    for i, j in itertools.product((0, 1), repeat=2):
        atoms = [_chsh_atom(i, j, a, b) for a in SIGNS for b in SIGNS]
        qa = {"+": pa[i], "-": 1 - pa[i]}
        qb = {"+": pb[j], "-": 1 - pb[j]}
        probs[s.context_index(atoms)] = {_chsh_atom(i, j, a, b): qa[a] * qb[b] for a in SIGNS for b in SIGNS}
    return State.build(s, probs)


def verify_embedding(s: Scenario, e: EmbeddingTable) -> bool:
    """Partition per context, faithful (distinct nonempty supports), consistent shared events."""
    points = set(e.lambda_points)
    if len(points) != len(e.lambda_points):
        return False
    sup = e.event_supports
    if any(a not in sup for a in s.atoms):
        return False
    atom_sups = [sup[a] for a in s.atoms]
    if any(not x or not x <= points for x in atom_sups):
        return False
    if len(set(atom_sups)) != len(atom_sups):
        return False
    for c in s.max_contexts:
        covered = [sup[a] for a in c]
        if sum(len(x) for x in covered) != len(points) or frozenset().union(*covered) != points:
            return False
    for name in s.events:
        reps = [s.rep(name, i) for i in range(s.n_contexts) if s.rep(name, i) is not None]
        unions = {frozenset().union(*(sup[a] for a in r)) for r in reps}
        if len(unions) != 1:
            return False
        if name in sup and unions != {sup[name]}:
            return False
    return True


# ---------------------------------------------------------------- Yu-Oh

YU_OH_13 = {
    "z1": (1, 0, 0), "z2": (0, 1, 0), "z3": (0, 0, 1),
    "y1+": (0, 1, 1), "y2+": (1, 0, 1), "y3+": (1, 1, 0),
    "y1-": (0, 1, -1), "y2-": (1, 0, -1), "y3-": (1, -1, 0),
    "h0": (1, 1, 1), "h1": (-1, 1, 1), "h2": (1, -1, 1), "h3": (1, 1, -1),
}

X0 = {"x01": (-2, 1, 1), "x02": (1, -2, 1), "x03": (1, 1, -2)}


def yu_oh(variant=13):
    """Labelled Yu-Oh vectors; variant 15 replaces h0 by x01, x02, x03."""
    if variant == 13:
        return dict(YU_OH_13)
    if variant == 15:
        out = {k: v for k, v in YU_OH_13.items() if k != "h0"}
        out.update(X0)
        return out
    raise ValueError("variant must be 13 or 15")


def yu_oh_completion(variant=13):
    g, r = graph_from_vectors(yu_oh(variant))
    return complete(r, g)


def yu_oh_scenario(variant=13):
    """Completed Yu-Oh realisation as a scenario (16 triangles for the 13-vector set)."""
    g, r = yu_oh_completion(variant)
    return scenario_from_realisation(g, r)


# ---------------------------------------------------------------- parametric

def n_cycle(n, d, overlap_sizes=None):
    """Contexts C_0..C_{n-1} of d unit atoms; C_i and C_{i+1} share overlap_sizes[i] atoms."""
    if n < 3 or d < 2:
        raise InvalidOverlap("need n >= 3 and d >= 2")
    sizes = [1] * n if overlap_sizes is None else list(overlap_sizes)
    if len(sizes) != n or any(k < 0 for k in sizes):
        raise InvalidOverlap("overlap_sizes must list n nonnegative sizes")
    contexts = []
    for i in range(n):
        left, right = sizes[i - 1], sizes[i]
        private = d - left - right
        if private < 0:
            raise InvalidOverlap(f"context {i} cannot hold overlaps {left}+{right} in dimension {d}")
        prev = (i - 1) % n
        atoms = [f"s{prev}.{i % n}:{k}" if prev < i else f"s{i}.{prev}:{k}" for k in range(left)]
        nxt = (i + 1) % n
        atoms += [f"s{i}.{nxt}:{k}" if i < nxt else f"s{nxt}.{i}:{k}" for k in range(right)]
        atoms += [f"c{i}:{k}" for k in range(private)]
        contexts.append(atoms)
    return Scenario(contexts, None, {x: 1 for c in contexts for x in c}, d)


def acyclic_random(k, d, seed=0):
    """k contexts of d fresh unit atoms each; no two contexts overlap."""
    rng = random.Random(seed)
    tags = rng.sample(range(10 * k + 10), k)
    contexts = [[f"m{t}:{j}" for j in range(d)] for t in tags]
    return Scenario(contexts, None, {x: 1 for c in contexts for x in c}, d)


def single_context(k):
    atoms = [f"a{i}" for i in range(k)]
    return Scenario([atoms], None, {a: 1 for a in atoms}, k)


def two_solution_gadget():
    """A three-outcome measurement coarse-grained to two outcomes pt1, pt2 that
    no other context touches, next to a chain of three-outcome contexts fixing d = 3.

    At d = 3 the coarse atoms admit the dimension assignments (1, 2) and (2, 1).
    """
    return Scenario([["pt1", "pt2"], ["q1", "q2", "q3"], ["q1", "r1", "r2"]])


def forced_zero_gadget():
    """Contexts {a, b} and {a, b, c}: c is forced to have dimension 0."""
    from .ortho_graph import OrthoGraph
    g = OrthoGraph(["a", "b", "c"], [("a", "b"), ("a", "c"), ("b", "c")])
    return g, [("a", "b"), ("a", "b", "c")]


def odd_cycle_contexts(n=3):
    """n two-atom contexts arranged in a cycle: no valuation exists for odd n."""
    contexts = [[f"e{i}", f"e{(i + 1) % n}"] for i in range(n)]
    return Scenario(contexts, None, {f"e{i}": 1 for i in range(n)}, 2)


def specker_violating_triangle():
    """Pairwise-overlapping contexts {x,y,u}, {y,z,v}, {x,z,w}: x, y, z pairwise
    compatible without a common context."""
    return Scenario([["x", "y", "u"], ["y", "z", "v"], ["x", "z", "w"]])


# ---------------------------------------------------------------- random

def random_maximal_scenario(rng, max_contexts=5, max_d=4, event_prob=Fraction(1, 3), consistent=True):
    """Random scenario whose contexts all hold d unit atoms; some get coarse events.

    With ``consistent`` the result also passes ``is_consistent_algebra``.
    """
    for _ in range(1000):
        d = rng.randint(2, max_d)
        m = rng.randint(2, max_contexts)
        pool = [f"a{i}" for i in range(rng.randint(d, d * m))]
        contexts = set()
        for _ in range(m):
            shared = rng.randint(0, min(d, len(pool)))
            picked = rng.sample(pool, shared)
            fresh = [f"p{len(contexts)}_{k}" for k in range(d - shared)]
            contexts.add(tuple(sorted(picked + fresh)))
        contexts = sorted(contexts)
        if len(contexts) < 2:
            continue
        events = {}
        if rng.randrange(event_prob.denominator) < event_prob.numerator:
            events = _random_events(rng, contexts, d)
        try:
            s = Scenario(contexts, None, {x: 1 for c in contexts for x in c}, d, events)
        except Exception:
            continue
        if not consistent or is_consistent_algebra(s):
            return s
    raise RuntimeError("random generator failed")


def _random_events(rng, contexts, d):
    counts = {}
    for c in contexts:
        for a in c:
            counts[a] = counts.get(a, 0) + 1
    private = [[a for a in c if counts[a] == 1] for c in contexts]
    events = {}
    for e in range(rng.randint(1, 2)):
        size = rng.randint(1, d - 1)
        holders = [i for i, p in enumerate(private) if len(p) >= size]
        if len(holders) < 2:
            break
        chosen = rng.sample(holders, rng.randint(2, min(3, len(holders))))
        reps = []
        for i in chosen:
            pick = rng.sample(private[i], size)
            reps.append(sorted(pick))
            private[i] = [a for a in private[i] if a not in pick]
        events[f"E{e}"] = reps
    return events


def random_chordal_scenario(rng, max_contexts=4, max_d=3):
    """Contexts grown as a tree: each new context shares a proper subset of one
    earlier context's atoms and otherwise uses fresh atoms (acyclic by construction)."""
    m = rng.randint(1, max_contexts)
    contexts = []
    counter = itertools.count()
    for i in range(m):
        d = rng.randint(2, max_d)
        if contexts:
            parent = rng.choice(contexts)
            k = rng.randint(0, min(len(parent), d) - 1)
            shared = rng.sample(parent, k)
        else:
            shared = []
        contexts.append(sorted(shared + [f"t{next(counter)}" for _ in range(d - len(shared))]))
    uniq = []
    for c in contexts:
        if not any(set(c) <= set(o) or set(o) <= set(c) for o in uniq):
            uniq.append(c)
    return Scenario(uniq)


def random_no_disturbance_state(rng, s: Scenario, denominator=12):
    """Random exact state on a tree-shaped scenario, built by gluing along shared atoms."""
    from .correlations import State
    probs = {}
    fixed = {}
    for i, ctx in enumerate(s.max_contexts):
        known = [a for a in ctx if a in fixed]
        rest = [a for a in ctx if a not in fixed]
        mass = 1 - sum((fixed[a] for a in known), Fraction(0))
        if mass < 0:
            raise ValueError("scenario is not tree-shaped in the generator's order")
        dist = {a: fixed[a] for a in known}
        if rest:
            cuts = sorted(rng.randint(0, denominator) for _ in range(len(rest) - 1))
            parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
            for a, p in zip(rest, parts):
                dist[a] = mass * Fraction(p, denominator)
                fixed[a] = dist[a]
        elif mass != 0:
            raise ValueError("no free atoms left to absorb the remaining mass")
        probs[i] = dist
    return State.build(s, probs)


def random_vectors(rng, d=3, count=6, entries=(-1, 0, 1, 2)):
    """Distinct random rays with small integer entries."""
    from .realization import RationalVector
    out = {}
    seen = set()
    while len(out) < count:
        v = tuple(rng.choice(entries) for _ in range(d))
        if not any(v):
            continue
        ray = RationalVector.of(v)
        if ray in seen:
            continue
        seen.add(ray)
        out[f"v{len(out)}"] = ray.coords
    return out


def random_vector_scenario(rng, d=3, min_count=6, max_count=12, entries=(-1, 0, 1)):
    """Scenario of a completed random rank-one realisation.

    Retries when completion runs long, and when an early rank-two complement
    survives next to rays that later split it (the context list then names
    one projection twice).
    """
    for _ in range(100):
        vecs = random_vectors(rng, d, rng.randint(min_count, max_count), entries)
        g, r = graph_from_vectors(vecs, d)
        try:
            g, r = complete(r, g, max_rounds=4)
        except NonClosing:
            continue
        s = scenario_from_realisation(g, r)
        if is_consistent_algebra(s):
            return s
    raise RuntimeError("random generator failed")


# ---------------------------------------------------------------- registry

def _yu_oh_vectors_json(variant):
    return {"d": 3, "vectors": {k: list(v) for k, v in yu_oh(variant).items()}}


CATALOG = {
    "chsh": lambda: chsh_scenario().to_json(),
    "chsh_embedding": lambda: chsh()[1].to_json(),
    "yu_oh13": lambda: yu_oh_scenario(13).to_json(),
    "yu_oh13_vectors": lambda: _yu_oh_vectors_json(13),
    "yu_oh15_vectors": lambda: _yu_oh_vectors_json(15),
    "n_cycle5_d3": lambda: n_cycle(5, 3).to_json(),
    "n_cycle4_d4_chsh_shape": lambda: n_cycle(4, 4, [2, 2, 2, 2]).to_json(),
    "acyclic_k3_d3": lambda: acyclic_random(3, 3, 0).to_json(),
    "single_context3": lambda: single_context(3).to_json(),
    "odd_cycle3": lambda: odd_cycle_contexts(3).to_json(),
    "two_solution_gadget": lambda: two_solution_gadget().to_json(),
    "specker_violating_triangle": lambda: specker_violating_triangle().to_json(),
}


def catalog_scenarios():
    """Every built-in scenario object (used by invariance suites)."""
    return {
        "chsh": chsh_scenario(),
        "yu_oh13": yu_oh_scenario(13),
        "n_cycle5_d3": n_cycle(5, 3),
        "n_cycle4_d4_chsh_shape": n_cycle(4, 4, [2, 2, 2, 2]),
        "acyclic_k3_d3": acyclic_random(3, 3, 0),
        "single_context3": single_context(3),
        "odd_cycle3": odd_cycle_contexts(3),
        "two_solution_gadget": two_solution_gadget(),
        "specker_violating_triangle": specker_violating_triangle(),
    }


def export(name):
    if name not in CATALOG:
        raise KeyError(f"unknown catalog entry {name!r}; choose from {sorted(CATALOG)}")
    return CATALOG[name]()
