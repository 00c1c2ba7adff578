"""Finite observable algebras given by maximal contexts over labelled atoms.

A scenario lists its maximal contexts as sets of atoms. Atoms shared between
contexts are shared events. Coarser shared events (for instance single-party
outcomes inside joint-outcome contexts) are declared under ``events``: each
event has one representation per context in which it occurs, namely the set
of that context's atoms below it.

The context category works with *named-event sets*: the maximal element for
context C is N(C) = atoms(C) together with the events occurring in C. For
scenarios without declared events this is just the atom set.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import defaultdict

from .errors import MalformedScenario, NoDimensionFunction
from .ortho_graph import OrthoGraph, is_chordal, maximal_cliques


class Scenario:
    """Immutable, validated scenario in canonical (sorted) form."""

    __slots__ = ("atoms", "max_contexts", "dim", "d", "events", "_ctx_sets", "_named", "_reps", "_atom_ctx")

    def __init__(self, max_contexts, atoms=None, dim=None, d=None, events=None):
        ctxs = []
        for c in max_contexts:
            c = list(c)
            if not c:
                raise MalformedScenario("empty context")
            if len(set(c)) != len(c):
                raise MalformedScenario(f"repeated atom in context {c}")
            ctxs.append(tuple(sorted(c)))
        ctxs.sort()
        for a, b in itertools.combinations(ctxs, 2):
            if set(a) <= set(b) or set(b) <= set(a):
                raise MalformedScenario(f"contexts {list(a)} and {list(b)} are not an antichain")
        covered = set().union(*map(set, ctxs)) if ctxs else set()
        atoms = sorted(covered if atoms is None else atoms)
        if len(set(atoms)) != len(atoms):
            raise MalformedScenario("duplicate atom labels")
        if set(atoms) != covered:
            missing = sorted(set(atoms) - covered)
            extra = sorted(covered - set(atoms))
            raise MalformedScenario(f"atoms without context {missing}, undeclared atoms {extra}")
        ctx_sets = [frozenset(c) for c in ctxs]

        if dim is not None:
            if set(dim) != set(atoms):
                raise MalformedScenario("dimension function must be keyed by exactly the atoms")
            dim = {a: dim[a] for a in atoms}
            for a, k in dim.items():
                if isinstance(k, bool) or not isinstance(k, int) or k < 1:
                    raise MalformedScenario(f"dim({a}) must be a positive integer")
            sums = {sum(dim[a] for a in c) for c in ctxs}
            if d is None and sums:
                d = min(sums)
            if any(s != d for s in sums):
                raise MalformedScenario(f"context dimensions {sorted(sums)} do not all equal d={d}")
        if d is not None and (isinstance(d, bool) or not isinstance(d, int) or d < 1):
            raise MalformedScenario("d must be a positive integer")

        evs = {}
        for name, reps in sorted((events or {}).items()):
            if name in covered:
                raise MalformedScenario(f"event name {name!r} collides with an atom")
            canon = sorted({tuple(sorted(r)) for r in reps})
            for r in canon:
                if not r:
                    raise MalformedScenario(f"event {name!r} has an empty representation")
                homes = [i for i, c in enumerate(ctx_sets) if set(r) <= c]
                if not homes:
                    raise MalformedScenario(f"event {name!r} representation {list(r)} lies in no context")
                if any(set(r) == ctx_sets[i] for i in homes):
                    raise MalformedScenario(f"event {name!r} is the identity of a context")
            evs[name] = tuple(canon)

        named = []
        reps_by_ctx = []
        for i, c in enumerate(ctx_sets):
            n = set(c)
            rep = {a: frozenset((a,)) for a in c}
            for name, reps in evs.items():
                inside = [frozenset(r) for r in reps if set(r) <= c]
                if len(inside) > 1:
                    raise MalformedScenario(f"event {name!r} has two representations in context {ctxs[i]}")
                if inside:
                    n.add(name)
                    rep[name] = inside[0]
            named.append(frozenset(n))
            reps_by_ctx.append(rep)

        for name in evs:
            holders = [i for i in range(len(ctxs)) if name in reps_by_ctx[i]]
            if len(holders) < 1:
                raise MalformedScenario(f"event {name!r} occurs in no context")
            for i, j in itertools.combinations(holders, 2):
                shared = ctx_sets[i] & ctx_sets[j]
                if reps_by_ctx[i][name] & shared != reps_by_ctx[j][name] & shared:
                    raise MalformedScenario(
                        f"event {name!r} disagrees on shared atoms of {ctxs[i]} and {ctxs[j]}")
                if dim is not None:
                    di = sum(dim[a] for a in reps_by_ctx[i][name])
                    dj = sum(dim[a] for a in reps_by_ctx[j][name])
                    if di != dj:
                        raise MalformedScenario(f"event {name!r} has dimension {di} in one context and {dj} in another")

        atom_ctx = defaultdict(list)
        for i, c in enumerate(ctxs):
            for a in c:
                atom_ctx[a].append(i)

        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "max_contexts", tuple(ctxs))
        object.__setattr__(self, "dim", dict(dim) if dim is not None else None)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "events", evs)
        object.__setattr__(self, "_ctx_sets", tuple(ctx_sets))
        object.__setattr__(self, "_named", tuple(named))
        object.__setattr__(self, "_reps", tuple(reps_by_ctx))
        object.__setattr__(self, "_atom_ctx", {a: tuple(v) for a, v in atom_ctx.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Scenario is immutable")

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.max_contexts, tuple(sorted(self.events))))

    def __repr__(self):
        return f"Scenario(atoms={len(self.atoms)}, contexts={len(self.max_contexts)}, d={self.d})"

    # -- queries --------------------------------------------------------
    @property
    def n_contexts(self):
        return len(self.max_contexts)

    def context_set(self, i):
        return self._ctx_sets[i]

    def named(self, i):
        """Named events occurring in context i (its atoms plus declared events)."""
        return self._named[i]

    def rep(self, name, i):
        """Atoms of context i below the named event, or None if it does not occur there."""
        return self._reps[i].get(name)

    def contexts_of(self, atom):
        return self._atom_ctx[atom]

    def is_atom(self, name):
        return name in self._atom_ctx

    def event_names(self):
        return tuple(self.events)

    def all_names(self):
        return self.atoms + tuple(self.events)

    def context_key(self, i):
        return "|".join(self.max_contexts[i])

    def context_index(self, key_or_atoms):
        if isinstance(key_or_atoms, str):
            key_or_atoms = key_or_atoms.split("|")
        target = tuple(sorted(key_or_atoms))
        return self.max_contexts.index(target)

    def dim_of(self, atoms):
        if self.dim is None:
            raise NoDimensionFunction("scenario has no dimension function")
        return sum(self.dim[a] for a in atoms)

    def is_maximal(self):
        return self.dim is not None and all(k == 1 for k in self.dim.values())

    def with_dims(self, dim, d):
        return Scenario(self.max_contexts, self.atoms, dim, d, self.events_json())

    def events_json(self):
        return {k: [list(r) for r in v] for k, v in self.events.items()}

    def to_json(self):
        out = {"atoms": list(self.atoms), "max_contexts": [list(c) for c in self.max_contexts]}
        if self.dim is not None:
            out["dim"] = {a: self.dim[a] for a in self.atoms}
        if self.d is not None:
            out["d"] = self.d
        if self.events:
            out["events"] = self.events_json()
        return out

    @classmethod
    def from_json(cls, obj):
        if "max_contexts" not in obj:
            raise MalformedScenario("scenario JSON needs 'max_contexts'")
        return cls(obj["max_contexts"], obj.get("atoms"), obj.get("dim"), obj.get("d"), obj.get("events"))


def context_hash(atoms):
    return hashlib.sha256("|".join(sorted(atoms)).encode()).hexdigest()[:8]


def context_cliques(s: Scenario):
    return [tuple(c) for c in s.max_contexts]


def exclusivity_graph(s: Scenario) -> OrthoGraph:
    """Atoms, adjacent when they can never both occur.

    Co-context atoms are exclusive. For a declared event E occurring in C and
    C', an atom below E in C excludes every atom of C' not below E.
    """
    edges = set()
    for c in s.max_contexts:
        for a, b in itertools.combinations(c, 2):
            edges.add(frozenset((a, b)))
    for name in s.events:
        holders = [i for i in range(s.n_contexts) if s.rep(name, i) is not None]
        for i, j in itertools.permutations(holders, 2):
            inside = s.rep(name, i)
            outside = s.context_set(j) - s.rep(name, j)
            for p in inside:
                for q in outside:
                    if p != q:
                        edges.add(frozenset((p, q)))
    return OrthoGraph(s.atoms, edges)


def compatibility_graph(s: Scenario) -> OrthoGraph:
    """Named events, adjacent when some maximal context contains both."""
    edges = set()
    for i in range(s.n_contexts):
        for a, b in itertools.combinations(sorted(s.named(i)), 2):
            edges.add(frozenset((a, b)))
    return OrthoGraph(s.all_names(), edges)


class ContextCategory:
    """Inclusion-ordered family of named-event sets, tied to its scenario."""

    __slots__ = ("elements", "scenario")

    def __init__(self, elements, scenario):
        uniq = {frozenset(e) for e in elements}
        object.__setattr__(self, "elements", tuple(sorted(uniq, key=lambda e: (len(e), sorted(e)))))
        object.__setattr__(self, "scenario", scenario)

    def __setattr__(self, name, value):
        raise AttributeError("ContextCategory is immutable")

    def __eq__(self, other):
        return isinstance(other, ContextCategory) and set(self.elements) == set(other.elements)

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return frozenset(item) in set(self.elements)

    def __repr__(self):
        return f"ContextCategory({len(self.elements)} elements)"

    @property
    def has_least(self):
        return bool(self.elements) and not self.elements[0]

    @property
    def least(self):
        return self.elements[0] if self.has_least else None

    def maximal(self):
        return [e for e in self.elements if not any(e < f for f in self.elements)]

    def minimal_nontrivial(self):
        nt = [e for e in self.elements if e]
        return [e for e in nt if not any(f < e for f in nt)]

    def covers(self):
        """Hasse diagram as index pairs (lower, upper)."""
        els = self.elements
        out = []
        for i, a in enumerate(els):
            for j, b in enumerate(els):
                if a < b and not any(a < c < b for c in els):
                    out.append((i, j))
        return out

    def is_intersection_closed(self):
        s = set(self.elements)
        return all((a & b) in s for a, b in itertools.combinations(self.elements, 2))

    def to_json(self):
        return {
            "elements": [sorted(e) for e in self.elements],
            "order": [list(p) for p in self.covers()],
            "maximal": [sorted(e) for e in self.maximal()],
        }


def build_context_category(s: Scenario) -> ContextCategory:
    elements = {s.named(i) for i in range(s.n_contexts)}
    frontier = set(elements)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in elements:
                c = a & b
                if c not in elements:
                    fresh.add(c)
        elements |= fresh
        frontier = fresh
    elements.add(frozenset())
    return ContextCategory(elements, s)


def truncate(cc: ContextCategory) -> ContextCategory:
    return ContextCategory([e for e in cc.elements if e], cc.scenario)


def _hypergraph_graph(hyperedges):
    names = sorted(set().union(*hyperedges)) if hyperedges else []
    edges = set()
    for h in hyperedges:
        for a, b in itertools.combinations(sorted(h), 2):
            edges.add(frozenset((a, b)))
    return OrthoGraph(names, edges)


def is_acyclic(cc: ContextCategory) -> bool:
    """Chordal compatibility graph whose maximal cliques each sit inside a context."""
    hyper = [e for e in cc.maximal() if e]
    g = _hypergraph_graph(hyper)
    if not is_chordal(g):
        return False
    return all(any(set(q) <= h for h in hyper) for q in maximal_cliques(g))


def _prufer_trees(m):
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        degree = [1] * m
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(m) if degree[i] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(m) if degree[i] == 1]
        edges.append((u, v))
        yield edges


def _connected(nodes, edges):
    nodes = set(nodes)
    if len(nodes) <= 1:
        return True
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for u, v in edges:
            for a, b in ((u, v), (v, u)):
                if a == x and b in nodes and b not in seen:
                    seen.add(b)
                    stack.append(b)
    return seen == nodes


def acyclic_by_join_tree(cc: ContextCategory, max_contexts=8) -> bool:
    """Brute-force oracle: some spanning tree of the maximal contexts has the
    running-intersection property (each named event occupies a subtree)."""
    hyper = [e for e in cc.maximal() if e]
    m = len(hyper)
    if m > max_contexts:
        raise ValueError(f"join-tree oracle limited to {max_contexts} contexts")
    names = set().union(*hyper) if hyper else set()
    holders = {x: [i for i, h in enumerate(hyper) if x in h] for x in names}
    for tree in _prufer_trees(m) if m else [[]]:
        if all(_connected(h, [(u, v) for u, v in tree if u in h and v in h]) for h in map(set, holders.values())):
            return True
    return False


# ---------------------------------------------------------------- reductions

def _blocks(s: Scenario, i, names):
    """Atoms of context i grouped by which of ``names`` lie above them."""
    reps = [(n, s.rep(n, i)) for n in sorted(names)]
    groups = defaultdict(list)
    for a in s.max_contexts[i]:
        sig = frozenset(n for n, r in reps if a in r)
        groups[sig].append(a)
    return sorted(((sig, tuple(atoms)) for sig, atoms in groups.items()), key=lambda t: t[1])


def _generated(s: Scenario, i, names):
    """Named events of context i lying in the subalgebra generated by ``names``."""
    blocks = [set(b) for _, b in _blocks(s, i, names)]
    out = set()
    for e in s.named(i):
        r = s.rep(e, i)
        if all(b <= r or not (b & r) for b in blocks):
            out.add(e)
    return frozenset(out)


def normal_form(s: Scenario, names):
    """Canonical named-event set of the context generated by ``names``, or None."""
    names = frozenset(names)
    homes = [i for i in range(s.n_contexts) if names <= s.named(i)]
    if not homes:
        return None
    out = None
    for i in homes:
        g = _generated(s, i, names)
        out = g if out is None else out & g
    return out


def is_consistent_algebra(s: Scenario) -> bool:
    """Two necessary conditions for the contexts to come from one observable algebra.

    Every pairwise overlap of contexts must be a subalgebra: two contexts
    sharing all but one atom name the same complement twice, which would
    identify the leftover atoms. And no set of pairwise exclusive atoms may
    carry more than d dimensions. Such scenarios are accepted as input but
    fall outside the reduction lemmas.
    """
    for i, j in itertools.combinations(range(s.n_contexts), 2):
        shared = s.named(i) & s.named(j)
        if _generated(s, i, shared) != shared or _generated(s, j, shared) != shared:
            return False
    if s.dim is None or s.d is None:
        return True
    g = exclusivity_graph(s)
    return all(s.dim_of(c) <= s.d for c in maximal_cliques(g))


def downward_generated(cc: ContextCategory) -> ContextCategory:
    maxes = cc.maximal()
    keep = {a & b for a in maxes for b in maxes}
    els = [e for e in cc.elements if e in keep and (e or cc.has_least)]
    if cc.has_least:
        els.append(frozenset())
    return ContextCategory(els, cc.scenario)


def upward_generated(cc: ContextCategory) -> ContextCategory:
    s = cc.scenario
    els = set()
    for a, b in itertools.combinations_with_replacement(cc.minimal_nontrivial(), 2):
        nf = normal_form(s, a | b)
        if nf is not None and nf in cc:
            els.add(nf)
    if cc.has_least:
        els.add(frozenset())
    return ContextCategory(els, s)


def _dimensioned(s: Scenario) -> Scenario:
    if s.dim is not None:
        return s
    from .diophantine import scenario_with_dims
    return scenario_with_dims(s)


def coarse_grain(s: Scenario) -> Scenario:
    """Merge, inside each context, the atoms that no shared event tells apart."""
    s = _dimensioned(s)
    names_in = defaultdict(int)
    for i in range(s.n_contexts):
        for n in s.named(i):
            names_in[n] += 1
    contexts, dim, events = [], {}, defaultdict(list)
    for i in range(s.n_contexts):
        shared = frozenset(n for n in s.named(i) if names_in[n] > 1)
        labels = {}
        for _, block in _blocks(s, i, shared):
            label = block[0] if len(block) == 1 else "cg:" + "+".join(block)
            dim[label] = s.dim_of(block)
            for a in block:
                labels[a] = label
        contexts.append(sorted(set(labels.values())))
        for n in shared:
            if not s.is_atom(n):
                events[n].append(sorted({labels[a] for a in s.rep(n, i)}))
    return Scenario(contexts, None, dim, s.d, dict(events))


def category_scenario(cc: ContextCategory) -> Scenario:
    """Scenario whose maximal contexts are the maximal elements of ``cc``.

    Each maximal element becomes the Boolean algebra it generates inside a
    base context. Atoms named in the element keep their labels; the other
    blocks get fresh local labels, and named non-atom events become declared
    events.
    """
    s = _dimensioned(cc.scenario)
    built = {}
    events = defaultdict(set)
    dim = {}
    for m in cc.maximal():
        if not m:
            continue
        i = next(k for k in range(s.n_contexts) if m <= s.named(k))
        tag = context_hash(sorted(m))
        labels = {}
        for _, block in _blocks(s, i, m):
            if len(block) == 1 and block[0] in m:
                label = block[0]
            else:
                label = f"blk:{tag}:" + "+".join(block)
            dim[label] = s.dim_of(block)
            for a in block:
                labels[a] = label
        ctx = frozenset(labels.values())
        built.setdefault(ctx, set())
        for n in m:
            if n not in ctx:
                events[n].add(tuple(sorted({labels[a] for a in s.rep(n, i)})))
    ctxs = [c for c in built if not any(c < o for o in built)]
    keep = set().union(*ctxs) if ctxs else set()
    ev = {n: [list(r) for r in reps if set(r) <= keep and not any(set(r) == c for c in ctxs)]
          for n, reps in events.items()}
    ev = {n: r for n, r in ev.items() if r}
    return Scenario([sorted(c) for c in ctxs], None, {a: dim[a] for a in keep}, s.d, ev)

