"""Maximal extensions: every atom of dimension k inside context C is replaced by
k fresh unit atoms that belong to C alone.

Atoms of dimension one keep their label and stay shared. A shared atom of
higher dimension becomes a declared event whose representation in each context
is that context's fresh atoms, so the sharing survives the split.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra_core import Scenario, context_cliques, context_hash, exclusivity_graph
from .errors import NoDimensionFunction


@dataclass(frozen=True)
class ExtendedScenario:
    base: Scenario
    extended: Scenario
    split_map: dict = field(hash=False)  # base atom -> all fresh atoms, context by context
    local_split: dict = field(hash=False)  # (base atom, context index) -> fresh atoms in that context

    @property
    def d(self):
        return self.extended.d

    def lift(self, atom, ctx_index):
        return self.local_split[(atom, ctx_index)]

    def base_atom(self, fresh):
        for (a, _), atoms in self.local_split.items():
            if fresh in atoms:
                return a
        raise KeyError(fresh)

    def to_json(self):
        out = self.extended.to_json()
        out["split_map"] = {a: list(v) for a, v in sorted(self.split_map.items())}
        return out


def fresh_label(atom, i, ctx_atoms):
    return f"{atom}#{i}@{context_hash(ctx_atoms)}"


def maximal_extension(s: Scenario) -> ExtendedScenario:
    if s.dim is None:
        raise NoDimensionFunction("maximal_extension needs a dimension function")
    contexts = []
    local = {}
    split = {a: [] for a in s.atoms}
    for ci, ctx in enumerate(s.max_contexts):
        new = []
        for a in ctx:
            k = s.dim[a]
            atoms = (a,) if k == 1 else tuple(fresh_label(a, j, ctx) for j in range(k))
            local[(a, ci)] = atoms
            new.extend(atoms)
            for x in atoms:
                if x not in split[a]:
                    split[a].append(x)
        contexts.append(new)
    events = {}
    for name, reps in s.events.items():
        out = []
        for ci in range(s.n_contexts):
            r = s.rep(name, ci)
            if r is not None:
                out.append(sorted(x for a in r for x in local[(a, ci)]))
        events[name] = out
    for a in s.atoms:
        holders = s.contexts_of(a)
        if s.dim[a] > 1 and len(holders) > 1:
            events[a] = [list(local[(a, ci)]) for ci in holders]
    ext = Scenario(contexts, None, {x: 1 for c in contexts for x in c}, s.d, events)
    return ExtendedScenario(s, ext, {a: tuple(v) for a, v in split.items()}, local)


def extended_graph(e: ExtendedScenario):
    return exclusivity_graph(e.extended)


def extended_cliques(e: ExtendedScenario):
    return context_cliques(e.extended)
