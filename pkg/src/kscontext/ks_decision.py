"""KS contextuality verdicts.

The decision itself is a d-colouring search on the maximal extension. A flat
context connection search over the context-overlap graph serves as an
independent cross-check, and the classifier combines the verdict with
acyclicity.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field

from .algebra_core import (
    ContextCategory, Scenario, build_context_category, category_scenario, is_acyclic,
)
from .diophantine import scenario_with_dims
from .errors import TooLarge
from .extension import ExtendedScenario, extended_cliques, extended_graph, maximal_extension
from .ortho_graph import Colouring, chromatic_number, d_colouring_with_trace

FULLY_CLASSICAL = "FULLY_CLASSICAL"
NONCLASSICAL_CORRELATIONS = "KS_NONCONTEXTUAL_WITH_NONCLASSICAL_CORRELATIONS"
KS_CONTEXTUAL = "KS_CONTEXTUAL"


@dataclass
class KsVerdict:
    contextual: bool
    d: int
    witness: dict | None = None
    obstruction: dict | None = None
    extension: ExtendedScenario | None = field(default=None, repr=False)
    colouring: Colouring | None = field(default=None, repr=False)

    def to_json(self):
        out = {"contextual": self.contextual, "d": self.d}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        return out


def _trace_hash(g, d, nodes):
    blob = f"{g.digest()}|d={d}|nodes={nodes}".encode()
    return hashlib.sha256(blob).hexdigest()


def is_ks_contextual(s: Scenario) -> KsVerdict:
    if s.n_contexts == 0:
        return KsVerdict(False, s.d or 0, {"type": "d_colouring", "colouring": {}})
    s = scenario_with_dims(s)
    ext = maximal_extension(s)
    g = extended_graph(ext)
    col, nodes = d_colouring_with_trace(g, extended_cliques(ext), s.d)
    if col is not None:
        return KsVerdict(False, s.d, {"type": "d_colouring", "colouring": col.to_json()},
                         extension=ext, colouring=col)
    obstruction = {
        "chi_lower_bound": s.d + 1,
        "search_nodes": nodes,
        "trace_hash": _trace_hash(g, s.d, nodes),
    }
    return KsVerdict(True, s.d, None, obstruction, extension=ext)


def verdict_of_category(cc: ContextCategory) -> bool:
    """Contextuality of the algebra whose maximal contexts are cc's maximal elements."""
    return is_ks_contextual(category_scenario(cc)).contextual


# ---------------------------------------------------------------- connections

@dataclass
class ContextConnection:
    """Bijections between the atom sets of every ordered pair of maximal contexts."""

    contexts: tuple
    maps: dict = field(repr=False)  # (i, j) -> {atom of C_i: atom of C_j}

    def transport(self, i, j):
        return self.maps[(i, j)]

    def to_json(self):
        out = []
        for (i, j), m in sorted(self.maps.items()):
            if i < j:
                out.append({"from": list(self.contexts[i]), "to": list(self.contexts[j]),
                            "map": dict(sorted(m.items()))})
        return {"contexts": [list(c) for c in self.contexts], "maps": out}

    @classmethod
    def from_json(cls, obj):
        contexts = tuple(tuple(c) for c in obj["contexts"])
        index = {c: k for k, c in enumerate(contexts)}
        maps = {}
        for entry in obj["maps"]:
            i, j = index[tuple(entry["from"])], index[tuple(entry["to"])]
            maps[(i, j)] = dict(entry["map"])
            maps[(j, i)] = {b: a for a, b in entry["map"].items()}
        return cls(contexts, maps)


def _signature(s, i, j, atom):
    shared = s.named(i) & s.named(j)
    return frozenset(n for n in shared if atom in s.rep(n, i))


def overlap_graph(s: Scenario):
    """Pairs of maximal contexts with a nontrivial common subcontext."""
    m = s.n_contexts
    return [(i, j) for i in range(m) for j in range(i + 1, m) if s.named(i) & s.named(j)]


def _check_maximal(s: Scenario):
    sizes = {len(c) for c in s.max_contexts}
    if len(sizes) > 1:
        raise ValueError("connection search needs every maximal context to have d atoms")
    if s.dim is not None and not s.is_maximal():
        raise ValueError("connection search needs a maximal (all unit atoms) scenario")
    return sizes.pop() if sizes else 0


def _respects(s, i, j, mapping):
    return all(_signature(s, i, j, a) == _signature(s, j, i, b) for a, b in mapping.items())


def _block_bijections(s, parent, child):
    """All signature-respecting bijections C_parent -> C_child, in a fixed order."""
    pb, cb = {}, {}
    for a in s.max_contexts[parent]:
        pb.setdefault(_signature(s, parent, child, a), []).append(a)
    for a in s.max_contexts[child]:
        cb.setdefault(_signature(s, child, parent, a), []).append(a)
    if {k: len(v) for k, v in pb.items()} != {k: len(v) for k, v in cb.items()}:
        return None, 0
    keys = sorted(pb, key=lambda k: sorted(k))
    count = 1
    for k in keys:
        for f in range(2, len(pb[k]) + 1):
            count *= f

    def gen():
        for choice in itertools.product(*(itertools.permutations(cb[k]) for k in keys)):
            m = {}
            for k, perm in zip(keys, choice):
                m.update(zip(pb[k], perm))
            yield m

    return gen, count


def _gauge_to_connection(s, gauge):
    m = s.n_contexts
    maps = {}
    for i in range(m):
        for j in range(m):
            if i != j:
                inv = {c: a for a, c in gauge[j].items()}
                maps[(i, j)] = {a: inv[c] for a, c in gauge[i].items()}
    return ContextConnection(tuple(s.max_contexts), maps)


def flat_connection_search(cc_or_scenario, bound=10_000_000):
    """A flat context connection on a maximal scenario, or None if none exists.

    Tree edges of a BFS forest over the overlap graph are chosen by
    backtracking; every non-tree overlap then has a forced transport, which
    must respect the shared subcontext.
    """
    s = cc_or_scenario.scenario if isinstance(cc_or_scenario, ContextCategory) else cc_or_scenario
    d = _check_maximal(s)
    m = s.n_contexts
    adj = {i: [] for i in range(m)}
    for i, j in overlap_graph(s):
        adj[i].append(j)
        adj[j].append(i)
    order, parent = [], {}
    for root in range(m):
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
    options = {}
    total = 1
    for x in order:
        if parent[x] is not None:
            gen, count = _block_bijections(s, parent[x], x)
            if gen is None:
                return None
            options[x] = gen
            total *= count
    if total > bound:
        raise TooLarge(f"{total} tree assignments exceed bound {bound}")
    pos = {x: k for k, x in enumerate(order)}
    checks = {x: [y for y in adj[x] if pos[y] < pos[x] and y != parent[x]] for x in order}
    gauge = [None] * m

    def consistent(x):
        for y in checks[x]:
            inv = {c: a for a, c in gauge[y].items()}
            if not _respects(s, x, y, {a: inv[c] for a, c in gauge[x].items()}):
                return False
        return True

    def place(k):
        if k == len(order):
            return True
        x = order[k]
        if parent[x] is None:
            gauge[x] = {a: idx for idx, a in enumerate(s.max_contexts[x])}
            return consistent(x) and place(k + 1)
        for bij in options[x]():
            gauge[x] = {bij[a]: c for a, c in gauge[parent[x]].items()}
            if consistent(x) and place(k + 1):
                return True
        gauge[x] = None
        return False

    if d == 0 and m == 0:
        return ContextConnection((), {})
    if not place(0):
        return None
    return _gauge_to_connection(s, gauge)


def _cycle_holonomy_trivial(conn, cycle):
    start = conn.contexts[cycle[0]]
    for a in start:
        x = a
        for u, v in zip(cycle, cycle[1:] + cycle[:1]):
            x = conn.maps[(u, v)][x]
        if x != a:
            return False
    return True


def simple_cycles(edges, m):
    """Every simple cycle (length >= 3) of an undirected graph, once each."""
    adj = {i: set() for i in range(m)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    out = []

    def walk(start, path, seen):
        x = path[-1]
        for y in sorted(adj[x]):
            if y == start and len(path) >= 3 and path[1] < path[-1]:
                out.append(list(path))
            elif y > start and y not in seen:
                seen.add(y)
                path.append(y)
                walk(start, path, seen)
                path.pop()
                seen.discard(y)

    for s in range(m):
        walk(s, [s], {s})
    return out


def fundamental_cycles(edges, m):
    adj = {i: [] for i in range(m)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    parent, depth = {}, {}
    for root in range(m):
        if root in parent:
            continue
        parent[root], depth[root] = None, 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in parent:
                    parent[y], depth[y] = x, depth[x] + 1
                    queue.append(y)
    tree = {frozenset((x, p)) for x, p in parent.items() if p is not None}
    out = []
    for i, j in edges:
        if frozenset((i, j)) in tree:
            continue
        a, b = [i], [j]
        while a[-1] != b[-1]:
            if depth[a[-1]] >= depth[b[-1]]:
                a.append(parent[a[-1]])
            else:
                b.append(parent[b[-1]])
        out.append(a + b[-2::-1])
    return out


def verify_connection(conn: ContextConnection, s: Scenario, all_cycles=False):
    """Replay the connection invariants; returns a list of violations (empty if valid)."""
    problems = []
    m = s.n_contexts
    if tuple(conn.contexts) != tuple(s.max_contexts):
        return ["contexts do not match the scenario"]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            f = conn.maps.get((i, j))
            if f is None or set(f) != set(s.max_contexts[i]) or set(f.values()) != set(s.max_contexts[j]):
                problems.append(f"map {i}->{j} is not a bijection of the context atoms")
                continue
            back = conn.maps.get((j, i), {})
            if any(back.get(b) != a for a, b in f.items()):
                problems.append(f"maps {i}->{j} and {j}->{i} are not mutually inverse")
            if s.named(i) & s.named(j) and not _respects(s, i, j, f):
                problems.append(f"map {i}->{j} moves the shared subcontext")
    if problems:
        return problems
    edges = overlap_graph(s)
    cycles = simple_cycles(edges, m) if all_cycles else fundamental_cycles(edges, m)
    for cyc in cycles:
        if not _cycle_holonomy_trivial(conn, cyc):
            problems.append(f"nontrivial holonomy around {cyc}")
    return problems


def connection_from_colouring(s: Scenario, col: Colouring):
    """Gauge each context by the colouring; the resulting connection is flat."""
    gauge = [{a: col.assignment[a] for a in c} for c in s.max_contexts]
    return _gauge_to_connection(s, gauge)


def colouring_from_connection(s: Scenario, conn: ContextConnection):
    """Transport the atom order of each component's root context to every other context."""
    m = s.n_contexts
    col = {}
    done = set()
    edges = overlap_graph(s)
    adj = {i: set() for i in range(m)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    for root in range(m):
        if root in done:
            continue
        base = {a: k for k, a in enumerate(s.max_contexts[root])}
        queue = deque([root])
        done.add(root)
        while queue:
            x = queue.popleft()
            tr = conn.maps[(root, x)] if x != root else {a: a for a in base}
            for a, k in base.items():
                col[tr[a]] = k
            for y in adj[x]:
                if y not in done:
                    done.add(y)
                    queue.append(y)
    return Colouring(col)


# ---------------------------------------------------------------- classifier

@dataclass
class ClassicalityReport:
    label: str
    acyclic: bool
    d: int
    chi_gstar: int
    contextual: bool
    witness: dict | None = None
    obstruction: dict | None = None

    @property
    def vorobev_all_states_classical(self):
        return self.acyclic

    def to_json(self):
        out = {
            "label": self.label,
            "acyclic": self.acyclic,
            "vorobev_all_states_classical": self.acyclic,
            "contextual": self.contextual,
            "chi_Gstar": self.chi_gstar,
            "d": self.d,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        return out


def classify(s: Scenario) -> ClassicalityReport:
    verdict = is_ks_contextual(s)
    acyclic = is_acyclic(build_context_category(s))
    if verdict.extension is not None:
        chi, _ = chromatic_number(extended_graph(verdict.extension))
    else:
        chi = 0
    if verdict.contextual:
        label = KS_CONTEXTUAL
    elif acyclic:
        label = FULLY_CLASSICAL
    else:
        label = NONCLASSICAL_CORRELATIONS
    return ClassicalityReport(label, acyclic, verdict.d, chi, verdict.contextual,
                              verdict.witness, verdict.obstruction)
