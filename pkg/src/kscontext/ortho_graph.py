"""Finite simple graphs: cliques, valuations, exact colouring, chordality."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ._backend import kernels
from .errors import CapExceeded, CliqueSizeMismatch, InvalidColouring

DEFAULT_VALUATION_CAP = 1_000_000


class OrthoGraph:
    """Immutable simple graph over string labels.

    Vertex order is the order given at construction; all searches break ties
    by that order, so results are deterministic.
    """

    __slots__ = ("vertices", "edges", "index", "adj")

    def __init__(self, vertices, edges=()):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex labels")
        index = {v: i for i, v in enumerate(verts)}
        adj = [0] * len(verts)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"loop at {u!r}")
            if u not in index or v not in index:
                raise ValueError(f"edge {u!r}-{v!r} references unknown vertex")
            es.add(frozenset((u, v)))
            adj[index[u]] |= 1 << index[v]
            adj[index[v]] |= 1 << index[u]
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "adj", tuple(adj))

    def __setattr__(self, name, value):
        raise AttributeError("OrthoGraph is immutable")

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, OrthoGraph)
            and set(self.vertices) == set(other.vertices)
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((frozenset(self.vertices), self.edges))

    def __repr__(self):
        return f"OrthoGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def has_edge(self, u, v):
        return bool(self.adj[self.index[u]] >> self.index[v] & 1)

    def neighbours(self, v):
        return [self.vertices[i] for i in _bits(self.adj[self.index[v]])]

    def mask(self, labels):
        m = 0
        for x in labels:
            m |= 1 << self.index[x]
        return m

    def labels(self, mask):
        return tuple(self.vertices[i] for i in _bits(mask))

    def sorted_edges(self):
        out = []
        for e in self.edges:
            u, v = sorted(e, key=self.index.__getitem__)
            out.append((u, v))
        out.sort(key=lambda p: (self.index[p[0]], self.index[p[1]]))
        return out

    def induced(self, keep):
        keep = [v for v in self.vertices if v in set(keep)]
        ks = set(keep)
        return OrthoGraph(keep, [e for e in self.edges if e <= ks])

    def to_json(self):
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["vertices"], [tuple(e) for e in obj.get("edges", [])])

    def to_dimacs(self):
        lines = [f"c vertices: {' '.join(self.vertices)}", f"p edge {len(self.vertices)} {len(self.edges)}"]
        for u, v in self.sorted_edges():
            lines.append(f"e {self.index[u] + 1} {self.index[v] + 1}")
        return "\n".join(lines) + "\n"

    def digest(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def complete_graph(labels):
    labels = list(labels)
    return OrthoGraph(labels, [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]])


def cycle_graph(labels):
    labels = list(labels)
    n = len(labels)
    return OrthoGraph(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])


@dataclass(frozen=True)
class Colouring:
    assignment: dict = field(hash=False)

    @property
    def n_colours(self):
        return len(set(self.assignment.values()))

    def colour_class(self, k):
        return frozenset(v for v, c in self.assignment.items() if c == k)

    def to_json(self):
        return {v: c for v, c in sorted(self.assignment.items())}


@dataclass(frozen=True)
class Valuation:
    chosen: frozenset

    def to_json(self):
        return sorted(self.chosen)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask):
    return bin(mask).count("1")


def _sort_key(g, labels):
    return tuple(sorted(g.index[v] for v in labels))


def maximal_cliques(g: OrthoGraph):
    """All inclusion-maximal cliques, each as a tuple in vertex order, sorted canonically."""
    masks = kernels.maximal_cliques(list(g.adj), len(g))
    out = [g.labels(m) for m in masks]
    out.sort(key=lambda c: _sort_key(g, c))
    return out


def clique_number(g: OrthoGraph):
    return max((len(c) for c in maximal_cliques(g)), default=0)


def is_proper(g: OrthoGraph, assignment):
    return all(assignment[u] != assignment[v] for u, v in (tuple(e) for e in g.edges))


def k_colouring(g: OrthoGraph, k, precolour=()):
    """A proper colouring with colours in range(k), or None. Also returns search-node count."""
    pre = [(g.index[v], c) for v, c in precolour]
    colours, nodes = kernels.k_colour(list(g.adj), len(g), k, pre)
    if colours is None:
        return None, nodes
    return Colouring({v: colours[i] for i, v in enumerate(g.vertices)}), nodes


def _largest_clique(g):
    best = ()
    for c in maximal_cliques(g):
        if len(c) > len(best):
            best = c
    return best


def chromatic_number(g: OrthoGraph):
    """Exact chromatic number with a witness colouring using exactly that many colours."""
    n = len(g)
    if n == 0:
        return 0, Colouring({})
    clique = _largest_clique(g)
    lower = len(clique)
    greedy = kernels.greedy_dsatur(list(g.adj), n)
    upper = max(greedy) + 1
    pre = [(v, i) for i, v in enumerate(clique)]
    for k in range(lower, upper):
        col, _ = k_colouring(g, k, pre)
        if col is not None:
            return k, col
    return upper, Colouring({v: greedy[i] for i, v in enumerate(g.vertices)})


def _check_cliques(g, max_cliques):
    out = []
    for c in max_cliques:
        c = tuple(c)
        for i, u in enumerate(c):
            for v in c[i + 1:]:
                if not g.has_edge(u, v):
                    raise ValueError(f"{u!r} and {v!r} share a clique but are not adjacent")
        out.append(c)
    return out


def d_colouring(g: OrthoGraph, max_cliques, d):
    """Proper d-colouring in which each listed clique carries all d colours, or None."""
    cliques = _check_cliques(g, max_cliques)
    for c in cliques:
        if len(c) != d:
            raise CliqueSizeMismatch(f"clique {c} has {len(c)} vertices, expected {d}")
    pre = [(v, i) for i, v in enumerate(cliques[0])] if cliques else []
    col, _ = k_colouring(g, d, pre)
    return col


def d_colouring_with_trace(g: OrthoGraph, max_cliques, d):
    """As :func:`d_colouring`, also returning the number of search nodes visited."""
    cliques = _check_cliques(g, max_cliques)
    for c in cliques:
        if len(c) != d:
            raise CliqueSizeMismatch(f"clique {c} has {len(c)} vertices, expected {d}")
    pre = [(v, i) for i, v in enumerate(cliques[0])] if cliques else []
    return k_colouring(g, d, pre)


def is_d_colouring(g, max_cliques, d, col: Colouring):
    a = col.assignment
    if set(a) != set(g.vertices):
        return False
    if any(not (0 <= c < d) for c in a.values()):
        return False
    if not is_proper(g, a):
        return False
    return all(sorted(a[v] for v in c) == list(range(d)) for c in max_cliques)


def enumerate_valuations(g: OrthoGraph, max_cliques, cap=DEFAULT_VALUATION_CAP):
    """All independent sets meeting every listed clique exactly once, canonically ordered."""
    cliques = _check_cliques(g, max_cliques)
    masks = [g.mask(c) for c in cliques]
    found, truncated = kernels.valuations(list(g.adj), len(g), masks, cap)
    if truncated:
        raise CapExceeded(cap)
    out = [Valuation(frozenset(g.labels(m))) for m in found]
    out.sort(key=lambda val: _sort_key(g, val.chosen))
    return out


def ks_colouring(g: OrthoGraph, max_cliques):
    cliques = _check_cliques(g, max_cliques)
    masks = [g.mask(c) for c in cliques]
    found, _ = kernels.valuations(list(g.adj), len(g), masks, 1)
    if not found:
        return None
    return Valuation(frozenset(g.labels(found[0])))


def is_valuation(g, max_cliques, chosen):
    chosen = set(chosen)
    if not chosen <= set(g.vertices):
        return False
    for u in chosen:
        for v in chosen:
            if u != v and g.has_edge(u, v):
                return False
    return all(len(chosen.intersection(c)) == 1 for c in max_cliques)


def independent_sets(g: OrthoGraph, cap=DEFAULT_VALUATION_CAP):
    """Every independent set (including the empty one), canonically ordered."""
    n = len(g)
    adj = g.adj
    out = []

    def grow(chosen, start, allowed):
        out.append(chosen)
        if len(out) > cap:
            raise CapExceeded(cap)
        for v in range(start, n):
            if allowed >> v & 1:
                grow(chosen | (1 << v), v + 1, allowed & ~adj[v] & ~(1 << v))

    grow(0, 0, (1 << n) - 1)
    res = [frozenset(g.labels(m)) for m in out]
    res.sort(key=lambda s: (len(s), _sort_key(g, s)))
    return res


def lex_bfs(g: OrthoGraph):
    """Lexicographic breadth-first search order (partition refinement)."""
    n = len(g)
    if n == 0:
        return []
    parts = [list(range(n))]
    order = []
    while parts:
        v = parts[0].pop(0)
        if not parts[0]:
            parts.pop(0)
        order.append(v)
        nb = g.adj[v]
        refined = []
        for part in parts:
            inside = [u for u in part if nb >> u & 1]
            outside = [u for u in part if not nb >> u & 1]
            if inside:
                refined.append(inside)
            if outside:
                refined.append(outside)
        parts = refined
    return [g.vertices[i] for i in order]


def is_perfect_elimination_order(g: OrthoGraph, order):
    """Check that ``order`` (elimination first to last) is a perfect elimination ordering."""
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in g.neighbours(v) if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        for u in later:
            if u != parent and not g.has_edge(parent, u):
                return False
    return True


def perfect_elimination_order(g: OrthoGraph):
    """A perfect elimination ordering if g is chordal, else None."""
    order = list(reversed(lex_bfs(g)))
    return order if is_perfect_elimination_order(g, order) else None


def is_chordal(g: OrthoGraph):
    return perfect_elimination_order(g) is not None


def validate_colouring(g: OrthoGraph, col: Colouring):
    if set(col.assignment) != set(g.vertices):
        raise InvalidColouring("colouring does not cover the vertex set")
    if not is_proper(g, col.assignment):
        raise InvalidColouring("adjacent vertices share a colour")
    return True
