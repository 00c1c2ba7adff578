"""Exact vector and subspace realisations of orthogonality graphs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, DuplicateRay, MalformedScenario, NonClosing
from .exact import qdiv
from .ortho_graph import OrthoGraph, maximal_cliques


def _primitive(coords):
    coords = [int(x) for x in coords]
    g = 0
    for x in coords:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no ray")
    coords = [x // g for x in coords]
    lead = next(x for x in coords if x)
    if lead < 0:
        coords = [-x for x in coords]
    return tuple(coords)


def _integer_row(row):
    den = 1
    for x in row:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return _primitive([Fraction(x) * den for x in row])


@dataclass(frozen=True)
class RationalVector:
    """A ray: primitive integer coordinates, first nonzero entry positive."""

    coords: tuple

    @classmethod
    def of(cls, coords):
        if any(isinstance(x, float) for x in coords):
            raise TypeError("float coordinates refused")
        return cls(_integer_row(coords))

    @property
    def dim(self):
        return len(self.coords)

    def dot(self, other):
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def canonical(self):
        return RationalVector.of(self.coords)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def rref(rows, ncols):
    """Reduced row echelon form over the rationals (nonzero rows only)."""
    M = [[Fraction(x) for x in r] for r in rows]
    out = []
    col = 0
    r = 0
    while r < len(M) and col < ncols:
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = qdiv(1, M[r][col])
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        col += 1
    out = [row for row in M[:r] if any(row)]
    return out


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^d with a canonical basis: RREF rows scaled to primitive integers."""

    basis: tuple
    ambient_dim: int

    @classmethod
    def span(cls, vectors, d):
        rows = [tuple(v) for v in vectors]
        for v in rows:
            if len(v) != d:
                raise DimensionMismatch(f"vector {v} is not in dimension {d}")
        red = rref(rows, d)
        return cls(tuple(_integer_row(r) for r in red), d)

    @classmethod
    def ray(cls, coords):
        v = RationalVector.of(coords)
        return cls((v.coords,), v.dim)

    @property
    def rank(self):
        return len(self.basis)

    def complement(self):
        """Orthogonal complement, via the null space of the basis matrix."""
        d = self.ambient_dim
        red = rref(self.basis, d)
        pivots = []
        for row in red:
            pivots.append(next(j for j, x in enumerate(row) if x != 0))
        free = [j for j in range(d) if j not in pivots]
        vecs = []
        for f in free:
            v = [Fraction(0)] * d
            v[f] = Fraction(1)
            for row, p in zip(red, pivots):
                v[p] = -row[f]
            vecs.append(v)
        return Subspace.span(vecs, d)

    def orthogonal_to(self, other):
        return all(dot(a, b) == 0 for a in self.basis for b in other.basis)

    def join(self, other):
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def to_json(self):
        return [list(r) for r in self.basis]


@dataclass(frozen=True)
class Realisation:
    vertex_map: dict = field(hash=False)
    ambient_dim: int
    origins: dict = field(default_factory=dict, hash=False, compare=False)

    def is_rank_one(self):
        return all(s.rank == 1 for s in self.vertex_map.values())

    def to_json(self):
        if self.is_rank_one():
            return {"d": self.ambient_dim, "vectors": {k: list(s.basis[0]) for k, s in sorted(self.vertex_map.items())}}
        return {"d": self.ambient_dim, "subspaces": {k: s.to_json() for k, s in sorted(self.vertex_map.items())}}

    @classmethod
    def from_json(cls, obj):
        d = obj["d"]
        vm = {}
        for k, v in obj.get("vectors", {}).items():
            vm[k] = Subspace.ray(v)
        for k, rows in obj.get("subspaces", {}).items():
            vm[k] = Subspace.span(rows, d)
        for s in vm.values():
            if s.ambient_dim != d:
                raise DimensionMismatch("vector dimension differs from d")
        return cls(vm, d)


def graph_from_realisation(vertex_map, d):
    labels = list(vertex_map)
    edges = [(a, b) for a, b in itertools.combinations(labels, 2)
             if vertex_map[a].orthogonal_to(vertex_map[b])]
    return OrthoGraph(labels, edges)


def graph_from_vectors(vectors, d=None):
    """Orthogonality graph of a labelled family of rays (edge iff dot product is 0)."""
    if not isinstance(vectors, dict):
        vectors = {f"v{i}": v for i, v in enumerate(vectors)}
    vm = {}
    seen = {}
    for label, coords in vectors.items():
        if isinstance(coords, RationalVector):
            coords = coords.coords
        coords = tuple(coords)
        if d is None:
            d = len(coords)
        if len(coords) != d:
            raise DimensionMismatch(f"{label} has dimension {len(coords)}, expected {d}")
        ray = RationalVector.of(coords)
        if ray in seen:
            raise DuplicateRay(f"{label} and {seen[ray]} span the same ray")
        seen[ray] = label
        vm[label] = Subspace((ray.coords,), d)
    return graph_from_realisation(vm, d), Realisation(vm, d)


def check_realisation(r: Realisation, g: OrthoGraph):
    """Faithful and constraint-preserving: distinct subspaces, orthogonal iff adjacent."""
    subs = list(r.vertex_map.values())
    if len(set(subs)) != len(subs):
        return False
    if set(r.vertex_map) != set(g.vertices):
        return False
    for a, b in itertools.combinations(g.vertices, 2):
        if r.vertex_map[a].orthogonal_to(r.vertex_map[b]) != g.has_edge(a, b):
            return False
    return True


def _clique_span(r, clique):
    return Subspace.span([row for v in clique for row in r.vertex_map[v].basis], r.ambient_dim)


def is_unital(r: Realisation, max_cliques):
    for c in max_cliques:
        subs = [r.vertex_map[v] for v in c]
        if not all(a.orthogonal_to(b) for a, b in itertools.combinations(subs, 2)):
            return False
        if sum(s.rank for s in subs) != r.ambient_dim:
            return False
    return True


def deficient_cliques(r: Realisation, g: OrthoGraph):
    """Maximal cliques whose span is a proper subspace, with their complements."""
    out = []
    for c in maximal_cliques(g):
        if sum(r.vertex_map[v].rank for v in c) < r.ambient_dim:
            out.append((c, _clique_span(r, c).complement()))
    return out


def complete(r: Realisation, g: OrthoGraph, max_rounds=32, max_vertices=5000):
    """Adjoin clique complements until every maximal clique resolves the identity."""
    vm = dict(r.vertex_map)
    origins = {k: tuple(v) for k, v in r.origins.items()}
    d = r.ambient_dim
    graph = g
    for _ in range(max_rounds):
        by_sub = {s: k for k, s in vm.items()}
        fresh = {}
        for clique, comp in deficient_cliques(Realisation(vm, d), graph):
            if comp in by_sub:
                origins.setdefault(by_sub[comp], ())
                origins[by_sub[comp]] += (tuple(clique),)
                continue
            if comp not in fresh:
                fresh[comp] = ("cmpl:" + ",".join(sorted(clique)), [])
            fresh[comp][1].append(tuple(clique))
        if not fresh:
            return graph, Realisation(vm, d, origins)
        for comp, (label, cl) in fresh.items():
            vm[label] = comp
            origins[label] = tuple(cl)
        if len(vm) > max_vertices:
            break
        graph = graph_from_realisation(vm, d)
    raise NonClosing(f"completion did not close within {max_rounds} rounds")


def is_freely_completable(r: Realisation, g: OrthoGraph):
    """(True, None) or (False, counterexample) per the two completion conditions."""
    deficient = deficient_cliques(r, g)
    for (c1, p1), (c2, p2) in itertools.combinations(deficient, 2):
        if p1 == p2:
            return False, {"kind": "equal_complements", "cliques": [list(c1), list(c2)]}
    for c, p in deficient:
        for v in g.vertices:
            if v not in c and p.orthogonal_to(r.vertex_map[v]):
                return False, {"kind": "extra_orthogonality", "clique": list(c), "vertex": v}
    return True, None


def scenario_from_realisation(g: OrthoGraph, r: Realisation):
    """Scenario whose contexts are the maximal cliques, with dims = subspace ranks."""
    from .algebra_core import Scenario
    cliques = maximal_cliques(g)
    if not is_unital(r, cliques):
        raise MalformedScenario("realisation is not unital; complete it first")
    dims = {v: r.vertex_map[v].rank for v in g.vertices}
    return Scenario(cliques, list(g.vertices), dims, r.ambient_dim)


def check_specker(s) -> bool:
    """Every triangle of pairwise compatible named events lies in one context."""
    from .algebra_core import compatibility_graph
    g = compatibility_graph(s)
    named = [s.named(i) for i in range(s.n_contexts)]
    verts = g.vertices
    for a, b, c in itertools.combinations(verts, 3):
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c):
            if not any({a, b, c} <= n for n in named):
                return False
    return True
