import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from kscontext.errors import CapExceeded, CliqueSizeMismatch, InvalidColouring
from kscontext.ortho_graph import (
    Colouring, OrthoGraph, chromatic_number, clique_number, complete_graph, cycle_graph,
    d_colouring, enumerate_valuations, independent_sets, is_chordal, is_d_colouring,
    is_perfect_elimination_order, is_valuation, k_colouring, ks_colouring, lex_bfs,
    maximal_cliques, perfect_elimination_order, validate_colouring,
)


def random_graph(seed, n_max=11, p_num=None):
    rng = random.Random(seed)
    n = rng.randint(0, n_max)
    p = p_num if p_num is not None else rng.choice([2, 4, 5, 7])
    labels = [f"v{i}" for i in range(n)]
    edges = [(a, b) for a, b in itertools.combinations(labels, 2) if rng.randrange(10) < p]
    return OrthoGraph(labels, edges)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.sorted_edges())
    return h


def brute_chromatic(g):
    n = len(g.vertices)
    for k in range(0 if n == 0 else 1, n + 1):
        for assign in itertools.product(range(k), repeat=n):
            if all(assign[g.index[a]] != assign[g.index[b]] for a, b in g.sorted_edges()):
                return k
    return n


graphs = st.integers(0, 10**6).map(random_graph)
small_graphs = st.integers(0, 10**6).map(lambda s: random_graph(s, n_max=7))


def test_graph_basics():
    g = OrthoGraph(["a", "b", "c"], [("a", "b")])
    assert g.has_edge("b", "a") and not g.has_edge("a", "c")
    assert list(g.neighbours("a")) == ["b"]
    assert OrthoGraph.from_json(g.to_json()) == g
    assert "p edge 3 1" in g.to_dimacs().splitlines()
    with pytest.raises(ValueError):
        OrthoGraph(["a"], [("a", "a")])
    with pytest.raises(ValueError):
        OrthoGraph(["a"], [("a", "b")])


@given(graphs)
def test_maximal_cliques_match_networkx(g):
    ours = sorted(tuple(sorted(c)) for c in maximal_cliques(g))
    theirs = sorted(tuple(sorted(c)) for c in nx.find_cliques(to_nx(g))) if g.vertices else []
    assert ours == theirs


@given(small_graphs)
def test_chromatic_number_matches_brute_force(g):
    k, col = chromatic_number(g)
    assert k == brute_chromatic(g)
    assert validate_colouring(g, col) and col.n_colours == k


@given(graphs)
def test_chromatic_witness_and_bounds(g):
    k, col = chromatic_number(g)
    assert validate_colouring(g, col)
    assert clique_number(g) <= k
    if k > 1:
        assert k_colouring(g, k - 1)[0] is None


def test_known_chromatic_numbers():
    assert chromatic_number(complete_graph([f"k{i}" for i in range(4)]))[0] == 4
    assert chromatic_number(cycle_graph([f"c{i}" for i in range(5)]))[0] == 3
    assert chromatic_number(cycle_graph([f"c{i}" for i in range(6)]))[0] == 2
    assert chromatic_number(OrthoGraph([]))[0] == 0


def test_d_colouring_requires_clique_size_d():
    g = complete_graph(["a", "b", "c"])
    with pytest.raises(CliqueSizeMismatch):
        d_colouring(g, [("a", "b", "c")], 2)
    col = d_colouring(g, [("a", "b", "c")], 3)
    assert is_d_colouring(g, [("a", "b", "c")], 3, col)


def test_d_colouring_of_odd_wheel_fails():
    # triangles fanning round an odd cycle force the hub's neighbours to alternate
    rim = [f"r{i}" for i in range(5)]
    edges = [("hub", r) for r in rim] + list(zip(rim, rim[1:] + rim[:1]))
    g = OrthoGraph(["hub"] + rim, edges)
    tri = [("hub", rim[i], rim[(i + 1) % 5]) for i in range(5)]
    assert d_colouring(g, tri, 3) is None


def test_valuations_of_five_cycle(oracle):
    g = cycle_graph([f"e{i}" for i in range(5)])
    assert len(enumerate_valuations(g, maximal_cliques(g))) == oracle["five_cycle_valuations"]
    assert ks_colouring(g, maximal_cliques(g)) is None


@given(small_graphs)
def test_valuations_match_brute_force(g):
    cliques = maximal_cliques(g)
    ours = {v.chosen for v in enumerate_valuations(g, cliques)}
    brute = set()
    for r in range(len(g.vertices) + 1):
        for sub in itertools.combinations(g.vertices, r):
            if is_valuation(g, cliques, frozenset(sub)):
                brute.add(frozenset(sub))
    assert ours == brute


def test_valuation_cap():
    g = OrthoGraph([f"v{i}" for i in range(6)])
    cliques = [(v,) for v in g.vertices]
    assert len(enumerate_valuations(g, cliques, cap=1)) == 1
    g2 = OrthoGraph(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])
    with pytest.raises(CapExceeded):
        enumerate_valuations(g2, maximal_cliques(g2), cap=3)


@given(small_graphs)
def test_independent_sets_match_brute_force(g):
    ours = set(independent_sets(g))
    brute = {frozenset(s) for r in range(len(g.vertices) + 1)
             for s in itertools.combinations(g.vertices, r)
             if not any(g.has_edge(a, b) for a, b in itertools.combinations(s, 2))}
    assert ours == brute


@given(graphs)
def test_chordality_matches_networkx(g):
    assert is_chordal(g) == nx.is_chordal(to_nx(g))
    if is_chordal(g):
        assert is_perfect_elimination_order(g, perfect_elimination_order(g))


@given(graphs)
def test_lex_bfs_is_permutation(g):
    assert sorted(lex_bfs(g)) == sorted(g.vertices)


def test_validate_colouring_rejects_clash():
    g = OrthoGraph(["a", "b"], [("a", "b")])
    with pytest.raises(InvalidColouring):
        validate_colouring(g, Colouring({"a": 0, "b": 0}))
    with pytest.raises(InvalidColouring):
        validate_colouring(g, Colouring({"a": 0}))
