import random

import pytest
from hypothesis import given

from kscontext.algebra_core import Scenario, build_context_category, is_acyclic, truncate
from kscontext.catalog import (
    acyclic_random, chsh, chsh_scenario, n_cycle, random_chordal_scenario, random_maximal_scenario,
    single_context, yu_oh_scenario,
)
from kscontext.errors import TooLarge
from kscontext.extension import extended_cliques, extended_graph
from kscontext.ks_decision import (
    FULLY_CLASSICAL, KS_CONTEXTUAL, NONCLASSICAL_CORRELATIONS, ContextConnection, classify,
    colouring_from_connection, connection_from_colouring, flat_connection_search,
    fundamental_cycles, is_ks_contextual, overlap_graph, simple_cycles, verdict_of_category,
    verify_connection,
)
from kscontext.ortho_graph import d_colouring, d_colouring_with_trace, is_d_colouring, is_valuation

from .conftest import seeded

maximal_scenarios = seeded(random_maximal_scenario)
any_scenarios = seeded(random_maximal_scenario, consistent=False)
chordal_scenarios = seeded(random_chordal_scenario)


def test_yu_oh_is_contextual():
    s = yu_oh_scenario(13)
    v = is_ks_contextual(s)
    assert v.contextual and v.witness is None
    assert v.obstruction["chi_lower_bound"] == 4
    r = classify(s)
    assert r.label == KS_CONTEXTUAL and r.chi_gstar == 4 and r.d == 3
    assert flat_connection_search(s) is None


def test_chsh_is_noncontextual_but_cyclic():
    s, _ = chsh()
    v = is_ks_contextual(s)
    assert not v.contextual and v.witness["type"] == "d_colouring"
    assert is_d_colouring(extended_graph(v.extension), extended_cliques(v.extension), 4, v.colouring)
    r = classify(s)
    assert r.label == NONCLASSICAL_CORRELATIONS
    assert not r.acyclic and not r.vorobev_all_states_classical and r.chi_gstar == 4


def test_trivial_scenarios():
    assert classify(single_context(3)).label == FULLY_CLASSICAL
    assert not is_ks_contextual(Scenario([])).contextual
    assert classify(acyclic_random(4, 3, 9)).label == FULLY_CLASSICAL


@pytest.mark.parametrize("n", range(3, 8))
def test_single_cycles_in_dimension_three(n):
    s = n_cycle(n, 3)
    conn = flat_connection_search(s)
    assert conn is not None
    assert verify_connection(conn, s, all_cycles=True) == []
    assert not is_ks_contextual(s).contextual
    assert classify(s).label == NONCLASSICAL_CORRELATIONS


def test_cycle_with_trivial_overlap():
    s = n_cycle(5, 3, [1, 1, 1, 1, 0])
    assert len(overlap_graph(s)) == 4
    assert is_acyclic(build_context_category(s))
    conn = flat_connection_search(s)
    assert conn is not None and verify_connection(conn, s, all_cycles=True) == []


def test_single_cycles_in_dimension_four_probe():
    # open beyond d = 3; recorded, both oracles must still agree
    for n in range(3, 7):
        s = n_cycle(n, 4)
        assert (flat_connection_search(s) is not None) == (not is_ks_contextual(s).contextual)


@given(any_scenarios)
def test_connection_search_agrees_with_colouring(s):
    conn = flat_connection_search(s)
    col = d_colouring(extended_graph(is_ks_contextual(s).extension),
                      [tuple(c) for c in s.max_contexts], s.d)
    assert (conn is not None) == (col is not None)
    if conn is not None:
        assert verify_connection(conn, s, all_cycles=True) == []
        back = colouring_from_connection(s, conn)
        assert is_d_colouring(extended_graph(is_ks_contextual(s).extension),
                              [tuple(c) for c in s.max_contexts], s.d, back)
    if col is not None:
        assert verify_connection(connection_from_colouring(s, col), s, all_cycles=True) == []


@given(maximal_scenarios)
def test_truncation_invariance(s):
    cc = build_context_category(s)
    assert verdict_of_category(truncate(cc)) == is_ks_contextual(s).contextual


@given(chordal_scenarios)
def test_acyclic_implies_noncontextual(s):
    assert is_acyclic(build_context_category(s))
    assert not is_ks_contextual(s).contextual


@given(any_scenarios)
def test_colour_classes_are_valuations(s):
    v = is_ks_contextual(s)
    if v.contextual:
        return
    g = extended_graph(v.extension)
    cl = extended_cliques(v.extension)
    for k in range(s.d):
        assert is_valuation(g, cl, v.colouring.colour_class(k))


def test_obstruction_replays_identically():
    s = yu_oh_scenario(13)
    a, b = is_ks_contextual(s), is_ks_contextual(s)
    assert a.obstruction == b.obstruction
    col, nodes = d_colouring_with_trace(extended_graph(a.extension), extended_cliques(a.extension), 3)
    assert col is None and nodes == a.obstruction["search_nodes"]


def _mutations(conn):
    (i, j), m = next((k, v) for k, v in sorted(conn.maps.items()) if len(v) >= 2)
    keys = sorted(m)
    swapped = dict(m)
    swapped[keys[0]], swapped[keys[1]] = m[keys[1]], m[keys[0]]
    maps = dict(conn.maps)
    maps[(i, j)] = swapped
    yield "not inverse", ContextConnection(conn.contexts, maps)
    maps = dict(conn.maps)
    maps[(i, j)] = swapped
    maps[(j, i)] = {b: a for a, b in swapped.items()}
    yield "consistent swap", ContextConnection(conn.contexts, maps)
    maps = dict(conn.maps)
    del maps[(i, j)]
    yield "missing", ContextConnection(conn.contexts, maps)


def test_tampered_connections_are_rejected():
    s = n_cycle(5, 3)
    conn = flat_connection_search(s)
    for name, bad in _mutations(conn):
        assert verify_connection(bad, s, all_cycles=True), name


def test_connection_json_round_trip():
    s = chsh_scenario()
    conn = flat_connection_search(s)
    back = ContextConnection.from_json(conn.to_json())
    assert back.maps == conn.maps
    assert verify_connection(back, s) == []


def test_connection_search_bound():
    with pytest.raises(TooLarge):
        flat_connection_search(n_cycle(6, 4), bound=1)


def test_cycle_enumeration():
    square = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]
    assert sorted(map(sorted, simple_cycles(square, 4))) == [[0, 1, 2], [0, 1, 2, 3], [0, 2, 3]]
    assert len(fundamental_cycles(square, 4)) == 2
    assert simple_cycles([(0, 1), (1, 2)], 3) == []


def test_random_generators_cover_both_verdicts():
    def verdicts(consistent):
        return {is_ks_contextual(random_maximal_scenario(random.Random(k), consistent=consistent)).contextual
                for k in range(200)}
    assert verdicts(False) == {True, False}
    # small consistent algebras are essentially always colourable
    assert verdicts(True) == {False}
